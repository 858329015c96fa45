import io
import random
from collections import Counter

import pytest

from lexnorm.corpus import TokenEntry, Utterance
from lexnorm.lexicon import (Dictionary, LookupTable, build_lookup, contains,
                             lookup_candidates)


def utt(*pairs):
    return Utterance(tuple(TokenEntry(r, g) for r, g in pairs))


def test_build_lookup_counts():
    table = build_lookup([utt(("u", "you")), utt(("u", "you"))])
    assert table.pairs["u"] == [("you", 2)]


def test_build_lookup_identity_pair_kept():
    table = build_lookup([utt(("ok", "ok"))])
    assert table.pairs["ok"] == [("ok", 1)]


def test_build_lookup_multiple_replacements():
    table = build_lookup([utt(("r", "are"), ("r", "r"))])
    assert sorted(table.pairs["r"]) == [("are", 1), ("r", 1)]


def test_build_lookup_missing_gold_names_utterance():
    bad = Utterance((TokenEntry("u"),), id="utt-3")
    with pytest.raises(ValueError, match="utt-3"):
        build_lookup([bad])


def test_build_lookup_lowercases():
    table = build_lookup([utt(("U", "You"))])
    assert table.pairs["u"] == [("you", 1)]


def test_lookup_candidates():
    table = build_lookup([utt(("u", "you")), utt(("u", "you"))])
    assert lookup_candidates(table, "u") == [("you", 2)]
    assert lookup_candidates(table, "zzz") == []


def test_total_count_equals_training_tokens():
    utts = [utt(("a", "a"), ("b", "bee")), utt(("a", "ay"))]
    assert build_lookup(utts).total_count() == 3


def test_lookup_brute_force_oracle():
    rng = random.Random(0)
    words = ["u", "r", "ok", "lol", "b"]
    golds = ["you", "are", "ok", "laughing out loud", "be", "u", "r", "b"]
    utts = []
    expected = Counter()
    for _ in range(20):
        pairs = []
        for _ in range(rng.randint(1, 5)):
            raw, gold = rng.choice(words), rng.choice(golds)
            pairs.append((raw, gold))
            expected[(raw, gold)] += 1
        utts.append(utt(*pairs))
    table = build_lookup(utts)
    for (raw, gold), k in expected.items():
        assert table.count(raw, gold) == k
    assert table.total_count() == sum(expected.values())


def test_vocabulary_includes_raw_and_gold_tokens():
    table = build_lookup([utt(("lol", "laughing out loud"))])
    assert table.vocabulary() == {"lol", "laughing", "out", "loud"}


def test_table_json_roundtrip():
    table = build_lookup([utt(("u", "you"), ("ok", "ok"))])
    buf = io.StringIO()
    table.to_json(buf)
    restored = LookupTable.from_json(io.StringIO(buf.getvalue()))
    assert restored.pairs == table.pairs


def test_dictionary_membership():
    d = Dictionary(["being", "Be"])
    assert contains(d, "being")
    assert contains(d, "BE")
    assert not contains(d, "")
    assert not contains(d, "sumthn")


def test_dictionary_rejects_whitespace_entries():
    with pytest.raises(ValueError):
        Dictionary(["a b"])


def test_dictionary_empty_file_rejected(tmp_path):
    p = tmp_path / "dict.txt"
    p.write_text("\n")
    with pytest.raises(ValueError):
        Dictionary.from_file(str(p))


def test_words_with_prefix_proper_only():
    d = Dictionary(["social", "socially", "socials", "sock"])
    assert d.words_with_prefix("social") == ["socially", "socials"]
    assert d.words_with_prefix("zzz") == []
