"""Canonical dictionary and the training-data replacement-pair table."""

from __future__ import annotations

import json
from bisect import bisect_left
from collections import Counter
from typing import IO, Iterable, Sequence

from .corpus import Utterance


class Dictionary:
    """An immutable set of lowercase canonical words."""

    def __init__(self, words: Iterable[str]):
        cleaned = set()
        for w in words:
            w = w.strip().lower()
            if not w:
                continue
            if any(c.isspace() for c in w):
                raise ValueError(f"dictionary entries must be whitespace-free: {w!r}")
            cleaned.add(w)
        self.words: frozenset[str] = frozenset(cleaned)
        self._sorted: list[str] | None = None

    @classmethod
    def from_file(cls, path: str) -> "Dictionary":
        with open(path, encoding="utf-8") as fh:
            d = cls(fh)
        if not d.words:
            raise ValueError(f"dictionary file is empty: {path}")
        return d

    def __contains__(self, word: str) -> bool:
        return bool(word) and word.lower() in self.words

    def __len__(self) -> int:
        return len(self.words)

    @property
    def sorted_words(self) -> list[str]:
        if self._sorted is None:
            self._sorted = sorted(self.words)
        return self._sorted

    def words_with_prefix(self, prefix: str) -> list[str]:
        """All words having ``prefix`` as a proper prefix, sorted."""
        ws = self.sorted_words
        lo = bisect_left(ws, prefix)
        out = []
        for i in range(lo, len(ws)):
            if not ws[i].startswith(prefix):
                break
            if ws[i] != prefix:
                out.append(ws[i])
        return out


def contains(dictionary: Dictionary, word: str) -> bool:
    """Case-insensitive dictionary membership."""
    return word in dictionary


class LookupTable:
    """Replacement pairs harvested from training data, with counts.

    Identity pairs (raw -> raw) are stored with their counts as well; their
    counts feed the decision to keep a token unchanged.
    """

    def __init__(self, pairs: dict[str, list[tuple[str, int]]]):
        self.pairs = pairs

    def candidates(self, raw: str) -> list[tuple[str, int]]:
        return list(self.pairs.get(raw, ()))

    def count(self, raw: str, replacement: str) -> int:
        for rep, c in self.pairs.get(raw, ()):
            if rep == replacement:
                return c
        return 0

    def total_count(self) -> int:
        return sum(c for reps in self.pairs.values() for _, c in reps)

    def vocabulary(self) -> set[str]:
        """All raw tokens plus all tokens of replacement strings."""
        vocab = set(self.pairs)
        for reps in self.pairs.values():
            for rep, _ in reps:
                vocab.update(rep.split(" "))
        return vocab

    def to_json(self, out: IO[str]) -> None:
        json.dump({k: [[r, c] for r, c in v] for k, v in self.pairs.items()},
                  out, ensure_ascii=False, sort_keys=True)

    @classmethod
    def from_json(cls, fh: IO[str]) -> "LookupTable":
        data = json.load(fh)
        return cls({k: [(r, int(c)) for r, c in v] for k, v in data.items()})


def build_lookup(training: Sequence[Utterance]) -> LookupTable:
    """Count every (lowercase raw, lowercase gold) pair in the training data."""
    counts: Counter[tuple[str, str]] = Counter()
    for utt in training:
        for tok in utt.tokens:
            if tok.gold is None:
                raise ValueError(f"utterance {utt.id!r}: token {tok.raw!r} has no gold annotation")
            counts[(tok.raw.lower(), tok.gold.lower())] += 1
    pairs: dict[str, list[tuple[str, int]]] = {}
    for (raw, gold), c in counts.items():
        pairs.setdefault(raw, []).append((gold, c))
    for raw in pairs:
        pairs[raw].sort(key=lambda rc: (-rc[1], rc[0]))
    return LookupTable(pairs)


def lookup_candidates(table: LookupTable, raw: str) -> list[tuple[str, int]]:
    """All stored replacements for ``raw`` (already lowercased), with counts."""
    return table.candidates(raw)
