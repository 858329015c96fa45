"""Spelling-correction suggestions by combined character-edit and
phonetic-key distance.

Two modes are provided: ``normal`` (char edit <= 2 or phonetic edit <= 1) and
``bad-spellers`` (char edit <= 4 or phonetic edit <= 2), the latter returning
a superset of the former for every input.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .lexicon import Dictionary


@dataclass(frozen=True)
class SpellMode:
    name: str
    max_char_edit: int
    max_phonetic_edit: int


NORMAL = SpellMode("normal", max_char_edit=2, max_phonetic_edit=1)
BAD_SPELLERS = SpellMode("bad-spellers", max_char_edit=4, max_phonetic_edit=2)

MODES = {m.name: m for m in (NORMAL, BAD_SPELLERS)}


@dataclass(frozen=True)
class Suggestion:
    word: str
    distance: float
    rank: int


def edit_distance(a: Sequence, b: Sequence, cutoff: int | None = None) -> int:
    """Unit-cost Levenshtein distance between two sequences.

    With ``cutoff`` set, returns ``cutoff + 1`` as soon as the true distance
    is known to exceed it (banded computation).
    """
    if a == b:
        return 0
    la, lb = len(a), len(b)
    if la > lb:
        a, b, la, lb = b, a, lb, la
    if cutoff is not None and lb - la > cutoff:
        return cutoff + 1
    prev = list(range(la + 1))
    cur = [0] * (la + 1)
    for j in range(1, lb + 1):
        cur[0] = j
        bj = b[j - 1]
        best = cur[0]
        for i in range(1, la + 1):
            cost = 0 if a[i - 1] == bj else 1
            cur[i] = min(prev[i] + 1, cur[i - 1] + 1, prev[i - 1] + cost)
            if cur[i] < best:
                best = cur[i]
        if cutoff is not None and best > cutoff:
            return cutoff + 1
        prev, cur = cur, prev
    return prev[la]


# Consonant sound classes; vowels and h/w/y are dropped after the first
# position, the first letter is kept verbatim.
_SOUND_CLASSES = {}
for _letters, _digit in (("bfpv", "1"), ("cgjkqsxz", "2"), ("dt", "3"),
                         ("l", "4"), ("mn", "5"), ("r", "6")):
    for _c in _letters:
        _SOUND_CLASSES[_c] = _digit
_DROPPED = set("aeiouhwy")


def phonetic_key(word: str) -> str:
    """Deterministic sound-class key: lowercase, alphabetic-only, first
    letter verbatim, consonants mapped to digit classes, adjacent duplicate
    symbols collapsed, no length truncation.

    Letters outside a-z (no sound class) are kept verbatim.
    """
    letters = [c for c in word.lower() if c.isalpha()]
    if not letters:
        return ""
    out = [letters[0]]
    for c in letters[1:]:
        if c in _DROPPED:
            continue
        sym = _SOUND_CLASSES.get(c, c)
        if sym != out[-1]:
            out.append(sym)
    return "".join(out)


class SpellChecker:
    """Suggestion engine over an immutable dictionary.

    Dictionary phonetic keys are precomputed once; suggestion lookups are
    pure and safe to run concurrently. Semantics are identical to a brute
    force scan of the whole dictionary with the stated predicate.
    """

    def __init__(self, dictionary: Dictionary, char_weight: float = 1.0,
                 phonetic_weight: float = 1.0):
        self.dictionary = dictionary
        self.char_weight = char_weight
        self.phonetic_weight = phonetic_weight
        self._words = dictionary.sorted_words
        self._keys = [phonetic_key(w) for w in self._words]

    def suggest(self, word: str, mode: SpellMode) -> list[Suggestion]:
        if not word:
            return []
        qkey = phonetic_key(word)
        scored: list[tuple[float, int, str]] = []
        for w, wkey in zip(self._words, self._keys):
            # bounded passes decide inclusion cheaply; exact distances are
            # recomputed only for the few words that pass
            cd = edit_distance(word, w, cutoff=mode.max_char_edit)
            char_ok = cd <= mode.max_char_edit
            pd = edit_distance(qkey, wkey, cutoff=mode.max_phonetic_edit)
            phon_ok = pd <= mode.max_phonetic_edit
            if not (char_ok or phon_ok):
                continue
            if not char_ok:
                cd = edit_distance(word, w)
            if not phon_ok:
                pd = edit_distance(qkey, wkey)
            scored.append((self.char_weight * cd + self.phonetic_weight * pd, cd, w))
        scored.sort(key=lambda t: (t[0], t[1], t[2]))
        return [Suggestion(w, dist, rank) for rank, (dist, _cd, w) in enumerate(scored)]


def suggest(dictionary: Dictionary, word: str, mode: SpellMode) -> list[Suggestion]:
    """Module-level convenience; caches one SpellChecker per Dictionary."""
    checker = getattr(dictionary, "_spellchecker", None)
    if checker is None or checker.dictionary is not dictionary:
        checker = SpellChecker(dictionary)
        dictionary._spellchecker = checker
    return checker.suggest(word, mode)
