"""Unigram/bigram language models with additive smoothing.

Each sentence is framed with boundary markers: a start marker as left
context for the first token and an end marker following the last token. The
end marker doubles as the model's reserved extra outcome, so for any seen
context the smoothed bigram distribution over vocabulary + end marker sums
to exactly 1; out-of-vocabulary queries draw from the same reserved
smoothing mass.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from typing import IO, Iterable

BOS = "<s>"
EOS = "</s>"


class NGramModel:
    def __init__(self, alpha: float = 1.0):
        if alpha <= 0:
            raise ValueError("alpha must be > 0")
        self.alpha = alpha
        self.unigram_counts: Counter[str] = Counter()
        self.bigram_counts: Counter[tuple[str, str]] = Counter()
        self.total_tokens = 0
        self.sentence_count = 0

    @property
    def vocab_size(self) -> int:
        return len(self.unigram_counts)

    def context_count(self, prev: str) -> int:
        if prev == BOS:
            return self.sentence_count
        return self.unigram_counts.get(prev, 0)

    def to_json(self, out: IO[str]) -> None:
        json.dump(
            {
                "alpha": self.alpha,
                "total_tokens": self.total_tokens,
                "sentence_count": self.sentence_count,
                "unigrams": dict(self.unigram_counts),
                "bigrams": {f"{a} {b}": c for (a, b), c in self.bigram_counts.items()},
            },
            out, ensure_ascii=False, sort_keys=True,
        )

    @classmethod
    def from_json(cls, fh: IO[str]) -> "NGramModel":
        data = json.load(fh)
        m = cls(alpha=data["alpha"])
        m.total_tokens = data["total_tokens"]
        m.sentence_count = data["sentence_count"]
        m.unigram_counts = Counter(data["unigrams"])
        m.bigram_counts = Counter({tuple(k.split(" ")): c for k, c in data["bigrams"].items()})
        return m


def build_ngram(sentences: Iterable[list[str]], alpha: float = 1.0,
                min_count: int = 1) -> NGramModel:
    """Accumulate counts in a single streaming pass; boundary markers are
    prepended/appended per sentence. ``min_count > 1`` prunes rare entries
    after the pass (counts and totals are adjusted accordingly)."""
    m = NGramModel(alpha=alpha)
    for sent in sentences:
        if not sent:
            continue
        m.sentence_count += 1
        prev = BOS
        for tok in sent:
            m.unigram_counts[tok] += 1
            m.bigram_counts[(prev, tok)] += 1
            m.total_tokens += 1
            prev = tok
        m.bigram_counts[(prev, EOS)] += 1
    if min_count > 1:
        for w in [w for w, c in m.unigram_counts.items() if c < min_count]:
            m.total_tokens -= m.unigram_counts.pop(w)
        for k in [k for k, c in m.bigram_counts.items() if c < min_count]:
            del m.bigram_counts[k]
    return m


def log_p_unigram(m: NGramModel, w: str) -> float:
    """ln((c(w)+a) / (N + a*(V+1))); the +1 reserves unknown-word mass."""
    num = m.unigram_counts.get(w, 0) + m.alpha
    den = m.total_tokens + m.alpha * (m.vocab_size + 1)
    return math.log(num / den)


def log_p_bigram(m: NGramModel, prev: str, w: str) -> float:
    """ln((c(prev,w)+a) / (c(prev) + a*(V+1))); BOS/EOS stand in for
    utterance edges."""
    num = m.bigram_counts.get((prev, w), 0) + m.alpha
    den = m.context_count(prev) + m.alpha * (m.vocab_size + 1)
    return math.log(num / den)
