"""Fixed-layout numeric feature vectors for (context, candidate) pairs."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .generation import Candidate, Resources
from .ngram import BOS, EOS, NGramModel, log_p_bigram, log_p_unigram

FEATURE_LAYOUT_VERSION = 1

FEATURE_NAMES = (
    "is_original",
    "emb_similarity",
    "emb_rank",
    "spell_rank",
    "spell_distance",
    "lookup_count",
    "is_prefix",
    "noisy_unigram",
    "noisy_bigram_prev",
    "noisy_bigram_next",
    "canonical_unigram",
    "canonical_bigram_prev",
    "canonical_bigram_next",
    "in_dictionary",
    "char_order_preserved",
    "orig_length",
    "cand_length",
    "orig_contains_alpha",
)
N_FEATURES = len(FEATURE_NAMES)

# grouping used by the feature-ablation experiment
FEATURE_GROUPS = {
    "original": (0,),
    "embeddings": (1, 2),
    "spell": (3, 4),
    "lookup": (5,),
    "prefix": (6,),
    "ngram": (7, 8, 9, 10, 11, 12),
    "dictionary": (13,),
    "char_order": (14,),
    "length": (15, 16),
    "contains_alpha": (17,),
}

# sentinels lie outside natural ranges so trees can split on
# "was generated by module X" implicitly
EMB_SIMILARITY_SENTINEL = -2.0
RANK_SENTINEL = -1.0
SPELL_DISTANCE_SENTINEL = -1.0


@dataclass(frozen=True)
class TokenContext:
    """A raw token with its raw neighbors (None at utterance edges)."""

    raw: str
    prev_raw: str | None = None
    next_raw: str | None = None

    def __post_init__(self):
        if not self.raw:
            raise ValueError("raw token must be non-empty")


def char_order_preserved(orig: str, cand: str) -> bool:
    """True iff ``orig`` is a subsequence of ``cand`` (spaces in the
    candidate count as ordinary characters)."""
    it = iter(cand)
    return all(c in it for c in orig)


def contains_alpha(token: str) -> bool:
    return any(c.isalpha() for c in token)


def _ngram_slots(m: NGramModel, ctx: TokenContext, parts: list[str]) -> tuple[float, float, float]:
    # multi-token surfaces: mean unigram, first token for the left bigram,
    # last token for the right bigram
    uni = sum(log_p_unigram(m, p) for p in parts) / len(parts)
    prev = ctx.prev_raw if ctx.prev_raw is not None else BOS
    nxt = ctx.next_raw if ctx.next_raw is not None else EOS
    return uni, log_p_bigram(m, prev, parts[0]), log_p_bigram(m, parts[-1], nxt)


def extract(ctx: TokenContext, cand: Candidate, resources: Resources) -> np.ndarray:
    """Fill the 18-slot feature vector for one candidate."""
    parts = cand.surface.split(" ")
    x = np.empty(N_FEATURES, dtype=np.float64)
    x[0] = 1.0 if cand.is_original else 0.0
    x[1] = cand.emb_similarity if cand.emb_similarity is not None else EMB_SIMILARITY_SENTINEL
    x[2] = cand.emb_rank if cand.emb_rank is not None else RANK_SENTINEL
    x[3] = cand.spell_rank if cand.spell_rank is not None else RANK_SENTINEL
    x[4] = cand.spell_distance if cand.spell_distance is not None else SPELL_DISTANCE_SENTINEL
    x[5] = float(cand.lookup_count)
    x[6] = 1.0 if "prefix" in cand.sources else 0.0
    x[7], x[8], x[9] = _ngram_slots(resources.noisy_ngram, ctx, parts)
    x[10], x[11], x[12] = _ngram_slots(resources.canonical_ngram, ctx, parts)
    x[13] = 1.0 if all(p in resources.dictionary for p in parts) else 0.0
    x[14] = 1.0 if char_order_preserved(ctx.raw, cand.surface) else 0.0
    x[15] = float(len(ctx.raw))
    x[16] = float(len(cand.surface))
    x[17] = 1.0 if contains_alpha(ctx.raw) else 0.0
    return x
