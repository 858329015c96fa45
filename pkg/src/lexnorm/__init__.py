"""Modular lexical normalization for noisy user-generated text.

Per-token candidate generation by pluggable modules (original token,
embedding neighbors, spelling suggestions, lookup list, prefix extensions,
splits), fixed-layout feature extraction, and random-forest confidence
ranking, with a train/normalize/evaluate/experiment workflow.
"""

__version__ = "0.1.0"

from .corpus import PreprocessRules, TokenEntry, Utterance, parse_corpus, write_corpus
from .embeddings import EmbeddingStore, Neighbor, cosine_similarity, load_vectors, nearest
from .features import FEATURE_NAMES, TokenContext, extract
from .forest import RandomForestScorer
from .generation import Candidate, GenerationConfig, Resources, generate
from .lexicon import Dictionary, LookupTable, build_lookup, lookup_candidates
from .ngram import NGramModel, build_ngram, log_p_bigram, log_p_unigram
from .normalizer import Normalizer, RankedToken, build_training_instances
from .spellcheck import (BAD_SPELLERS, NORMAL, SpellChecker, SpellMode,
                         Suggestion, edit_distance, phonetic_key, suggest)

__all__ = [
    "PreprocessRules", "TokenEntry", "Utterance", "parse_corpus", "write_corpus",
    "EmbeddingStore", "Neighbor", "cosine_similarity", "load_vectors", "nearest",
    "FEATURE_NAMES", "TokenContext", "extract",
    "RandomForestScorer",
    "Candidate", "GenerationConfig", "Resources", "generate",
    "Dictionary", "LookupTable", "build_lookup", "lookup_candidates",
    "NGramModel", "build_ngram", "log_p_bigram", "log_p_unigram",
    "Normalizer", "RankedToken", "build_training_instances",
    "BAD_SPELLERS", "NORMAL", "SpellChecker", "SpellMode", "Suggestion",
    "edit_distance", "phonetic_key", "suggest",
]
