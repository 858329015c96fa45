"""Per-token candidate generation.

Six pluggable modules each target a different kind of anomaly: the original
token itself, embedding nearest neighbors, spelling suggestions, the
training-data lookup list, dictionary prefix extensions, and two-way word
splits. Outputs are merged by surface form with per-module provenance
preserved, and an optional vocabulary filter prunes the merged list (never
the original token).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .embeddings import EmbeddingStore, nearest
from .lexicon import Dictionary, LookupTable, lookup_candidates
from .ngram import NGramModel
from .spellcheck import NORMAL, SpellChecker, SpellMode, suggest

MODULES = ("original", "embeddings", "spell", "lookup", "prefix", "split")
FILTERS = ("none", "train", "train+dict")


@dataclass
class Candidate:
    """A proposed replacement surface plus per-module provenance.

    ``surface`` may contain single spaces (one token normalized to several).
    Embedding/spell fields are populated only when the respective module
    generated the candidate.
    """

    surface: str
    sources: set[str]
    emb_similarity: float | None = None
    emb_rank: int | None = None
    spell_rank: int | None = None
    spell_distance: float | None = None
    lookup_count: int = 0

    @property
    def is_original(self) -> bool:
        return "original" in self.sources


@dataclass(frozen=True)
class GenerationConfig:
    enabled: frozenset[str] = frozenset(MODULES)
    emb_k: int = 40
    prefix_min_len: int = 3
    split_min_len: int = 4
    spell_mode: SpellMode = NORMAL
    candidate_filter: str = "none"

    def __post_init__(self):
        unknown = set(self.enabled) - set(MODULES)
        if unknown:
            raise ValueError(f"unknown generation modules: {sorted(unknown)}")
        if self.candidate_filter not in FILTERS:
            raise ValueError(f"unknown filter {self.candidate_filter!r}")

    def without(self, module: str) -> "GenerationConfig":
        return replace(self, enabled=self.enabled - {module})


@dataclass
class Resources:
    """Immutable resource models shared by generation and feature extraction."""

    dictionary: Dictionary
    embeddings: EmbeddingStore
    lookup: LookupTable
    noisy_ngram: NGramModel
    canonical_ngram: NGramModel
    dictionary_path: str | None = None
    embeddings_path: str | None = None
    _training_vocab: set[str] | None = field(default=None, repr=False)
    _spellchecker: SpellChecker | None = field(default=None, repr=False)

    @property
    def training_vocab(self) -> set[str]:
        if self._training_vocab is None:
            self._training_vocab = self.lookup.vocabulary()
        return self._training_vocab

    @property
    def spellchecker(self) -> SpellChecker:
        if self._spellchecker is None:
            self._spellchecker = SpellChecker(self.dictionary)
        return self._spellchecker


def gen_prefix(token: str, dictionary: Dictionary) -> list[str]:
    """All dictionary words having ``token`` as a proper prefix."""
    return dictionary.words_with_prefix(token)


def gen_split(token: str, dictionary: Dictionary) -> list[str]:
    """Every two-way split whose halves are both canonical."""
    out = []
    for i in range(1, len(token)):
        left, right = token[:i], token[i:]
        if left in dictionary and right in dictionary:
            out.append(f"{left} {right}")
    return out


def _merge(by_surface: dict[str, Candidate], cand: Candidate) -> None:
    existing = by_surface.get(cand.surface)
    if existing is None:
        by_surface[cand.surface] = cand
        return
    existing.sources |= cand.sources
    for attr in ("emb_similarity", "emb_rank", "spell_rank", "spell_distance"):
        if getattr(existing, attr) is None:
            setattr(existing, attr, getattr(cand, attr))
    existing.lookup_count = max(existing.lookup_count, cand.lookup_count)


def apply_filter(cands: list[Candidate], candidate_filter: str,
                 training_vocab: set[str], dictionary: Dictionary) -> list[Candidate]:
    """Keep only candidates whose every space-separated token is in the
    allowed vocabulary; the original-token candidate is always kept."""
    if candidate_filter == "none":
        return cands
    if candidate_filter not in FILTERS:
        raise ValueError(f"unknown filter {candidate_filter!r}")

    def allowed(surface: str) -> bool:
        return all(
            part in training_vocab or (candidate_filter == "train+dict" and part in dictionary)
            for part in surface.split(" ")
        )

    return [c for c in cands if c.is_original or allowed(c.surface)]


def generate(token: str, config: GenerationConfig, resources: Resources) -> list[Candidate]:
    """Run all enabled modules on a (lowercased) token and merge the outputs.

    The returned list always contains the original token, ordered original
    first and then by surface; the configured filter is applied last.
    """
    by_surface: dict[str, Candidate] = {}
    _merge(by_surface, Candidate(token, {"original"}))

    if "embeddings" in config.enabled:
        for nb in nearest(resources.embeddings, token, config.emb_k):
            _merge(by_surface, Candidate(nb.word, {"embeddings"},
                                         emb_similarity=nb.cosine_similarity,
                                         emb_rank=nb.rank))
    if "spell" in config.enabled:
        for sg in resources.spellchecker.suggest(token, config.spell_mode):
            _merge(by_surface, Candidate(sg.word, {"spell"},
                                         spell_rank=sg.rank, spell_distance=sg.distance))
    if "lookup" in config.enabled:
        for rep, count in lookup_candidates(resources.lookup, token):
            _merge(by_surface, Candidate(rep, {"lookup"}, lookup_count=count))
    if "prefix" in config.enabled and len(token) >= config.prefix_min_len:
        for w in gen_prefix(token, resources.dictionary):
            _merge(by_surface, Candidate(w, {"prefix"}))
    if "split" in config.enabled and len(token) >= config.split_min_len:
        for s in gen_split(token, resources.dictionary):
            _merge(by_surface, Candidate(s, {"split"}))

    # pair counts apply to every candidate, not just lookup-generated ones
    for cand in by_surface.values():
        cand.lookup_count = max(cand.lookup_count, resources.lookup.count(token, cand.surface))

    ordered = sorted(by_surface.values(), key=lambda c: (not c.is_original, c.surface))
    return apply_filter(ordered, config.candidate_filter,
                        resources.training_vocab, resources.dictionary)
