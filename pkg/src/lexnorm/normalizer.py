"""End-to-end orchestration: training-instance construction, model bundle
training/serialization, and utterance normalization."""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator

from .corpus import Utterance
from .features import (FEATURE_GROUPS, FEATURE_LAYOUT_VERSION, FEATURE_NAMES,
                       N_FEATURES, TokenContext, extract)
from .forest import RandomForestScorer
from .generation import FILTERS, MODULES, GenerationConfig, Resources, generate
from .lexicon import LookupTable, build_lookup
from .ngram import NGramModel
from .spellcheck import MODES

BUNDLE_FORMAT_VERSION = 1


@dataclass
class RankedToken:
    """Per-token ranking result: candidate surfaces with weighted scores,
    sorted descending; ``chosen`` is the top surface."""

    raw: str
    candidates: list[tuple[str, float]]
    chosen: str
    scored: bool = True


def _contexts(tokens: list[str]) -> list[TokenContext]:
    out = []
    for i, tok in enumerate(tokens):
        out.append(TokenContext(
            raw=tok,
            prev_raw=tokens[i - 1] if i > 0 else None,
            next_raw=tokens[i + 1] if i < len(tokens) - 1 else None,
        ))
    return out


def _norm_gold(gold: str) -> str:
    return " ".join(gold.lower().split())


def build_training_instances(training: list[Utterance], resources: Resources,
                             config: GenerationConfig) -> tuple[np.ndarray, np.ndarray]:
    """Feature matrix and 0/1 labels over all generated candidates of all
    training tokens; a candidate is correct iff its surface equals the gold
    form (lowercased). Tokens whose gold is unreachable still contribute
    their negatives."""
    rows, labels = [], []
    for utt in training:
        tokens = [t.raw.lower() for t in utt.tokens]
        for ctx, entry in zip(_contexts(tokens), utt.tokens):
            if entry.gold is None:
                raise ValueError(f"utterance {utt.id!r}: token {entry.raw!r} has no gold annotation")
            gold = _norm_gold(entry.gold)
            for cand in generate(ctx.raw, config, resources):
                rows.append(extract(ctx, cand, resources))
                labels.append(1.0 if cand.surface == gold else 0.0)
    X = np.vstack(rows) if rows else np.zeros((0, N_FEATURES))
    return X, np.asarray(labels)


def _mask_columns(X: np.ndarray, excluded_groups: tuple[str, ...]) -> np.ndarray:
    if not excluded_groups:
        return X
    drop = set()
    for g in excluded_groups:
        drop.update(FEATURE_GROUPS[g])
    keep = [i for i in range(N_FEATURES) if i not in drop]
    return X[:, keep]


class Normalizer(BaseEstimator):
    """Trainable lexical normalizer with a fit/predict surface.

    ``fit`` takes gold-annotated utterances and trains the candidate ranker;
    ``transform`` returns per-token ranked candidate lists and ``predict``
    the top-1 surfaces. Resource models (dictionary, embeddings, n-grams)
    are supplied at construction; the lookup table is learned in ``fit``.
    """

    def __init__(self, dictionary=None, embeddings=None, noisy_ngram=None,
                 canonical_ngram=None, enabled_modules=MODULES, emb_k=40,
                 prefix_min_len=3, split_min_len=4, spell_mode="normal",
                 candidate_filter="none", n_trees=500, mtry=None,
                 min_node_size=1, max_depth=None, bootstrap_fraction=1.0,
                 class_weight=None, original_weight=1.0,
                 excluded_feature_groups=(), held_out_lookup=False,
                 random_state=0, n_jobs=1):
        self.dictionary = dictionary
        self.embeddings = embeddings
        self.noisy_ngram = noisy_ngram
        self.canonical_ngram = canonical_ngram
        self.enabled_modules = enabled_modules
        self.emb_k = emb_k
        self.prefix_min_len = prefix_min_len
        self.split_min_len = split_min_len
        self.spell_mode = spell_mode
        self.candidate_filter = candidate_filter
        self.n_trees = n_trees
        self.mtry = mtry
        self.min_node_size = min_node_size
        self.max_depth = max_depth
        self.bootstrap_fraction = bootstrap_fraction
        self.class_weight = class_weight
        self.original_weight = original_weight
        self.excluded_feature_groups = excluded_feature_groups
        self.held_out_lookup = held_out_lookup
        self.random_state = random_state
        self.n_jobs = n_jobs

    # -- configuration ------------------------------------------------------

    def _generation_config(self) -> GenerationConfig:
        if self.spell_mode not in MODES:
            raise ValueError(f"unknown spell mode {self.spell_mode!r}")
        if self.candidate_filter not in FILTERS:
            raise ValueError(f"unknown candidate filter {self.candidate_filter!r}")
        if self.original_weight <= 0:
            raise ValueError("original_weight must be > 0")
        return GenerationConfig(
            enabled=frozenset(self.enabled_modules),
            emb_k=self.emb_k,
            prefix_min_len=self.prefix_min_len,
            split_min_len=self.split_min_len,
            spell_mode=MODES[self.spell_mode],
            candidate_filter=self.candidate_filter,
        )

    def _resources(self, lookup: LookupTable) -> Resources:
        for name in ("dictionary", "embeddings", "noisy_ngram", "canonical_ngram"):
            if getattr(self, name) is None:
                raise ValueError(f"resource {name!r} is required")
        return Resources(
            dictionary=self.dictionary,
            embeddings=self.embeddings,
            lookup=lookup,
            noisy_ngram=self.noisy_ngram,
            canonical_ngram=self.canonical_ngram,
        )

    def _forest(self) -> RandomForestScorer:
        return RandomForestScorer(
            n_trees=self.n_trees, mtry=self.mtry,
            min_node_size=self.min_node_size, max_depth=self.max_depth,
            bootstrap_fraction=self.bootstrap_fraction,
            class_weight=self.class_weight,
            random_state=self.random_state, n_jobs=self.n_jobs,
        )

    # -- training -----------------------------------------------------------

    def fit(self, utterances: list[Utterance], y=None):
        if not utterances:
            raise ValueError("training set is empty")
        config = self._generation_config()
        self.lookup_ = build_lookup(utterances)
        if self.held_out_lookup:
            # lookup features for each half come from the other half's table,
            # avoiding the optimism of scoring training pairs against
            # themselves; the stored table still uses the full data
            mid = len(utterances) // 2
            a, b = utterances[:mid], utterances[mid:]
            Xa, ya = build_training_instances(a, self._resources(build_lookup(b)), config)
            Xb, yb = build_training_instances(b, self._resources(build_lookup(a)), config)
            X, y_ = np.vstack([Xa, Xb]), np.concatenate([ya, yb])
        else:
            X, y_ = build_training_instances(utterances, self._resources(self.lookup_), config)
        self.n_instances_ = len(y_)
        self.forest_ = self._forest().fit(_mask_columns(X, tuple(self.excluded_feature_groups)), y_)
        self.feature_layout_version_ = FEATURE_LAYOUT_VERSION
        return self

    # -- inference ----------------------------------------------------------

    def _rank_token(self, ctx: TokenContext, resources: Resources,
                    config: GenerationConfig, top_n: int,
                    drop_original: bool = False) -> RankedToken:
        cands = generate(ctx.raw, config, resources)
        if drop_original:
            kept = [c for c in cands if not c.is_original]
            cands = kept if kept else cands
        X = np.vstack([extract(ctx, c, resources) for c in cands])
        scores = self.forest_.confidence(_mask_columns(X, tuple(self.excluded_feature_groups)))
        weighted = [
            (s * self.original_weight if c.is_original else s, c)
            for s, c in zip(scores, cands)
        ]
        weighted.sort(key=lambda sc: (-sc[0], not sc[1].is_original, sc[1].surface))
        ranked = [(c.surface, float(s)) for s, c in weighted]
        return RankedToken(raw=ctx.raw, candidates=ranked[:top_n], chosen=ranked[0][0])

    def normalize(self, utt: Utterance, top_n: int = 1) -> list[RankedToken]:
        """Rank candidates for every token; scores are forest confidences
        with the original candidate's score multiplied by original_weight."""
        config = self._generation_config()
        resources = self._resources(self.lookup_)
        tokens = [t.raw.lower() for t in utt.tokens]
        return [self._rank_token(ctx, resources, config, top_n)
                for ctx in _contexts(tokens)]

    def normalize_gold_ed(self, utt: Utterance, top_n: int = 1) -> list[RankedToken]:
        """Gold error detection: rank only tokens whose gold differs from the
        raw form, with the original candidate removed; other tokens pass
        through unchanged and unscored."""
        config = self._generation_config()
        resources = self._resources(self.lookup_)
        tokens = [t.raw.lower() for t in utt.tokens]
        out = []
        for ctx, entry in zip(_contexts(tokens), utt.tokens):
            if entry.gold is None:
                raise ValueError("gold error detection requires gold annotations")
            if _norm_gold(entry.gold) == ctx.raw:
                out.append(RankedToken(raw=ctx.raw, candidates=[(ctx.raw, 1.0)],
                                       chosen=ctx.raw, scored=False))
            else:
                out.append(self._rank_token(ctx, resources, config, top_n,
                                            drop_original=True))
        return out

    def normalize_corpus(self, utterances: list[Utterance], top_n: int = 1,
                         gold_ed: bool = False, threads: int = 1) -> list[list[RankedToken]]:
        fn = self.normalize_gold_ed if gold_ed else self.normalize
        if threads <= 1:
            return [fn(u, top_n) for u in utterances]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda u: fn(u, top_n), utterances))

    def transform(self, utterances: list[Utterance]) -> list[list[RankedToken]]:
        return self.normalize_corpus(utterances)

    def predict(self, utterances: list[Utterance]) -> list[list[str]]:
        """Top-1 chosen surface per token (may contain spaces for 1-N)."""
        return [[rt.chosen for rt in ranked] for ranked in self.normalize_corpus(utterances)]

    # -- bundle serialization -------------------------------------------------

    def save(self, path: str) -> None:
        """Write the model bundle: manifest, forest, lookup table and n-gram
        models. Dictionary and embeddings are recorded by path reference."""
        os.makedirs(path, exist_ok=True)
        manifest = {
            "format_version": BUNDLE_FORMAT_VERSION,
            "feature_layout_version": self.feature_layout_version_,
            "feature_names": list(FEATURE_NAMES),
            "params": {
                k: v for k, v in self.get_params().items()
                if k not in ("dictionary", "embeddings", "noisy_ngram", "canonical_ngram")
            },
            "n_instances": int(self.n_instances_),
            "dictionary_path": getattr(self.dictionary, "source_path", None),
            "embeddings_path": getattr(self.embeddings, "source_path", None),
        }
        manifest["params"]["enabled_modules"] = sorted(self._generation_config().enabled)
        manifest["params"]["excluded_feature_groups"] = list(self.excluded_feature_groups)
        with open(os.path.join(path, "manifest.json"), "w", encoding="utf-8") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True)
        self.forest_.save_npz(os.path.join(path, "forest.npz"))
        with open(os.path.join(path, "lookup.json"), "w", encoding="utf-8") as fh:
            self.lookup_.to_json(fh)
        with open(os.path.join(path, "ngram_noisy.json"), "w", encoding="utf-8") as fh:
            self.noisy_ngram.to_json(fh)
        with open(os.path.join(path, "ngram_canonical.json"), "w", encoding="utf-8") as fh:
            self.canonical_ngram.to_json(fh)

    @classmethod
    def load(cls, path: str, dictionary=None, embeddings=None) -> "Normalizer":
        """Reload a bundle. Dictionary and embeddings must be supplied (or
        resolvable from the recorded paths)."""
        with open(os.path.join(path, "manifest.json"), encoding="utf-8") as fh:
            manifest = json.load(fh)
        if manifest["format_version"] != BUNDLE_FORMAT_VERSION:
            raise ValueError(f"unsupported bundle format version {manifest['format_version']}")
        if manifest["feature_layout_version"] != FEATURE_LAYOUT_VERSION:
            raise ValueError(
                f"feature layout version mismatch: bundle has "
                f"{manifest['feature_layout_version']}, extractor has {FEATURE_LAYOUT_VERSION}")
        from .embeddings import load_vectors_file
        from .lexicon import Dictionary as _Dictionary
        if dictionary is None:
            if not manifest.get("dictionary_path"):
                raise ValueError("bundle records no dictionary path; pass dictionary=")
            dictionary = _Dictionary.from_file(manifest["dictionary_path"])
            dictionary.source_path = manifest["dictionary_path"]
        if embeddings is None:
            if not manifest.get("embeddings_path"):
                raise ValueError("bundle records no embeddings path; pass embeddings=")
            embeddings = load_vectors_file(manifest["embeddings_path"])
            embeddings.source_path = manifest["embeddings_path"]
        params = dict(manifest["params"])
        params["enabled_modules"] = tuple(params["enabled_modules"])
        params["excluded_feature_groups"] = tuple(params["excluded_feature_groups"])
        with open(os.path.join(path, "ngram_noisy.json"), encoding="utf-8") as fh:
            noisy = NGramModel.from_json(fh)
        with open(os.path.join(path, "ngram_canonical.json"), encoding="utf-8") as fh:
            canonical = NGramModel.from_json(fh)
        model = cls(dictionary=dictionary, embeddings=embeddings,
                    noisy_ngram=noisy, canonical_ngram=canonical, **params)
        model.forest_ = RandomForestScorer.load_npz(os.path.join(path, "forest.npz"))
        with open(os.path.join(path, "lookup.json"), encoding="utf-8") as fh:
            model.lookup_ = LookupTable.from_json(fh)
        model.feature_layout_version_ = manifest["feature_layout_version"]
        model.n_instances_ = manifest["n_instances"]
        return model


def train(training: list[Utterance], resources_kwargs: dict, **params) -> Normalizer:
    """Convenience wrapper: construct a Normalizer and fit it."""
    model = Normalizer(**resources_kwargs, **params)
    return model.fit(training)
