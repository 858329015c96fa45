"""Experiment grids: feature/generator ablations, learning curves, and the
spell-mode x filter grid."""

from __future__ import annotations

import random
import time
from typing import Sequence

from .corpus import Utterance
from .evaluate import accuracy_gold_ed, count_outcomes, prf, upperbound_recall
from .features import FEATURE_GROUPS
from .generation import MODULES, generate
from .normalizer import Normalizer, _contexts

EXPERIMENTS = ("ablate_features", "ablate_generators", "learning_curve", "mode_filter_grid")


def _generation_stats(model: Normalizer, dev: Sequence[Utterance]) -> tuple[float, float]:
    """(upperbound recall, average candidates per token) on dev."""
    config = model._generation_config()
    resources = model._resources(model.lookup_)
    candidate_lists = []
    n_cands = n_tokens = 0
    for utt in dev:
        tokens = [t.raw.lower() for t in utt.tokens]
        per_utt = []
        for ctx in _contexts(tokens):
            surfaces = [c.surface for c in generate(ctx.raw, config, resources)]
            per_utt.append(surfaces)
            n_cands += len(surfaces)
            n_tokens += 1
        candidate_lists.append(per_utt)
    ub = upperbound_recall(dev, candidate_lists)
    return ub, (n_cands / n_tokens if n_tokens else 0.0)


def _run_one(params: dict, train: list[Utterance], dev: list[Utterance]) -> dict:
    model = Normalizer(**params)
    t0 = time.perf_counter()
    model.fit(train)
    train_time = time.perf_counter() - t0

    n_dev_tokens = sum(len(u.tokens) for u in dev)
    t0 = time.perf_counter()
    system = model.normalize_corpus(dev)
    norm_time = time.perf_counter() - t0

    metrics = prf(count_outcomes(dev, system))
    gold_ed = model.normalize_corpus(dev, gold_ed=True)
    ub, avg_cands = _generation_stats(model, dev)
    return {
        "f1": metrics.f1,
        "recall": metrics.recall,
        "precision": metrics.precision,
        "gold_ed_accuracy": accuracy_gold_ed(dev, gold_ed),
        "upperbound": ub,
        "avg_cands": avg_cands,
        "train_time_s": train_time,
        "words_per_sec": n_dev_tokens / norm_time if norm_time > 0 else 0.0,
    }


def run_grid(experiment: str, train: list[Utterance], dev: list[Utterance],
             params: dict, seed: int = 0,
             sizes: Sequence[int] = (500, 1000, 2000)) -> list[dict]:
    """Run one experiment grid and return one result row per configuration.

    ``params`` are Normalizer keyword arguments (resources included) used as
    the baseline configuration for every cell.
    """
    if experiment not in EXPERIMENTS:
        raise ValueError(f"unknown experiment {experiment!r}; choose from {EXPERIMENTS}")
    rows = []
    if experiment == "ablate_features":
        rows.append({"config": "all-features", **_run_one(params, train, dev)})
        for group in FEATURE_GROUPS:
            p = dict(params, excluded_feature_groups=(group,))
            rows.append({"config": f"-{group}", **_run_one(p, train, dev)})
    elif experiment == "ablate_generators":
        rows.append({"config": "all-modules", **_run_one(params, train, dev)})
        for module in MODULES:
            if module == "original":
                continue  # the original token is a hard guarantee, not ablatable
            enabled = tuple(m for m in params.get("enabled_modules", MODULES) if m != module)
            p = dict(params, enabled_modules=enabled)
            rows.append({"config": f"-{module}", **_run_one(p, train, dev)})
    elif experiment == "learning_curve":
        rng = random.Random(seed)
        for size in sizes:
            size = min(size, len(train))
            subset = rng.sample(train, size) if size < len(train) else list(train)
            rows.append({"config": f"n={size}", **_run_one(params, subset, dev)})
    else:  # mode_filter_grid
        for mode in ("normal", "bad-spellers"):
            for flt in ("none", "train+dict", "train"):
                p = dict(params, spell_mode=mode, candidate_filter=flt)
                rows.append({"config": f"{mode}/{flt}",
                             **_run_one(p, train, dev)})
    return rows


_PERCENT_COLS = {"f1", "recall", "precision", "gold_ed_accuracy", "upperbound"}


def _fmt(key: str, value) -> str:
    if isinstance(value, str):
        return value
    if key in _PERCENT_COLS:
        return f"{100 * value:.2f}"
    if key == "train_time_s":
        return f"{int(value // 60)}:{value % 60:04.1f}"
    return f"{value:.1f}"


def format_table(rows: list[dict]) -> str:
    """Aligned plain-text table."""
    if not rows:
        return ""
    cols = list(rows[0])
    cells = [[_fmt(c, r[c]) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths))]
    for row in cells:
        lines.append("  ".join(v.ljust(w) for v, w in zip(row, widths)))
    return "\n".join(lines)


def format_tsv(rows: list[dict]) -> str:
    """Machine-readable rows: header line plus one tab-separated row each."""
    if not rows:
        return ""
    cols = list(rows[0])
    lines = ["\t".join(cols)]
    for r in rows:
        lines.append("\t".join(_fmt(c, r[c]) for c in cols))
    return "\n".join(lines)
