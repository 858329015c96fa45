"""Evaluation metrics for normalization output.

All comparisons are lowercased. Outcome classes per token, where "system
normalized" means the chosen surface differs from the raw token:

* TP: annotators normalized and the system chose the gold form;
* FP: annotators did not normalize but the system did, OR the system
  normalized to the wrong form (the latter also counts as FN);
* TN: neither normalized;
* FN: annotators normalized but the system kept the raw token, or chose a
  wrong form.

A wrong normalization of an anomaly therefore increments both FP and FN
(the convention of the shared task this evaluation follows), so
TP+FP+TN+FN can exceed the token count by exactly the number of such
tokens.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .corpus import Utterance
from .normalizer import RankedToken
from .spellcheck import edit_distance


@dataclass
class EvalCounts:
    tp: int = 0
    fp: int = 0
    tn: int = 0
    fn: int = 0
    n_tokens: int = 0
    n_wrong_normalizations: int = 0  # tokens counted in both FP and FN


@dataclass
class Metrics:
    recall: float = 0.0
    precision: float = 0.0
    f1: float = 0.0
    accuracy: float = 0.0
    wer: float = 0.0


def _norm(s: str) -> str:
    return " ".join(s.lower().split())


def _aligned_triples(gold: Sequence[Utterance],
                     system: Sequence[list[RankedToken]]):
    if len(gold) != len(system):
        raise ValueError(f"utterance count mismatch: {len(gold)} gold vs {len(system)} system")
    for utt, ranked in zip(gold, system):
        if len(utt.tokens) != len(ranked):
            raise ValueError(f"token count mismatch in utterance {utt.id!r}")
        for entry, rt in zip(utt.tokens, ranked):
            if entry.gold is None:
                raise ValueError(f"token {entry.raw!r} has no gold annotation")
            yield _norm(entry.raw), _norm(entry.gold), rt


def count_outcomes(gold: Sequence[Utterance],
                   system: Sequence[list[RankedToken]]) -> EvalCounts:
    counts = EvalCounts()
    for raw, gold_form, rt in _aligned_triples(gold, system):
        chosen = _norm(rt.chosen)
        needs = gold_form != raw
        normalized = chosen != raw
        counts.n_tokens += 1
        if needs and normalized and chosen == gold_form:
            counts.tp += 1
        elif needs and normalized:
            counts.fp += 1
            counts.fn += 1
            counts.n_wrong_normalizations += 1
        elif needs:
            counts.fn += 1
        elif normalized:
            counts.fp += 1
        else:
            counts.tn += 1
    return counts


def prf(counts: EvalCounts) -> Metrics:
    recall = counts.tp / (counts.tp + counts.fn) if counts.tp + counts.fn else 0.0
    precision = counts.tp / (counts.tp + counts.fp) if counts.tp + counts.fp else 0.0
    f1 = (2 * recall * precision / (recall + precision)) if recall + precision else 0.0
    return Metrics(recall=recall, precision=precision, f1=f1)


def accuracy_gold_ed(gold: Sequence[Utterance],
                     system: Sequence[list[RankedToken]]) -> float:
    """Fraction of tokens needing normalization whose top candidate equals
    gold; 1.0 when there are no such tokens."""
    needed = correct = 0
    for raw, gold_form, rt in _aligned_triples(gold, system):
        if gold_form == raw:
            continue
        needed += 1
        if _norm(rt.chosen) == gold_form:
            correct += 1
    return correct / needed if needed else 1.0


def wer(gold: Sequence[Utterance], system: Sequence[list[RankedToken]]) -> float:
    """Corpus-level word error rate: summed token-level edit distance between
    flattened system and gold sequences over summed flattened gold length."""
    total_dist = 0
    total_len = 0
    if len(gold) != len(system):
        raise ValueError("utterance count mismatch")
    for utt, ranked in zip(gold, system):
        gold_seq: list[str] = []
        sys_seq: list[str] = []
        for entry, rt in zip(utt.tokens, ranked):
            if entry.gold is None:
                raise ValueError(f"token {entry.raw!r} has no gold annotation")
            gold_seq.extend(_norm(entry.gold).split(" "))
            sys_seq.extend(_norm(rt.chosen).split(" "))
        total_dist += edit_distance(gold_seq, sys_seq)
        total_len += len(gold_seq)
    return total_dist / total_len if total_len else 0.0


def topn_recall(gold: Sequence[Utterance],
                ranked: Sequence[list[RankedToken]], n: int) -> float:
    """Fraction of all tokens (unchanged ones included) whose gold form
    appears among the top n candidates."""
    if n < 1:
        raise ValueError("n must be >= 1")
    hits = total = 0
    for _raw, gold_form, rt in _aligned_triples(gold, ranked):
        total += 1
        if any(_norm(surface) == gold_form for surface, _ in rt.candidates[:n]):
            hits += 1
    return hits / total if total else 0.0


def upperbound_recall(gold: Sequence[Utterance],
                      candidate_lists: Sequence[list[list[str]]]) -> float:
    """Fraction of tokens whose gold form appears anywhere in the generated
    candidate list; the ceiling for any downstream ranker."""
    hits = total = 0
    for utt, utt_cands in zip(gold, candidate_lists):
        for entry, surfaces in zip(utt.tokens, utt_cands):
            total += 1
            gold_form = _norm(entry.gold)
            if any(_norm(s) == gold_form for s in surfaces):
                hits += 1
    return hits / total if total else 0.0
