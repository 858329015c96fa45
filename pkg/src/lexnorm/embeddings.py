"""Word vector store with brute-force cosine nearest-neighbor queries."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


class VectorFormatError(ValueError):
    def __init__(self, message: str, line_number: int):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


@dataclass(frozen=True)
class Neighbor:
    word: str
    cosine_similarity: float
    rank: int


class EmbeddingStore:
    """Immutable word -> vector map; queries are safe to run concurrently."""

    def __init__(self, words: Sequence[str], matrix: np.ndarray, meta: str = ""):
        matrix = np.asarray(matrix, dtype=np.float64)
        if matrix.ndim != 2 or matrix.shape[0] != len(words):
            raise ValueError("matrix must be |vocab| x dim")
        if not np.all(np.isfinite(matrix)):
            raise ValueError("vectors must be finite")
        self.words = list(words)
        self.vocab = {w: i for i, w in enumerate(self.words)}
        if len(self.vocab) != len(self.words):
            raise ValueError("duplicate words in store")
        self.matrix = matrix
        self.dim = matrix.shape[1] if len(words) else matrix.shape[1]
        self.meta = meta
        self._norms: np.ndarray | None = None
        self._lex_rank: np.ndarray | None = None

    def __contains__(self, word: str) -> bool:
        return word in self.vocab

    def __len__(self) -> int:
        return len(self.words)

    def vector(self, word: str) -> np.ndarray:
        return self.matrix[self.vocab[word]]

    @property
    def norms(self) -> np.ndarray:
        if self._norms is None:
            self._norms = np.linalg.norm(self.matrix, axis=1)
        return self._norms

    @property
    def lex_rank(self) -> np.ndarray:
        # rank of each row's word in lexicographic order, for tie-breaking
        if self._lex_rank is None:
            order = sorted(range(len(self.words)), key=lambda i: self.words[i])
            ranks = np.empty(len(self.words), dtype=np.int64)
            for r, i in enumerate(order):
                ranks[i] = r
            self._lex_rank = ranks
        return self._lex_rank


def load_vectors(lines: Iterable[str], meta: str = "") -> EmbeddingStore:
    """Parse the text vector format: header ``count dim``, then one
    ``word v1 ... v_dim`` row per line. Duplicate words warn; last wins."""
    it = iter(enumerate(lines, start=1))
    try:
        lineno, header = next(it)
    except StopIteration:
        raise VectorFormatError("missing header", 1) from None
    parts = header.split()
    if len(parts) != 2:
        raise VectorFormatError("header must be 'count dim'", lineno)
    try:
        count, dim = int(parts[0]), int(parts[1])
    except ValueError:
        raise VectorFormatError("header must contain two integers", lineno) from None
    if count < 0 or dim <= 0:
        raise VectorFormatError("count must be >= 0 and dim > 0", lineno)

    vectors: dict[str, np.ndarray] = {}
    rows_read = 0
    for lineno, line in it:
        if not line.strip():
            continue
        fields = line.split()
        if len(fields) != dim + 1:
            raise VectorFormatError(f"expected {dim} values, got {len(fields) - 1}", lineno)
        word = fields[0]
        try:
            vec = np.array([float(v) for v in fields[1:]], dtype=np.float64)
        except ValueError:
            raise VectorFormatError("non-numeric vector value", lineno) from None
        if not np.all(np.isfinite(vec)):
            raise VectorFormatError("vector values must be finite", lineno)
        if word in vectors:
            warnings.warn(f"duplicate vector for {word!r} at line {lineno}; keeping the last")
        vectors[word] = vec
        rows_read += 1
    if rows_read != count:
        raise VectorFormatError(f"header declared {count} rows, found {rows_read}", lineno if rows_read else 1)
    words = list(vectors)
    matrix = np.vstack([vectors[w] for w in words]) if words else np.zeros((0, dim))
    return EmbeddingStore(words, matrix, meta=meta)


def load_vectors_file(path: str, meta: str = "") -> EmbeddingStore:
    with open(path, encoding="utf-8") as fh:
        return load_vectors(fh, meta=meta)


def cosine_similarity(u: np.ndarray, v: np.ndarray) -> float:
    """u.v / (|u||v|); defined as 0 when either vector is zero."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(np.dot(u, v) / (nu * nv))


def nearest(store: EmbeddingStore, word: str, k: int) -> list[Neighbor]:
    """Top-k in-vocabulary neighbors of ``word`` by cosine similarity,
    excluding the query itself; ties broken lexicographically.
    Out-of-vocabulary queries return an empty list."""
    if k < 1:
        raise ValueError("k must be positive")
    if word not in store.vocab or len(store) < 2:
        return []
    qi = store.vocab[word]
    q = store.matrix[qi]
    qnorm = np.linalg.norm(q)
    with np.errstate(invalid="ignore", divide="ignore"):
        sims = store.matrix @ q
        denom = store.norms * qnorm
        sims = np.where(denom > 0.0, sims / np.where(denom > 0.0, denom, 1.0), 0.0)
    sims[qi] = -np.inf
    order = np.lexsort((store.lex_rank, -sims))
    out = []
    for rank, idx in enumerate(order[: min(k, len(store) - 1)]):
        out.append(Neighbor(store.words[idx], float(sims[idx]), rank))
    return out
