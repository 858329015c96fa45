"""From-scratch random-forest probability classifier.

Trees use axis-aligned threshold splits chosen by Gini impurity over a
random feature subsample; leaves store the class frequency of the positive
("correct") class and predictions are the mean leaf frequency over trees.
Per-tree RNG seeds derive from the base seed by a splitmix-style mixer, so
serial and parallel training grow bit-identical forests.
"""

from __future__ import annotations

import numpy as np
from joblib import Parallel, delayed
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_array, check_X_y

_M64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    """One splitmix64 step; stable across platforms and runs."""
    x = (x + 0x9E3779B97F4A7C15) & _M64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
    return z ^ (z >> 31)


def _tree_seed(base: int, index: int) -> int:
    return splitmix64(splitmix64(base & _M64) ^ (index & _M64))


class _Tree:
    """Flat-array decision tree. feature < 0 marks a leaf."""

    __slots__ = ("feature", "threshold", "left", "right", "value")

    def __init__(self, feature, threshold, left, right, value):
        self.feature = np.asarray(feature, dtype=np.int32)
        self.threshold = np.asarray(threshold, dtype=np.float64)
        self.left = np.asarray(left, dtype=np.int32)
        self.right = np.asarray(right, dtype=np.int32)
        self.value = np.asarray(value, dtype=np.float64)

    def predict(self, X: np.ndarray) -> np.ndarray:
        idx = np.zeros(X.shape[0], dtype=np.int32)
        while True:
            feat = self.feature[idx]
            internal = feat >= 0
            if not internal.any():
                break
            rows = np.nonzero(internal)[0]
            go_right = X[rows, feat[rows]] > self.threshold[idx[rows]]
            idx[rows] = np.where(go_right, self.right[idx[rows]], self.left[idx[rows]])
        return self.value[idx]


def _best_split(X, y, w, idx, feats, min_node_size):
    """Best (gain, feature, threshold) over the given features, or None.

    Ties in gain are broken by lowest feature index (features are visited in
    ascending order, strict improvement required) and lowest threshold
    (argmin picks the first position).
    """
    yw = y[idx] * w[idx]
    ws = w[idx]
    w_tot = ws.sum()
    p_tot = yw.sum()
    parent = 2.0 * p_tot * (w_tot - p_tot) / w_tot
    best = None
    for f in feats:
        v = X[idx, f]
        order = np.argsort(v, kind="stable")
        vs = v[order]
        if vs[0] == vs[-1]:
            continue
        cum_w = np.cumsum(ws[order])
        cum_p = np.cumsum(yw[order])
        pos = np.nonzero(vs[:-1] < vs[1:])[0]
        n_left = pos + 1
        valid = (n_left >= min_node_size) & (len(idx) - n_left >= min_node_size)
        pos = pos[valid]
        if len(pos) == 0:
            continue
        wl, pl = cum_w[pos], cum_p[pos]
        wr, pr = w_tot - wl, p_tot - pl
        child = 2.0 * pl * (wl - pl) / wl + 2.0 * pr * (wr - pr) / wr
        i = int(np.argmin(child))
        gain = parent - child[i]
        if best is None or gain > best[0]:
            thr = (vs[pos[i]] + vs[pos[i] + 1]) / 2.0
            if thr >= vs[pos[i] + 1]:  # midpoint rounded up between adjacent floats
                thr = vs[pos[i]]
            best = (gain, int(f), float(thr))
    return best


def _grow_tree(X, y, sample_weight, mtry, min_node_size, max_depth,
               bootstrap_fraction, seed):
    n, n_features = X.shape
    rng = np.random.Generator(np.random.PCG64(seed))
    m = max(1, int(round(bootstrap_fraction * n)))
    boot = rng.integers(0, n, size=m)

    feature, threshold, left, right, value = [], [], [], [], []

    def new_node():
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        value.append(0.0)
        return len(feature) - 1

    # explicit stack, left child first, keeps node numbering deterministic
    root = new_node()
    stack = [(root, boot, 0)]
    while stack:
        node, idx, depth = stack.pop()
        yw = y[idx] * sample_weight[idx]
        w_tot = sample_weight[idx].sum()
        p = yw.sum() / w_tot
        value[node] = p
        if p == 0.0 or p == 1.0 or len(idx) < 2 * min_node_size or len(idx) < 2 \
                or (max_depth is not None and depth >= max_depth):
            continue
        feats = np.sort(rng.choice(n_features, size=min(mtry, n_features), replace=False))
        best = _best_split(X, y, sample_weight, idx, feats, min_node_size)
        if best is None:
            # all sampled features constant here; fall back to the rest so a
            # fully grown tree always separates consistent data
            rest = np.setdiff1d(np.arange(n_features), feats)
            best = _best_split(X, y, sample_weight, idx, rest, min_node_size)
        if best is None:
            continue
        _, f, thr = best
        go_left = X[idx, f] <= thr
        li, ri = new_node(), new_node()
        feature[node] = f
        threshold[node] = thr
        left[node] = li
        right[node] = ri
        stack.append((ri, idx[~go_left], depth + 1))
        stack.append((li, idx[go_left], depth + 1))
    return _Tree(feature, threshold, left, right, value)


class RandomForestScorer(BaseEstimator, ClassifierMixin):
    """Binary probability forest scoring candidates as correct/incorrect.

    Parameters
    ----------
    n_trees : ensemble size.
    mtry : features sampled per split; default floor(sqrt(n_features)).
    min_node_size : minimum samples per child node.
    max_depth : None means unlimited.
    bootstrap_fraction : bootstrap sample size as a fraction of n (with
        replacement).
    class_weight : weight of the positive class (None means 1.0).
    random_state : base seed; fixed seed gives bit-identical forests
        regardless of n_jobs.
    """

    def __init__(self, n_trees=500, mtry=None, min_node_size=1, max_depth=None,
                 bootstrap_fraction=1.0, class_weight=None, random_state=0,
                 n_jobs=1):
        self.n_trees = n_trees
        self.mtry = mtry
        self.min_node_size = min_node_size
        self.max_depth = max_depth
        self.bootstrap_fraction = bootstrap_fraction
        self.class_weight = class_weight
        self.random_state = random_state
        self.n_jobs = n_jobs

    def fit(self, X, y):
        X, y = check_X_y(X, y, dtype=np.float64)
        if self.n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        classes = np.unique(y)
        if not np.array_equal(classes, [0, 1]):
            if len(classes) == 1:
                raise ValueError("training data contains a single class; cannot rank candidates")
            raise ValueError(f"labels must be binary 0/1, got {classes}")
        y = y.astype(np.float64)
        w = np.ones(len(y))
        if self.class_weight is not None:
            w[y == 1.0] = float(self.class_weight)
        mtry = self.mtry if self.mtry is not None else max(1, int(np.sqrt(X.shape[1])))
        if not 1 <= mtry <= X.shape[1]:
            raise ValueError(f"mtry must be in [1, {X.shape[1]}]")
        seeds = [_tree_seed(self.random_state, i) for i in range(self.n_trees)]
        self.trees_ = Parallel(n_jobs=self.n_jobs)(
            delayed(_grow_tree)(X, y, w, mtry, self.min_node_size,
                                self.max_depth, self.bootstrap_fraction, s)
            for s in seeds
        )
        self.n_features_in_ = X.shape[1]
        self.classes_ = np.array([0, 1])
        return self

    def confidence(self, X) -> np.ndarray:
        """P(correct) per row: the mean over trees of leaf frequencies."""
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} features, got {X.shape[1]}")
        total = np.zeros(X.shape[0])
        for tree in self.trees_:
            total += tree.predict(X)
        return total / len(self.trees_)

    def predict_proba(self, X) -> np.ndarray:
        p = self.confidence(X)
        return np.column_stack([1.0 - p, p])

    def predict(self, X) -> np.ndarray:
        return (self.confidence(X) >= 0.5).astype(np.int64)

    # -- exact serialization ------------------------------------------------

    def to_state(self) -> dict[str, np.ndarray]:
        state = {
            "params": np.array([
                self.n_trees, -1 if self.mtry is None else self.mtry,
                self.min_node_size, -1 if self.max_depth is None else self.max_depth,
                self.random_state, self.n_features_in_,
            ], dtype=np.int64),
            "fparams": np.array([
                self.bootstrap_fraction,
                np.nan if self.class_weight is None else self.class_weight,
            ], dtype=np.float64),
            "sizes": np.array([len(t.feature) for t in self.trees_], dtype=np.int64),
            "feature": np.concatenate([t.feature for t in self.trees_]),
            "threshold": np.concatenate([t.threshold for t in self.trees_]),
            "left": np.concatenate([t.left for t in self.trees_]),
            "right": np.concatenate([t.right for t in self.trees_]),
            "value": np.concatenate([t.value for t in self.trees_]),
        }
        return state

    @classmethod
    def from_state(cls, state) -> "RandomForestScorer":
        p = state["params"]
        fp = state["fparams"]
        model = cls(
            n_trees=int(p[0]),
            mtry=None if p[1] < 0 else int(p[1]),
            min_node_size=int(p[2]),
            max_depth=None if p[3] < 0 else int(p[3]),
            bootstrap_fraction=float(fp[0]),
            class_weight=None if np.isnan(fp[1]) else float(fp[1]),
            random_state=int(p[4]),
        )
        model.n_features_in_ = int(p[5])
        model.classes_ = np.array([0, 1])
        trees = []
        offset = 0
        for size in state["sizes"]:
            size = int(size)
            sl = slice(offset, offset + size)
            trees.append(_Tree(state["feature"][sl], state["threshold"][sl],
                               state["left"][sl], state["right"][sl],
                               state["value"][sl]))
            offset += size
        model.trees_ = trees
        return model

    def save_npz(self, path: str) -> None:
        np.savez_compressed(path, **self.to_state())

    @classmethod
    def load_npz(cls, path: str) -> "RandomForestScorer":
        with np.load(path) as data:
            return cls.from_state(data)
