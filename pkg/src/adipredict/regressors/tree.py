"""Binary regression tree: greedy variance-reduction splits, leaf means."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DimensionMismatch, InvalidConfig

_LEAF = -1


@dataclass(frozen=True)
class TreeConfig:
    min_leaf: int = 1
    max_depth: int | None = None

    def __post_init__(self):
        if self.min_leaf < 1:
            raise InvalidConfig(f"min_leaf must be >= 1, got {self.min_leaf}")
        if self.max_depth is not None and self.max_depth < 0:
            raise InvalidConfig(f"max_depth must be >= 0, got {self.max_depth}")


class TreeModel:
    """Flat-array tree; node i is a leaf when feature[i] == -1."""

    def __init__(self, feature, threshold, left, right, value, n_features,
                 feature_names=None):
        self.feature = np.asarray(feature, dtype=int)
        self.threshold = np.asarray(threshold, dtype=float)
        self.left = np.asarray(left, dtype=int)
        self.right = np.asarray(right, dtype=int)
        self.value = np.asarray(value, dtype=float)
        self.n_features = n_features
        self.feature_names = feature_names

    @property
    def n_nodes(self) -> int:
        return len(self.feature)

    def predict_one(self, x) -> float:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n_features,):
            raise DimensionMismatch(f"expected {self.n_features} features, got {x.shape}")
        node = 0
        while self.feature[node] != _LEAF:
            if x[self.feature[node]] <= self.threshold[node]:
                node = self.left[node]
            else:
                node = self.right[node]
        return float(self.value[node])

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise DimensionMismatch(f"expected (n, {self.n_features}) features, got {X.shape}")
        return np.array([self.predict_one(row) for row in X])


def _best_split(X, y, idx, candidates, min_leaf):
    """Scan midpoints of sorted unique values; return (gain, feature, threshold).

    Gain is the reduction in summed squared error. Ties keep the first
    candidate in scan order, so the search is deterministic.
    """
    ys = y[idx]
    m = len(idx)
    total_sum = ys.sum()
    total_sq = float(ys @ ys)
    parent_sse = total_sq - total_sum * total_sum / m
    best = (0.0, _LEAF, 0.0)
    for j in candidates:
        xs = X[idx, j]
        order = np.argsort(xs, kind="stable")
        xs_sorted = xs[order]
        ys_sorted = ys[order]
        cum_sum = np.cumsum(ys_sorted)
        cum_sq = np.cumsum(ys_sorted * ys_sorted)
        # split after position i puts i+1 rows on the left
        boundaries = np.flatnonzero(xs_sorted[:-1] < xs_sorted[1:])
        for i in boundaries:
            n_left = i + 1
            n_right = m - n_left
            if n_left < min_leaf or n_right < min_leaf:
                continue
            left_sse = float(cum_sq[i]) - float(cum_sum[i]) ** 2 / n_left
            right_sum = total_sum - float(cum_sum[i])
            right_sse = (total_sq - float(cum_sq[i])) - right_sum**2 / n_right
            gain = parent_sse - left_sse - right_sse
            if gain > best[0]:
                best = (gain, j, (xs_sorted[i] + xs_sorted[i + 1]) / 2.0)
    return best


def fit_tree(
    X: np.ndarray,
    y: np.ndarray,
    cfg: TreeConfig = TreeConfig(),
    feature_names: tuple[str, ...] | None = None,
    rng: np.random.Generator | None = None,
    features_per_split: int | None = None,
) -> TreeModel:
    """Grow the tree depth-first.

    ``features_per_split`` < n_features draws a random candidate subset at
    every node from ``rng`` (random-forest mode); otherwise all features are
    scanned in index order and the fit is fully deterministic.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n, k = X.shape
    if n < 1:
        raise InvalidConfig("empty training set")
    subsample = features_per_split is not None and features_per_split < k
    if subsample and rng is None:
        raise InvalidConfig("feature subsampling needs an rng")

    feature, threshold, left, right, value = [], [], [], [], []

    def new_node(idx: np.ndarray) -> int:
        feature.append(_LEAF)
        threshold.append(0.0)
        left.append(_LEAF)
        right.append(_LEAF)
        value.append(float(y[idx].mean()))
        return len(feature) - 1

    # explicit stack; LIFO order keeps node numbering deterministic
    root_idx = np.arange(n)
    stack = [(new_node(root_idx), root_idx, 0)]
    while stack:
        node, idx, depth = stack.pop()
        if cfg.max_depth is not None and depth >= cfg.max_depth:
            continue
        if len(idx) < 2 * cfg.min_leaf:
            continue
        if subsample:
            candidates = np.sort(rng.choice(k, size=features_per_split, replace=False))
        else:
            candidates = range(k)
        gain, j, thr = _best_split(X, y, idx, candidates, cfg.min_leaf)
        if j == _LEAF or gain <= 0.0:
            continue
        mask = X[idx, j] <= thr
        feature[node] = j
        threshold[node] = thr
        left_idx, right_idx = idx[mask], idx[~mask]
        left[node] = new_node(left_idx)
        right[node] = new_node(right_idx)
        stack.append((right[node], right_idx, depth + 1))
        stack.append((left[node], left_idx, depth + 1))

    return TreeModel(feature, threshold, left, right, value, k, feature_names)
