"""Random forest: bagged variance-reduction trees with per-split feature draws."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from ..errors import DimensionMismatch, InvalidConfig, TimeBudgetExceeded
from .tree import TreeConfig, TreeModel, fit_tree


@dataclass(frozen=True)
class ForestConfig:
    n_trees: int = 100
    bootstrap: bool = True
    features_per_split: int | None = None  # None -> ceil(sqrt(n_features))
    min_leaf: int = 1
    max_depth: int | None = None
    seed: int = 0

    def __post_init__(self):
        if self.n_trees < 1:
            raise InvalidConfig(f"n_trees must be >= 1, got {self.n_trees}")
        if self.features_per_split is not None and self.features_per_split < 1:
            raise InvalidConfig("features_per_split must be >= 1")


class ForestModel:
    """Prediction is the arithmetic mean of the member trees' predictions."""

    def __init__(self, trees: list[TreeModel], n_features: int,
                 feature_names: tuple[str, ...] | None = None):
        self.trees = trees
        self.n_features = n_features
        self.feature_names = feature_names

    def predict_one(self, x) -> float:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n_features,):
            raise DimensionMismatch(f"expected {self.n_features} features, got {x.shape}")
        return float(np.mean([t.predict_one(x) for t in self.trees]))

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise DimensionMismatch(f"expected (n, {self.n_features}) features, got {X.shape}")
        return np.mean([t.predict(X) for t in self.trees], axis=0)


def fit_forest(
    X: np.ndarray,
    y: np.ndarray,
    cfg: ForestConfig = ForestConfig(),
    feature_names: tuple[str, ...] | None = None,
    deadline: float | None = None,
) -> ForestModel:
    """Train the ensemble; member i's randomness comes from rng([seed, i]).

    Each tree sees a bootstrap sample of the same size as the training fold
    (when enabled) and draws a fresh feature subset at every split. The
    deadline, if given, is polled between trees.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n, k = X.shape
    fps = cfg.features_per_split
    if fps is None:
        fps = math.ceil(math.sqrt(k))
    fps = min(fps, k)
    tree_cfg = TreeConfig(min_leaf=cfg.min_leaf, max_depth=cfg.max_depth)
    trees: list[TreeModel] = []
    for i in range(cfg.n_trees):
        if deadline is not None and time.monotonic() > deadline:
            raise TimeBudgetExceeded(f"forest training passed its deadline at tree {i}")
        rng = np.random.default_rng([cfg.seed, i])
        if cfg.bootstrap:
            sample = rng.integers(0, n, size=n)
            Xs, ys = X[sample], y[sample]
        else:
            Xs, ys = X, y
        trees.append(
            fit_tree(Xs, ys, tree_cfg, feature_names, rng=rng, features_per_split=fps)
        )
    return ForestModel(trees, k, feature_names)
