"""k-nearest-neighbour regressor with per-feature min-max distance rescaling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DimensionMismatch, InvalidK


@dataclass(frozen=True)
class KnnConfig:
    k: int = 5

    def __post_init__(self):
        if self.k < 1:
            raise InvalidK(f"k must be >= 1, got {self.k}")


class KnnModel:
    """Stores the training fold; prediction averages the k nearest targets.

    Distances are Euclidean on min-max-rescaled coordinates, with the scaling
    fitted on the training fold only. Distance ties break by training order.
    """

    def __init__(self, X: np.ndarray, y: np.ndarray, k: int,
                 mins: np.ndarray, spans: np.ndarray,
                 feature_names: tuple[str, ...] | None = None):
        self._X_scaled = (X - mins) / spans
        self._y = y
        self.k = k
        self.mins = mins
        self.spans = spans
        self.feature_names = feature_names
        self.n_features = X.shape[1]

    def predict_one(self, x) -> float:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n_features,):
            raise DimensionMismatch(f"expected {self.n_features} features, got {x.shape}")
        q = (x - self.mins) / self.spans
        d2 = ((self._X_scaled - q) ** 2).sum(axis=1)
        nearest = np.argsort(d2, kind="stable")[: self.k]
        return float(self._y[nearest].mean())

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise DimensionMismatch(f"expected (n, {self.n_features}) features, got {X.shape}")
        return np.array([self.predict_one(row) for row in X])


def fit_knn(
    X: np.ndarray,
    y: np.ndarray,
    cfg: KnnConfig = KnnConfig(),
    feature_names: tuple[str, ...] | None = None,
) -> KnnModel:
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n = X.shape[0]
    if cfg.k > n:
        raise InvalidK(f"k={cfg.k} exceeds training size n={n}")
    mins = X.min(axis=0)
    spans = X.max(axis=0) - mins
    spans = np.where(spans == 0.0, 1.0, spans)  # constant feature contributes 0 distance
    return KnnModel(X, y, cfg.k, mins, spans, feature_names)
