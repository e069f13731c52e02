"""Ordinary least squares on a bias-augmented design with a tiny ridge guard."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DimensionMismatch, SingularDesign

RIDGE_LAMBDA = 1e-8


@dataclass(frozen=True)
class LinearModel:
    """An affine predictor: bias + sum(weights * x). Immutable after training."""

    weights: tuple[float, ...]
    bias: float
    feature_names: tuple[str, ...] | None = None

    @property
    def n_features(self) -> int:
        return len(self.weights)

    def predict_one(self, x) -> float:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n_features,):
            raise DimensionMismatch(f"expected {self.n_features} features, got {x.shape}")
        return float(self.bias + np.dot(np.asarray(self.weights), x))

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise DimensionMismatch(f"expected (n, {self.n_features}) features, got {X.shape}")
        return X @ np.asarray(self.weights) + self.bias

    def coefficient(self, name: str) -> float:
        if self.feature_names is None or name not in self.feature_names:
            raise KeyError(name)
        return self.weights[self.feature_names.index(name)]


def fit_linear(
    X: np.ndarray,
    y: np.ndarray,
    feature_names: tuple[str, ...] | None = None,
    ridge: float = RIDGE_LAMBDA,
) -> LinearModel:
    """Solve the normal equations (A'A + ridge*I) w = A'y on [X | 1].

    The ridge term only rescues collinear designs; at 1e-8 it does not
    materially bias coefficients. Exactly linear data is reproduced exactly.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n, k = X.shape
    if n <= k + 1:
        raise SingularDesign(f"need more than {k + 1} instances to fit {k} weights, got {n}")
    A = np.column_stack([X, np.ones(n)])
    gram = A.T @ A + ridge * np.eye(k + 1)
    try:
        coef = np.linalg.solve(gram, A.T @ y)
    except np.linalg.LinAlgError as exc:
        raise SingularDesign(f"normal equations unsolvable: {exc}") from exc
    if not np.all(np.isfinite(coef)):
        raise SingularDesign("non-finite coefficients; design rank-deficient beyond ridge rescue")
    return LinearModel(weights=tuple(coef[:k]), bias=float(coef[k]), feature_names=feature_names)
