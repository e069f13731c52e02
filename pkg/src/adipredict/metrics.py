"""The five evaluation measures over pooled (predicted, actual) pairs.

rho  = sum((a - mean(a)) * (b - mean(b))) / sqrt(sum((a - mean(a))^2) * sum((b - mean(b))^2))
MAE  = mean(|a - b|)
RMSE = sqrt(mean((a - b)^2))
RAE  = sum(|a - b|) / sum(|mean(b) - b|)          (reported as a percentage)
RRSE = sqrt(sum((a - b)^2) / sum((mean(b) - b)^2)) (reported as a percentage)

with a the predictions and b the actuals, pooled across all CV folds and
computed once over the n pairs.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import TooFewPairs


class MetricStatus(str, enum.Enum):
    OK = "ok"
    RHO_UNDEFINED = "rho_undefined"
    DENOMINATOR_ZERO = "denominator_zero"


class PredictionSet:
    """Paired (predicted, actual) values pooled across folds."""

    def __init__(self, predicted: Sequence[float], actual: Sequence[float]):
        self.predicted = np.asarray(predicted, dtype=float)
        self.actual = np.asarray(actual, dtype=float)
        if self.predicted.shape != self.actual.shape or self.predicted.ndim != 1:
            raise ValueError("predicted and actual must be 1-D and equally long")

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[float, float]]) -> "PredictionSet":
        pairs = list(pairs)
        return cls([p for p, _ in pairs], [a for _, a in pairs])

    @property
    def n(self) -> int:
        return int(self.predicted.shape[0])


@dataclass(frozen=True)
class EvalReport:
    """Metric values plus status flags; degenerate cases flag, never raise."""

    rho: float | None
    mae: float
    rmse: float
    rae_pct: float | None
    rrse_pct: float | None
    n: int
    status: MetricStatus


def evaluate(pred_set: PredictionSet) -> EvalReport:
    """Compute all five measures over one pooled prediction set.

    If the predicted or actual series has zero variance, rho is undefined and
    the report is flagged RHO_UNDEFINED. If the actuals are all equal the
    relative errors lose their denominator too, flagged DENOMINATOR_ZERO.
    """
    n = pred_set.n
    if n < 2:
        raise TooFewPairs(f"need at least 2 pairs, got {n}")
    a = pred_set.predicted
    b = pred_set.actual
    err = a - b

    mae = float(np.mean(np.abs(err)))
    rmse = float(np.sqrt(np.mean(err * err)))

    a_dev = a - a.mean()
    b_dev = b - b.mean()
    ss_a = float(np.dot(a_dev, a_dev))
    ss_b = float(np.dot(b_dev, b_dev))

    rho: float | None = None
    if ss_a > 0.0 and ss_b > 0.0:
        rho = float(np.dot(a_dev, b_dev) / np.sqrt(ss_a * ss_b))

    abs_dev_sum = float(np.sum(np.abs(b_dev)))
    if abs_dev_sum == 0.0:
        return EvalReport(rho, mae, rmse, None, None, n, MetricStatus.DENOMINATOR_ZERO)
    rae_pct = 100.0 * float(np.sum(np.abs(err))) / abs_dev_sum
    rrse_pct = 100.0 * float(np.sqrt(np.sum(err * err) / ss_b))

    status = MetricStatus.OK if rho is not None else MetricStatus.RHO_UNDEFINED
    return EvalReport(rho, mae, rmse, rae_pct, rrse_pct, n, status)


def error_column(pred_set: PredictionSet) -> np.ndarray:
    """Signed per-pair errors, predicted minus actual."""
    if pred_set.n < 1:
        raise TooFewPairs("need at least 1 pair")
    return pred_set.predicted - pred_set.actual
