"""Exception types raised by the adipredict package."""


class AdipredictError(Exception):
    """Base class for all package errors."""


class InvalidImage(AdipredictError):
    """Empty, unreadable, or malformed slice image."""


class InvalidSpacing(AdipredictError):
    """Non-positive voxel spacing or spacing target."""


class InvalidCount(AdipredictError):
    """Negative pixel count where a non-negative one is required."""


class InconsistentScan(AdipredictError):
    """Slice metadata disagrees within one patient scan."""


class ParseError(AdipredictError):
    """Malformed CSV cell or header.

    Carries the 1-based row and the column name (or index) of the offending
    cell so callers can point at the exact location.
    """

    def __init__(self, message: str, row: int | None = None, column: str | None = None):
        self.row = row
        self.column = column
        where = ""
        if row is not None:
            where += f" (row {row}"
            where += f", column {column})" if column is not None else ")"
        elif column is not None:
            where += f" (column {column})"
        super().__init__(message + where)


class InvalidFoldCount(AdipredictError):
    """Fold count outside [2, n]."""


class TooFewPairs(AdipredictError):
    """Metric evaluation needs at least two prediction pairs."""


class EmptyDataset(AdipredictError):
    """No instances to train or evaluate on."""


class InvalidConfig(AdipredictError):
    """Hyperparameter outside its documented valid range."""


class SingularDesign(AdipredictError):
    """Linear system unsolvable even after the ridge guard."""


class InvalidK(AdipredictError):
    """k-NN neighbour count exceeds the training-set size."""


class TrainingDiverged(AdipredictError):
    """Loss became non-finite during gradient descent."""


class DimensionMismatch(AdipredictError):
    """Feature vector length does not match the model's feature count."""


class NotInvertible(AdipredictError):
    """Linear model cannot be solved for the requested feature."""


class UnknownAlgorithm(AdipredictError):
    """Algorithm name not present in the registry."""

    def __init__(self, name: str, valid: list[str]):
        self.name = name
        self.valid = valid
        super().__init__(f"unknown algorithm {name!r}; valid names: {', '.join(valid)}")


class TimeBudgetExceeded(AdipredictError):
    """Cooperative deadline passed during training."""
