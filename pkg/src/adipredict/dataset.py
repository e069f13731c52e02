"""Instance/dataset model, CSV persistence, task selection, and fold splitting."""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .errors import EmptyDataset, InconsistentScan, InvalidFoldCount, ParseError
from .ingest import SliceCounts

# Canonical dataset CSV column order; header is mandatory.
CSV_COLUMNS = ("patient_id", "slice_index", "images_qnt", "red", "green", "blue", "grey", "black")


class TaskLabel(str, enum.Enum):
    """Which fat is predicted, and whether the masks were preprocessed."""

    MEDIASTINAL_FROM_EPICARDIAL = "mediastinal-from-epicardial"
    EPICARDIAL_FROM_MEDIASTINAL = "epicardial-from-mediastinal"
    MEDIASTINAL_UNPROCESSED = "mediastinal-unprocessed"
    EPICARDIAL_UNPROCESSED = "epicardial-unprocessed"

    @property
    def target_name(self) -> str:
        if self in (TaskLabel.MEDIASTINAL_FROM_EPICARDIAL, TaskLabel.MEDIASTINAL_UNPROCESSED):
            return "green"
        return "red"

    @property
    def feature_names(self) -> tuple[str, ...]:
        if self is TaskLabel.MEDIASTINAL_FROM_EPICARDIAL:
            return ("red", "blue", "grey", "black", "slice_index", "images_qnt")
        if self is TaskLabel.EPICARDIAL_FROM_MEDIASTINAL:
            return ("green", "blue", "grey", "black", "slice_index", "images_qnt")
        # Unprocessed masks: fat labels unavailable, all fat collapses to grey.
        return ("grey_total", "black", "slice_index", "images_qnt")


@dataclass(frozen=True)
class SliceInstance:
    """One training row: an ordered feature vector plus its target."""

    features: tuple[float, ...]
    feature_names: tuple[str, ...]
    target: float
    patient_id: str = ""
    slice_index: int = 0

    def __post_init__(self):
        if len(self.features) != len(self.feature_names):
            raise ValueError("features and feature_names lengths differ")


class Dataset:
    """An immutable list of instances sharing one feature layout.

    ``counts`` retains the source rows when the dataset was built from slice
    counts, which is what the canonical CSV persists; synthetic datasets built
    straight from arrays have no counts backing.
    """

    def __init__(
        self,
        instances: Sequence[SliceInstance],
        task_label: TaskLabel | None = None,
        counts: Sequence[SliceCounts] | None = None,
    ):
        if not instances:
            raise EmptyDataset("dataset needs at least one instance")
        names = instances[0].feature_names
        for inst in instances:
            if inst.feature_names != names:
                raise ValueError("all instances must share identical feature_names")
        self._instances = tuple(instances)
        self.task_label = task_label
        self.counts = tuple(counts) if counts is not None else None
        self.feature_names = names
        self._X = np.array([inst.features for inst in instances], dtype=float)
        self._y = np.array([inst.target for inst in instances], dtype=float)

    @property
    def instances(self) -> tuple[SliceInstance, ...]:
        return self._instances

    @property
    def n(self) -> int:
        return len(self._instances)

    @property
    def X(self) -> np.ndarray:
        """(n, k) feature matrix (copy-safe view)."""
        return self._X

    @property
    def y(self) -> np.ndarray:
        """(n,) target vector."""
        return self._y

    def __len__(self) -> int:
        return self.n

    def __iter__(self) -> Iterator[SliceInstance]:
        return iter(self._instances)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return self.task_label == other.task_label and self._instances == other._instances

    @classmethod
    def from_arrays(
        cls,
        X: np.ndarray,
        y: np.ndarray,
        feature_names: Sequence[str] | None = None,
        task_label: TaskLabel | None = None,
    ) -> "Dataset":
        """Build an ad-hoc dataset (synthetic benchmarks, service payloads)."""
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=float)
        if X.ndim != 2 or y.shape != (X.shape[0],):
            raise ValueError(f"need X (n, k) and y (n,), got {X.shape} and {y.shape}")
        names = tuple(feature_names) if feature_names else tuple(f"x{j}" for j in range(X.shape[1]))
        instances = [
            SliceInstance(tuple(row), names, float(t), patient_id="", slice_index=i + 1)
            for i, (row, t) in enumerate(zip(X, y))
        ]
        return cls(instances, task_label=task_label)


def make_instances(counts: Sequence[SliceCounts], task_label: TaskLabel) -> Dataset:
    """Turn slice counts into a task dataset.

    Processed tasks keep the six non-target quantities as features; the
    unprocessed tasks collapse all fat classes into grey_total and drop the
    per-fat features, leaving four.
    """
    if not counts:
        raise EmptyDataset("no slice counts supplied")
    qnt_by_patient: dict[str, int] = {}
    for c in counts:
        seen = qnt_by_patient.setdefault(c.patient_id, c.images_qnt)
        if seen != c.images_qnt:
            raise InconsistentScan(
                f"patient {c.patient_id!r} has conflicting images_qnt ({seen} vs {c.images_qnt})"
            )
    names = task_label.feature_names
    target = task_label.target_name
    instances = [
        SliceInstance(
            features=tuple(c.value_of(f) for f in names),
            feature_names=names,
            target=c.value_of(target),
            patient_id=c.patient_id,
            slice_index=c.slice_index,
        )
        for c in counts
    ]
    return Dataset(instances, task_label=task_label, counts=counts)


def _format_number(v: float) -> str:
    """Serialize a real at 17 significant digits (lossless for float64)."""
    if float(v).is_integer() and abs(v) < 1e15:
        return str(int(v))
    return format(float(v), ".17g")


def save_counts_csv(counts: Sequence[SliceCounts], path: str | Path) -> None:
    """Write the canonical counts CSV (header mandatory, UTF-8, '.' decimals)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for c in counts:
            writer.writerow(
                [
                    c.patient_id,
                    c.slice_index,
                    c.images_qnt,
                    _format_number(c.red),
                    _format_number(c.green),
                    _format_number(c.blue),
                    _format_number(c.grey),
                    _format_number(c.black),
                ]
            )


def load_counts_csv(path: str | Path) -> list[SliceCounts]:
    """Read the canonical counts CSV back into slice-count rows."""
    out: list[SliceCounts] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path} is empty", row=1) from None
        if tuple(header) != CSV_COLUMNS:
            raise ParseError(
                f"bad header {header!r}, expected {list(CSV_COLUMNS)}", row=1
            )
        for i, row in enumerate(reader, start=2):
            if len(row) != len(CSV_COLUMNS):
                raise ParseError(f"expected {len(CSV_COLUMNS)} cells, got {len(row)}", row=i)
            rec = dict(zip(CSV_COLUMNS, row))
            try:
                slice_index = int(rec["slice_index"])
            except ValueError:
                raise ParseError("non-integer slice_index", row=i, column="slice_index") from None
            try:
                images_qnt = int(rec["images_qnt"])
            except ValueError:
                raise ParseError("non-integer images_qnt", row=i, column="images_qnt") from None
            values = {}
            for col in ("red", "green", "blue", "grey", "black"):
                try:
                    values[col] = float(rec[col])
                except ValueError:
                    raise ParseError(f"non-numeric cell {rec[col]!r}", row=i, column=col) from None
            out.append(
                SliceCounts(
                    patient_id=rec["patient_id"],
                    slice_index=slice_index,
                    images_qnt=images_qnt,
                    **values,
                )
            )
    return out


def save_csv(dataset: Dataset, path: str | Path) -> None:
    """Persist a counts-backed dataset to the canonical CSV."""
    if dataset.counts is None:
        raise ValueError("dataset has no slice-count backing; only count-backed datasets persist")
    save_counts_csv(dataset.counts, path)


def load_csv(path: str | Path, task_label: TaskLabel) -> Dataset:
    """Load the canonical CSV and materialize the given task's dataset.

    The CSV stores raw counts only, so the task is chosen at load time;
    ``load_csv(save_csv(d), d.task_label)`` round-trips losslessly.
    """
    return make_instances(load_counts_csv(path), task_label)


_MASK64 = (1 << 64) - 1
# Knuth MMIX multiplier/increment; fold plans must be bit-reproducible.
_LCG_MULT = 6364136223846793005
_LCG_INC = 1442695040888963407


class Lcg64:
    """Documented 64-bit linear congruential generator used for fold shuffles.

    state' = (state * 6364136223846793005 + 1442695040888963407) mod 2^64
    """

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state * _LCG_MULT + _LCG_INC) & _MASK64
        return self.state

    def next_below(self, bound: int) -> int:
        return self.next_u64() % bound


@dataclass(frozen=True)
class FoldPlan:
    """Per-instance fold assignment; fold sizes differ by at most one."""

    k: int
    assignments: tuple[int, ...] = field(compare=True)

    @property
    def n(self) -> int:
        return len(self.assignments)

    def test_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(np.asarray(self.assignments) == fold)

    def train_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(np.asarray(self.assignments) != fold)


def split_folds(n: int, k: int, seed: int) -> FoldPlan:
    """Deterministic shuffled fold assignment driven solely by the seed.

    Fisher-Yates with the documented LCG, then round-robin dealing of the
    shuffled order into k folds, so sizes differ by at most one.
    """
    if k < 2 or k > n:
        raise InvalidFoldCount(f"need 2 <= k <= n, got k={k}, n={n}")
    rng = Lcg64(seed)
    order = list(range(n))
    for i in range(n - 1, 0, -1):
        j = rng.next_below(i + 1)
        order[i], order[j] = order[j], order[i]
    assignments = [0] * n
    for position, idx in enumerate(order):
        assignments[idx] = position % k
    return FoldPlan(k=k, assignments=tuple(assignments))
