"""Fat-mask ingestion: pixel classification, per-slice counts, spacing, volumes.

Ground-truth slices are color-coded mask images: red marks epicardial fat,
green mediastinal fat, blue the pericardium, grey any other fat, and black
the background. Ingestion classifies every pixel into one of those five
classes, tallies the counts per slice, rescales them to a common in-plane
spacing, and converts counts to physical volumes.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import InconsistentScan, InvalidCount, InvalidImage, InvalidSpacing, ParseError


class FatClass(enum.Enum):
    """The five mask classes; every pixel maps to exactly one."""

    EPICARDIAL = "epicardial"
    MEDIASTINAL = "mediastinal"
    PERICARDIUM = "pericardium"
    OTHER_FAT = "other_fat"
    BACKGROUND = "background"


# Canonical mask colors, in tie-break order. Off-canonical pixels (e.g. from
# anti-aliased re-encodes) are resolved to the nearest of these.
CANONICAL_COLORS: dict[FatClass, tuple[int, int, int]] = {
    FatClass.EPICARDIAL: (255, 0, 0),
    FatClass.MEDIASTINAL: (0, 255, 0),
    FatClass.PERICARDIUM: (0, 0, 255),
    FatClass.OTHER_FAT: (128, 128, 128),
    FatClass.BACKGROUND: (0, 0, 0),
}

_CLASS_ORDER = tuple(CANONICAL_COLORS)
_COLOR_MATRIX = np.array([CANONICAL_COLORS[c] for c in _CLASS_ORDER], dtype=np.int64)


@dataclass(frozen=True)
class VoxelSpacing:
    """Physical size of one voxel in millimeters."""

    dx: float
    dy: float
    dz: float

    def __post_init__(self):
        if not (self.dx > 0 and self.dy > 0 and self.dz > 0):
            raise InvalidSpacing(f"spacing components must be positive, got {self!r}")


@dataclass(frozen=True)
class SliceCounts:
    """Per-slice pixel tallies for the five mask classes plus slice metadata.

    Counts are integers straight out of ``count_slice`` and become real-valued
    after spacing standardization. ``slice_index`` is 1-based along the axial
    scan, head to feet.
    """

    patient_id: str
    slice_index: int
    images_qnt: int
    red: float
    green: float
    blue: float
    grey: float
    black: float
    spacing: VoxelSpacing | None = field(default=None, compare=False)

    def __post_init__(self):
        for name in ("red", "green", "blue", "grey", "black"):
            if getattr(self, name) < 0:
                raise InvalidCount(f"{name} count must be non-negative")
        if not 1 <= self.slice_index <= self.images_qnt:
            raise InconsistentScan(
                f"slice_index {self.slice_index} outside [1, {self.images_qnt}] "
                f"for patient {self.patient_id!r}"
            )

    def value_of(self, name: str) -> float:
        """Look up a count or metadata field by its canonical column name."""
        if name == "grey_total":
            return self.grey + self.red + self.green + self.blue
        return float(getattr(self, name))


def classify_pixel(rgb: tuple[int, int, int]) -> FatClass:
    """Classify one RGB pixel into the nearest of the five canonical colors.

    Euclidean distance in RGB space; ties resolve in the order epicardial,
    mediastinal, pericardium, other fat, background. Total and deterministic.
    """
    r, g, b = rgb
    best = FatClass.BACKGROUND
    best_d = math.inf
    for cls in _CLASS_ORDER:
        cr, cg, cb = CANONICAL_COLORS[cls]
        d = (r - cr) ** 2 + (g - cg) ** 2 + (b - cb) ** 2
        if d < best_d:
            best, best_d = cls, d
    return best


def classify_image(pixels: np.ndarray) -> np.ndarray:
    """Vectorized nearest-color classification of an (H, W, 3+) pixel grid.

    Returns an (H, W) array of indices into the canonical class order.
    An alpha channel, if present, is ignored. Ties resolve to the lowest
    class index, matching ``classify_pixel``.
    """
    arr = np.asarray(pixels)
    if arr.ndim != 3 or arr.shape[2] < 3 or arr.size == 0:
        raise InvalidImage(f"expected a non-empty (H, W, 3) pixel grid, got shape {arr.shape}")
    rgb = arr[:, :, :3].astype(np.int64)
    # (H, W, 5) squared distances to the canonical colors
    diff = rgb[:, :, None, :] - _COLOR_MATRIX[None, None, :, :]
    dist = (diff * diff).sum(axis=3)
    return dist.argmin(axis=2)


def count_slice(
    pixels: np.ndarray,
    patient_id: str,
    slice_index: int,
    images_qnt: int,
    spacing: VoxelSpacing | None = None,
) -> SliceCounts:
    """Tally the pixels of one slice image into the five mask classes.

    The five counts always sum to width x height.
    """
    labels = classify_image(pixels)
    tally = np.bincount(labels.ravel(), minlength=len(_CLASS_ORDER))
    by_class = dict(zip(_CLASS_ORDER, tally.tolist()))
    return SliceCounts(
        patient_id=patient_id,
        slice_index=slice_index,
        images_qnt=images_qnt,
        red=float(by_class[FatClass.EPICARDIAL]),
        green=float(by_class[FatClass.MEDIASTINAL]),
        blue=float(by_class[FatClass.PERICARDIUM]),
        grey=float(by_class[FatClass.OTHER_FAT]),
        black=float(by_class[FatClass.BACKGROUND]),
        spacing=spacing,
    )


def standardize_counts(counts: SliceCounts, target_mm: float = 1.0) -> SliceCounts:
    """Rescale counts to equivalent pixel counts at ``target_mm`` in-plane spacing.

    Each count is multiplied by (dx*dy)/target^2, i.e. by the area ratio, so
    count statistics match what a resampled image would produce without any
    resampling artifacts. Output counts are real-valued; slice thickness dz is
    carried through unchanged.
    """
    if target_mm <= 0:
        raise InvalidSpacing(f"target spacing must be positive, got {target_mm}")
    if counts.spacing is None:
        raise InvalidSpacing("counts carry no spacing; supply sidecar metadata first")
    scale = (counts.spacing.dx * counts.spacing.dy) / (target_mm * target_mm)
    return replace(
        counts,
        red=counts.red * scale,
        green=counts.green * scale,
        blue=counts.blue * scale,
        grey=counts.grey * scale,
        black=counts.black * scale,
        spacing=VoxelSpacing(target_mm, target_mm, counts.spacing.dz),
    )


def counts_to_volume(count: float, spacing: VoxelSpacing) -> float:
    """Convert a pixel count to a physical volume in mm^3 (count * dx * dy * dz)."""
    if count < 0:
        raise InvalidCount(f"count must be non-negative, got {count}")
    return count * spacing.dx * spacing.dy * spacing.dz


def load_slice_image(path: str | Path) -> np.ndarray:
    """Read a PNG slice into an (H, W, 3) uint8 array; alpha is dropped."""
    try:
        with Image.open(path) as img:
            arr = np.asarray(img.convert("RGB"))
    except (UnidentifiedImageError, OSError) as exc:
        raise InvalidImage(f"cannot read image {path}: {exc}") from exc
    if arr.size == 0:
        raise InvalidImage(f"empty image {path}")
    return arr


@dataclass(frozen=True)
class PatientMeta:
    """One sidecar metadata row."""

    patient_id: str
    images_qnt: int
    spacing: VoxelSpacing


def read_patient_metadata(path: str | Path) -> dict[str, PatientMeta]:
    """Parse the per-patient sidecar CSV.

    Expected columns: patient_id, images_qnt, dx_mm, dy_mm, dz_mm.
    """
    required = ["patient_id", "images_qnt", "dx_mm", "dy_mm", "dz_mm"]
    out: dict[str, PatientMeta] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in required if c not in header]
        if missing:
            raise ParseError(f"metadata file {path} missing columns {missing}", row=1)
        for i, row in enumerate(reader, start=2):
            try:
                meta = PatientMeta(
                    patient_id=row["patient_id"],
                    images_qnt=int(row["images_qnt"]),
                    spacing=VoxelSpacing(
                        float(row["dx_mm"]), float(row["dy_mm"]), float(row["dz_mm"])
                    ),
                )
            except (TypeError, ValueError) as exc:
                raise ParseError(f"bad metadata value: {exc}", row=i) from exc
            out[meta.patient_id] = meta
    return out


def iter_patient_slices(images_dir: str | Path) -> dict[str, list[tuple[int, Path]]]:
    """Map each patient subdirectory to its (slice_index, path) PNG list.

    Layout convention: <images_dir>/<patient_id>/<slice_index>.png with a
    zero-padded decimal slice index.
    """
    root = Path(images_dir)
    if not root.is_dir():
        raise InvalidImage(f"image directory {root} does not exist")
    patients: dict[str, list[tuple[int, Path]]] = {}
    for sub in sorted(p for p in root.iterdir() if p.is_dir()):
        slices = []
        for png in sorted(sub.glob("*.png")):
            try:
                idx = int(png.stem)
            except ValueError as exc:
                raise InvalidImage(f"slice filename {png} is not a decimal index") from exc
            slices.append((idx, png))
        if slices:
            slices.sort(key=lambda t: t[0])
            patients[sub.name] = slices
    return patients


def ingest_patient(
    patient_id: str,
    slices: list[tuple[int, Path]],
    meta: PatientMeta,
    target_mm: float = 1.0,
) -> list[SliceCounts]:
    """Count and standardize every slice of one patient scan."""
    out = []
    for idx, path in slices:
        if idx > meta.images_qnt:
            raise InconsistentScan(
                f"slice {idx} of patient {patient_id!r} exceeds images_qnt {meta.images_qnt}"
            )
        pixels = load_slice_image(path)
        counts = count_slice(pixels, patient_id, idx, meta.images_qnt, meta.spacing)
        out.append(standardize_counts(counts, target_mm))
    return out
