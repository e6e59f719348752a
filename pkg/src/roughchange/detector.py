"""Rough-clustering change detector for co-registered image pairs.

The pixel universe is partitioned by the joint quantized (before, after)
scalar codes, a candidate changed set is cut from the difference field,
and each pixel is scored by the fraction of its equivalence class inside
that candidate set. Thresholding the score at T yields the binary mask:
T = 1 keeps exactly the lower approximation (certainly changed), values
near 0 keep the whole upper approximation (possibly changed).
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DimensionMismatchError
from .imaging import (
    SCALAR_MAX,
    SCALAR_RANGE,
    RasterImage,
    ScalarField,
    abs_difference,
    load_image,
    quantize,
    save_image,
    transform_to_scalar,
)
from .roughsets import InformationSystem, approximate, induce_partition, rough_memberships

__all__ = [
    "CandidateRule",
    "DetectionParams",
    "ChangeMask",
    "DetectionReport",
    "otsu_threshold",
    "candidate_change_set",
    "detect_changes",
    "save_mask",
    "load_mask",
]


@dataclass(frozen=True)
class CandidateRule:
    """How the scalar-difference cutoff t0 is resolved.

    ``otsu`` maximizes between-class variance over the full-range
    histogram, ``mean`` takes the ceiling of the average difference, and
    ``fixed`` uses the given cutoff directly.
    """

    kind: str = "otsu"
    t0: int | None = None

    def __post_init__(self):
        if self.kind not in ("otsu", "mean", "fixed"):
            raise ValueError(f"unknown candidate rule {self.kind!r}")
        if self.kind == "fixed":
            if self.t0 is None:
                raise ValueError("fixed candidate rule needs a cutoff t0")
            if not 0 <= int(self.t0) <= SCALAR_MAX:
                raise ValueError(f"fixed cutoff must lie in [0, {SCALAR_MAX}]")
            object.__setattr__(self, "t0", int(self.t0))
        elif self.t0 is not None:
            raise ValueError(f"rule {self.kind!r} does not take a cutoff")

    @classmethod
    def parse(cls, text: str) -> "CandidateRule":
        """Parse ``otsu``, ``mean``, or ``fixed:<t0>``."""
        text = text.strip()
        if text in ("otsu", "mean"):
            return cls(text)
        if text.startswith("fixed:"):
            raw = text[len("fixed:"):]
            try:
                return cls("fixed", int(raw))
            except ValueError:
                raise ValueError(f"bad fixed cutoff {raw!r}") from None
        raise ValueError(f"unknown candidate rule {text!r} (use otsu, mean, or fixed:<t0>)")

    def __str__(self) -> str:
        return f"fixed:{self.t0}" if self.kind == "fixed" else self.kind


@dataclass(frozen=True)
class DetectionParams:
    """Tuning knobs for :func:`detect_changes`."""

    threshold: float = 0.5
    bins: int = 32
    rule: CandidateRule = field(default_factory=CandidateRule)

    def __post_init__(self):
        if not 0.0 <= float(self.threshold) <= 1.0:
            raise ValueError(f"threshold must lie in [0, 1], got {self.threshold}")
        if not 1 <= int(self.bins) <= SCALAR_RANGE:
            raise ValueError(f"bins must lie in [1, {SCALAR_RANGE}], got {self.bins}")
        object.__setattr__(self, "threshold", float(self.threshold))
        object.__setattr__(self, "bins", int(self.bins))


@dataclass(frozen=True, eq=False)
class ChangeMask:
    """Per-pixel change verdict; True means changed (rendered white)."""

    flags: np.ndarray

    def __post_init__(self):
        flags = np.array(self.flags, dtype=bool, order="C", copy=True)
        if flags.ndim != 2:
            raise ValueError("mask flags must be 2-D")
        flags.flags.writeable = False
        object.__setattr__(self, "flags", flags)

    @property
    def height(self) -> int:
        return self.flags.shape[0]

    @property
    def width(self) -> int:
        return self.flags.shape[1]

    @property
    def changed_count(self) -> int:
        return int(np.count_nonzero(self.flags))

    def to_image(self) -> RasterImage:
        return RasterImage(np.where(self.flags, 255, 0).astype(np.uint8))


@dataclass(frozen=True)
class DetectionReport:
    """Summary of one detection run."""

    global_accuracy: float
    changed_count: int
    lower_count: int
    upper_count: int
    candidate_t0: int
    params: DetectionParams

    def to_json_dict(self) -> dict:
        return {
            "global_accuracy": self.global_accuracy,
            "changed_count": self.changed_count,
            "lower_count": self.lower_count,
            "upper_count": self.upper_count,
            "candidate_t0": self.candidate_t0,
            "threshold_T": self.params.threshold,
            "bins_B": self.params.bins,
            "candidate_rule": str(self.params.rule),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)


def otsu_threshold(diff: ScalarField) -> int:
    """Cutoff maximizing between-class variance over the 1531-bin histogram.

    Classes are ``{v < t0}`` and ``{v >= t0}``; ties resolve to the
    smallest cutoff. A single-valued field degenerates to
    ``max(1, value)`` so identical images never mark everything changed.
    """
    hist = np.bincount(diff.values.reshape(-1), minlength=SCALAR_RANGE)
    nonzero = np.flatnonzero(hist)
    if nonzero.size == 1:
        return max(1, int(nonzero[0]))

    total = int(diff.values.size)
    weights = hist.astype(np.float64)
    moments = weights * np.arange(SCALAR_RANGE, dtype=np.float64)
    w0 = np.cumsum(weights)[:-1]  # cutoff t0 = v + 1 puts {<= v} below
    w1 = total - w0
    sum0 = np.cumsum(moments)[:-1]
    grand = float(moments.sum())
    valid = (w0 > 0) & (w1 > 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        mu0 = sum0 / w0
        mu1 = (grand - sum0) / w1
        between = w0 * w1 * (mu0 - mu1) ** 2
    between[~valid] = -np.inf
    return int(np.argmax(between)) + 1


def candidate_change_set(diff: ScalarField, rule: CandidateRule) -> tuple[np.ndarray, int]:
    """Select candidate changed pixels ``{diff >= t0}``.

    Returns the boolean flag grid and the resolved cutoff t0.
    """
    if rule.kind == "fixed":
        t0 = int(rule.t0)
    elif rule.kind == "mean":
        # exact integer ceiling; an all-zero field resolves above 0 so
        # nothing is marked
        total = int(diff.values.sum())
        t0 = max(1, -(-total // diff.values.size))
    else:
        t0 = otsu_threshold(diff)
    return diff.values >= t0, t0


def detect_changes(
    img1: RasterImage, img2: RasterImage, params: DetectionParams | None = None
) -> tuple[ChangeMask, DetectionReport]:
    """Run the full detection pipeline on two equally sized images.

    Both images are collapsed to scalar fields and quantized into
    ``params.bins`` codes; pixels sharing the joint (before, after) code
    are indiscernible. The candidate changed set is cut from the absolute
    difference field per ``params.rule``, approximated over that
    partition, and each pixel is marked changed when the fraction of its
    class inside the candidate set reaches ``params.threshold``.
    """
    params = params or DetectionParams()
    if img1.pixels.shape[:2] != img2.pixels.shape[:2]:
        raise DimensionMismatchError(
            f"image dimensions differ: {img1.width}x{img1.height} vs {img2.width}x{img2.height}"
        )
    scalar1 = transform_to_scalar(img1)
    scalar2 = transform_to_scalar(img2)
    codes = np.column_stack(
        [quantize(scalar1, params.bins).reshape(-1), quantize(scalar2, params.bins).reshape(-1)]
    )
    system = InformationSystem(codes, (params.bins, params.bins))
    partition = induce_partition(system, (0, 1))

    diff = abs_difference(scalar1, scalar2)
    candidate, t0 = candidate_change_set(diff, params.rule)
    approx = approximate(partition, candidate.reshape(-1))
    scores = rough_memberships(partition, candidate.reshape(-1))

    if params.threshold == 0.0:
        warnings.warn(
            "threshold 0 marks every pixel changed; use a value in (0, 1]",
            RuntimeWarning,
            stacklevel=2,
        )
    mask = ChangeMask((scores >= params.threshold).reshape(diff.values.shape))
    report = DetectionReport(
        global_accuracy=approx.accuracy,
        changed_count=mask.changed_count,
        lower_count=approx.lower_count,
        upper_count=approx.upper_count,
        candidate_t0=t0,
        params=params,
    )
    return mask, report


def save_mask(mask: ChangeMask, dest: str | Path) -> None:
    """Write a mask as 8-bit grayscale PNG or PGM: changed 255, unchanged 0."""
    dest = Path(dest)
    if dest.suffix.lower() not in (".png", ".pgm"):
        raise ValueError(f"masks are written as .png or .pgm, got {dest.suffix!r}")
    save_image(mask.to_image(), dest)


def load_mask(source: str | Path) -> ChangeMask:
    """Read a mask image back to flags; values >= 128 count as changed."""
    image = load_image(source)
    pixels = image.pixels if image.channels == 1 else image.pixels.max(axis=2)
    return ChangeMask(pixels >= 128)
