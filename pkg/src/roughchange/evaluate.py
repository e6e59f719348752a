"""Ground-truth metrics and a seeded synthetic image-pair generator.

The generator paints a rectangular patch over a flat background and adds
independent clamped uniform noise to both frames, so a pipeline can be
validated end-to-end without any external data. Changed is the positive
class throughout, matching the white-pixel mask convention.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .detector import ChangeMask
from .errors import DimensionMismatchError
from .imaging import RasterImage

__all__ = ["Metrics", "SynthSpec", "compare_masks", "synth_pair"]


@dataclass(frozen=True)
class Metrics:
    """Confusion-matrix summary of a predicted mask against ground truth."""

    true_positives: int
    false_positives: int
    false_negatives: int
    true_negatives: int

    @property
    def total(self) -> int:
        return (
            self.true_positives + self.false_positives + self.false_negatives + self.true_negatives
        )

    @property
    def total_error_rate(self) -> float:
        return (self.false_positives + self.false_negatives) / self.total

    @property
    def precision(self) -> float:
        denom = self.true_positives + self.false_positives
        return self.true_positives / denom if denom else 0.0

    @property
    def recall(self) -> float:
        denom = self.true_positives + self.false_negatives
        return self.true_positives / denom if denom else 0.0

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 2.0 * p * r / (p + r) if p + r > 0 else 0.0

    def to_json_dict(self) -> dict:
        return {
            "true_positives": self.true_positives,
            "false_positives": self.false_positives,
            "false_negatives": self.false_negatives,
            "true_negatives": self.true_negatives,
            "total_error_rate": self.total_error_rate,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
        }

    def to_json(self) -> str:
        return json.dumps({"eval": self.to_json_dict()}, indent=2)


def compare_masks(pred: ChangeMask, truth: ChangeMask) -> Metrics:
    """Count the confusion matrix of ``pred`` against ``truth``."""
    if pred.flags.shape != truth.flags.shape:
        raise DimensionMismatchError(
            f"mask dimensions differ: {pred.width}x{pred.height} vs {truth.width}x{truth.height}"
        )
    p, t = pred.flags, truth.flags
    return Metrics(
        true_positives=int(np.count_nonzero(p & t)),
        false_positives=int(np.count_nonzero(p & ~t)),
        false_negatives=int(np.count_nonzero(~p & t)),
        true_negatives=int(np.count_nonzero(~p & ~t)),
    )


def _rgb(value) -> tuple[int, int, int]:
    rgb = tuple(int(v) for v in value)
    if len(rgb) != 3 or any(not 0 <= v <= 255 for v in rgb):
        raise ValueError(f"colors are 8-bit RGB triples, got {value!r}")
    return rgb


@dataclass(frozen=True)
class SynthSpec:
    """Recipe for a deterministic synthetic before/after pair."""

    width: int
    height: int
    patch_rect: tuple[int, int, int, int]  # x, y, w, h
    background_rgb: tuple[int, int, int] = (0, 0, 0)
    patch_rgb: tuple[int, int, int] = (255, 255, 255)
    noise_amplitude: int = 0
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "width", int(self.width))
        object.__setattr__(self, "height", int(self.height))
        object.__setattr__(self, "noise_amplitude", int(self.noise_amplitude))
        object.__setattr__(self, "seed", int(self.seed))
        object.__setattr__(self, "background_rgb", _rgb(self.background_rgb))
        object.__setattr__(self, "patch_rgb", _rgb(self.patch_rgb))
        if self.width < 1 or self.height < 1:
            raise ValueError("image must be at least 1x1")
        rect = tuple(int(v) for v in self.patch_rect)
        if len(rect) != 4:
            raise ValueError("patch_rect is (x, y, w, h)")
        x, y, w, h = rect
        if w < 1 or h < 1 or x < 0 or y < 0 or x + w > self.width or y + h > self.height:
            raise ValueError(f"patch rect {rect} does not fit inside {self.width}x{self.height}")
        object.__setattr__(self, "patch_rect", rect)
        if self.noise_amplitude < 0:
            raise ValueError("noise amplitude cannot be negative")


def _noisy(base: np.ndarray, amplitude: int, rng: np.random.Generator) -> np.ndarray:
    noise = rng.integers(-amplitude, amplitude + 1, size=base.shape, dtype=np.int64)
    return np.clip(base.astype(np.int64) + noise, 0, 255).astype(np.uint8)


def synth_pair(spec: SynthSpec) -> tuple[RasterImage, RasterImage, ChangeMask]:
    """Generate (before, after, truth): the after frame carries the patch.

    Identical specs produce bit-identical triples; noise is drawn from a
    generator seeded with ``spec.seed`` and clamped to [0, 255].
    """
    rng = np.random.default_rng(spec.seed)
    x, y, w, h = spec.patch_rect
    before = np.empty((spec.height, spec.width, 3), dtype=np.uint8)
    before[:] = spec.background_rgb
    after = before.copy()
    after[y : y + h, x : x + w] = spec.patch_rgb
    truth = np.zeros((spec.height, spec.width), dtype=bool)
    truth[y : y + h, x : x + w] = True
    return (
        RasterImage(_noisy(before, spec.noise_amplitude, rng)),
        RasterImage(_noisy(after, spec.noise_amplitude, rng)),
        ChangeMask(truth),
    )
