"""Comparison detectors over the scalar difference field.

Hard and fuzzy 2-means run on the 1-D difference values with
deterministic min/max center initialization (no restarts needed for two
clusters on a line); the higher-center cluster is reported as changed.
``threshold_diff_detect`` is a plain fixed-cutoff differencing detector,
an intentionally simple stand-in for intensity-based methods.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .detector import ChangeMask
from .imaging import SCALAR_MAX, ScalarField

__all__ = [
    "ClusterModel",
    "run_hcm",
    "run_fcm",
    "hcm_detect",
    "fcm_detect",
    "threshold_diff_detect",
]


@dataclass(frozen=True, eq=False)
class ClusterModel:
    """Result of a 2-cluster run on 1-D data.

    ``memberships`` is None for hard clustering; ``objective_history``
    records the objective once per iteration (within-cluster sum of
    squares for HCM, the weighted J for FCM) and is non-increasing.
    """

    centers: np.ndarray
    assignment: np.ndarray
    memberships: np.ndarray | None
    iterations_run: int
    converged: bool
    objective_history: tuple[float, ...]

    @property
    def changed_cluster(self) -> int:
        return int(np.argmax(self.centers))


def _validate_loop_params(max_iter: int, tol: float) -> tuple[int, float]:
    max_iter = int(max_iter)
    tol = float(tol)
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    if tol <= 0:
        raise ValueError("tol must be positive")
    return max_iter, tol


def _degenerate(values: np.ndarray, fuzzy: bool) -> ClusterModel:
    n = values.size
    memberships = None
    if fuzzy:
        memberships = np.zeros((n, 2))
        memberships[:, 0] = 1.0
    return ClusterModel(
        centers=np.array([float(values[0]), float(values[0])]),
        assignment=np.zeros(n, dtype=np.int64),
        memberships=memberships,
        iterations_run=0,
        converged=True,
        objective_history=(),
    )


def run_hcm(values: np.ndarray, max_iter: int = 100, tol: float = 1e-4) -> ClusterModel:
    """2-means on flat 1-D data, centers initialized at min and max."""
    values = np.asarray(values, dtype=np.float64).reshape(-1)
    if values.size == 0:
        raise ValueError("cannot cluster an empty field")
    max_iter, tol = _validate_loop_params(max_iter, tol)
    lo, hi = float(values.min()), float(values.max())
    if lo == hi:
        return _degenerate(values, fuzzy=False)

    centers = np.array([lo, hi])
    assignment = np.zeros(values.size, dtype=np.int64)
    history: list[float] = []
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        dist = np.abs(values[:, None] - centers[None, :])
        assignment = np.argmin(dist, axis=1)  # ties go to the lower center
        history.append(float(np.sum((values - centers[assignment]) ** 2)))
        # min/max init keeps both clusters non-empty on non-constant data
        new_centers = np.array(
            [values[assignment == 0].mean(), values[assignment == 1].mean()]
        )
        movement = float(np.max(np.abs(new_centers - centers)))
        centers = new_centers
        if movement < tol:
            converged = True
            break
    return ClusterModel(centers, assignment, None, iterations, converged, tuple(history))


def run_fcm(
    values: np.ndarray, fuzzifier: float = 2.0, max_iter: int = 100, tol: float = 1e-4
) -> ClusterModel:
    """Fuzzy 2-means on flat 1-D data with inverse-distance memberships.

    Membership weights use the power 2/(m-1); a value coincident with a
    center gets membership exactly 1 for it. Defuzzification is by the
    larger membership, ties to the lower center.
    """
    values = np.asarray(values, dtype=np.float64).reshape(-1)
    if values.size == 0:
        raise ValueError("cannot cluster an empty field")
    fuzzifier = float(fuzzifier)
    if fuzzifier <= 1.0:
        raise ValueError("fuzzifier must exceed 1")
    max_iter, tol = _validate_loop_params(max_iter, tol)
    lo, hi = float(values.min()), float(values.max())
    if lo == hi:
        return _degenerate(values, fuzzy=True)

    centers = np.array([lo, hi])
    memberships = np.zeros((values.size, 2))
    history: list[float] = []
    converged = False
    iterations = 0
    power = 2.0 / (fuzzifier - 1.0)
    for iterations in range(1, max_iter + 1):
        dist = np.abs(values[:, None] - centers[None, :])
        # ratio form of the inverse-distance update: exact 0/1 memberships
        # for points on a center, no overflow for points merely near one
        with np.errstate(divide="ignore", over="ignore"):
            u0 = 1.0 / (1.0 + (dist[:, 0] / dist[:, 1]) ** power)
        memberships = np.stack([u0, 1.0 - u0], axis=1)
        history.append(float(np.sum(memberships**fuzzifier * dist**2)))
        weights = memberships**fuzzifier
        new_centers = (weights * values[:, None]).sum(axis=0) / weights.sum(axis=0)
        movement = float(np.max(np.abs(new_centers - centers)))
        centers = new_centers
        if movement < tol or centers[0] == centers[1]:
            converged = True
            break
    assignment = np.argmax(memberships, axis=1)
    return ClusterModel(centers, assignment, memberships, iterations, converged, tuple(history))


def _mask_from_model(model: ClusterModel, shape: tuple[int, int]) -> ChangeMask:
    if model.centers[0] == model.centers[1]:
        return ChangeMask(np.zeros(shape, dtype=bool))
    return ChangeMask((model.assignment == model.changed_cluster).reshape(shape))


def hcm_detect(diff: ScalarField, max_iter: int = 100, tol: float = 1e-4) -> ChangeMask:
    """Hard 2-means change mask; the higher-center cluster is changed."""
    model = run_hcm(diff.values.reshape(-1), max_iter, tol)
    return _mask_from_model(model, diff.values.shape)


def fcm_detect(
    diff: ScalarField, fuzzifier: float = 2.0, max_iter: int = 100, tol: float = 1e-4
) -> ChangeMask:
    """Fuzzy 2-means change mask; defuzzified by the larger membership."""
    model = run_fcm(diff.values.reshape(-1), fuzzifier, max_iter, tol)
    return _mask_from_model(model, diff.values.shape)


def threshold_diff_detect(diff: ScalarField, t0: int) -> ChangeMask:
    """Mark changed exactly the pixels with difference >= t0."""
    t0 = int(t0)
    if not 0 <= t0 <= SCALAR_MAX:
        raise ValueError(f"cutoff must lie in [0, {SCALAR_MAX}]")
    return ChangeMask(diff.values >= t0)
