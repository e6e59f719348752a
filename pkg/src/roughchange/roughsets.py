"""Rough-set engine over finite discrete information systems.

Elements are integer-indexed; attribute values are pre-discretized
non-negative codes. Element sets are boolean membership arrays over the
universe so set algebra stays bulk numpy work. All types are immutable
after construction and every operation is a pure function, so values can
be shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "InformationSystem",
    "Partition",
    "RoughApproximation",
    "induce_partition",
    "approximate",
    "pawlak_accuracy",
    "rough_membership",
    "rough_memberships",
]


def _own(arr, dtype) -> np.ndarray:
    """Private, read-only copy of an array-like."""
    out = np.array(arr, dtype=dtype, order="C", copy=True)
    out.flags.writeable = False
    return out


@dataclass(frozen=True, eq=False)
class InformationSystem:
    """A finite universe of elements, each described by discrete attribute codes.

    ``values`` holds one row per element and one column per attribute;
    ``domains[a]`` is the exclusive upper bound of attribute ``a``'s codes.
    """

    values: np.ndarray
    domains: np.ndarray

    def __post_init__(self):
        values = _own(self.values, np.int64)
        domains = _own(self.domains, np.int64)
        if values.ndim != 2:
            raise ValueError("values must be a 2-D (elements x attributes) array")
        if domains.ndim != 1 or domains.shape[0] != values.shape[1]:
            raise ValueError("domains must give one bound per attribute")
        if np.any(domains < 1):
            raise ValueError("attribute domains must be at least 1")
        if values.size and (values.min() < 0 or np.any(values >= domains)):
            raise ValueError("attribute codes must lie in [0, domains[a])")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "domains", domains)

    @property
    def universe_size(self) -> int:
        return self.values.shape[0]

    @property
    def attribute_count(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True, eq=False)
class Partition:
    """Grouping of the universe into non-empty equivalence classes.

    Class ids are dense in ``[0, class_count)`` and, when produced by
    :func:`induce_partition`, assigned in first-occurrence order so
    identical inputs always yield identical labellings.
    """

    class_of: np.ndarray
    class_count: int
    class_sizes: np.ndarray

    def __post_init__(self):
        class_of = _own(self.class_of, np.int64)
        sizes = _own(self.class_sizes, np.int64)
        object.__setattr__(self, "class_of", class_of)
        object.__setattr__(self, "class_sizes", sizes)
        if class_of.ndim != 1:
            raise ValueError("class_of must be a 1-D array")
        if class_of.size == 0 or self.class_count < 1:
            raise ValueError("partition needs a non-empty universe")
        if class_of.min() < 0 or class_of.max() >= self.class_count:
            raise ValueError("class ids must lie in [0, class_count)")
        counted = np.bincount(class_of, minlength=self.class_count)
        if np.any(counted < 1):
            raise ValueError("every class must be non-empty")
        if not np.array_equal(counted, sizes):
            raise ValueError("class_sizes disagree with class_of")

    @classmethod
    def from_labels(cls, class_of: Sequence[int] | np.ndarray) -> "Partition":
        """Build a partition from a dense class-id array, computing sizes."""
        class_of = np.asarray(class_of, dtype=np.int64)
        if class_of.size == 0:
            raise ValueError("partition needs a non-empty universe")
        count = int(class_of.max()) + 1
        return cls(class_of, count, np.bincount(class_of, minlength=count))

    @property
    def universe_size(self) -> int:
        return self.class_of.shape[0]


@dataclass(frozen=True, eq=False)
class RoughApproximation:
    """Lower/upper/boundary membership of a target set, plus its accuracy."""

    target: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    boundary: np.ndarray
    accuracy: float

    def __post_init__(self):
        for name in ("target", "lower", "upper", "boundary"):
            object.__setattr__(self, name, _own(getattr(self, name), bool))

    @property
    def lower_count(self) -> int:
        return int(np.count_nonzero(self.lower))

    @property
    def upper_count(self) -> int:
        return int(np.count_nonzero(self.upper))


def _check_target(partition: Partition, target) -> np.ndarray:
    target = np.asarray(target, dtype=bool)
    if target.shape != (partition.universe_size,):
        raise ValueError(
            f"target flags have shape {target.shape}, expected ({partition.universe_size},)"
        )
    return target


def induce_partition(system: InformationSystem, attrs: Iterable[int]) -> Partition:
    """Partition the universe by indiscernibility on the given attributes.

    Two elements share a class exactly when their code vectors restricted
    to ``attrs`` are identical. Class ids follow first occurrence in row
    order.
    """
    attr_list = sorted(set(int(a) for a in attrs))
    if not attr_list:
        raise ValueError("attribute subset must be non-empty")
    if attr_list[0] < 0 or attr_list[-1] >= system.attribute_count:
        raise ValueError(f"attribute index out of range [0, {system.attribute_count})")
    if system.universe_size < 1:
        raise ValueError("cannot partition an empty universe")

    codes = system.values[:, attr_list]
    _, first, inverse = np.unique(codes, axis=0, return_index=True, return_inverse=True)
    inverse = inverse.reshape(-1)
    # np.unique orders classes lexicographically; relabel by first occurrence.
    order = np.argsort(first, kind="stable")
    rank = np.empty_like(order)
    rank[order] = np.arange(order.size)
    class_of = rank[inverse]
    return Partition(class_of, int(order.size), np.bincount(class_of, minlength=order.size))


def pawlak_accuracy(lower_size: int, upper_size: int) -> float:
    """Crispness ratio |lower| / |upper|, with the empty set counted as crisp."""
    if lower_size < 0 or upper_size < 0:
        raise ValueError("set sizes cannot be negative")
    if lower_size > upper_size:
        raise ValueError(f"lower size {lower_size} exceeds upper size {upper_size}")
    if upper_size == 0:
        return 1.0
    return lower_size / upper_size


def approximate(partition: Partition, target) -> RoughApproximation:
    """Compute lower/upper/boundary approximations of a target element set.

    The lower approximation unions the classes fully inside the target,
    the upper those merely intersecting it.
    """
    target = _check_target(partition, target)
    hits = np.bincount(partition.class_of[target], minlength=partition.class_count)
    lower = (hits == partition.class_sizes)[partition.class_of]
    upper = (hits > 0)[partition.class_of]
    boundary = upper & ~lower
    accuracy = pawlak_accuracy(int(np.count_nonzero(lower)), int(np.count_nonzero(upper)))
    return RoughApproximation(target, lower, upper, boundary, accuracy)


def rough_memberships(partition: Partition, target) -> np.ndarray:
    """Per-element fraction of each element's class that lies in the target."""
    target = _check_target(partition, target)
    hits = np.bincount(partition.class_of[target], minlength=partition.class_count)
    return hits[partition.class_of] / partition.class_sizes[partition.class_of]


def rough_membership(partition: Partition, target, element: int) -> float:
    """Fraction of ``element``'s equivalence class that lies in the target.

    Equals 1 exactly when the class is contained in the target and 0
    exactly when it is disjoint from it.
    """
    element = int(element)
    if not 0 <= element < partition.universe_size:
        raise ValueError(f"element {element} outside universe of size {partition.universe_size}")
    target = _check_target(partition, target)
    members = partition.class_of == partition.class_of[element]
    return int(np.count_nonzero(target & members)) / int(np.count_nonzero(members))
