"""Compositions, multi-indices, the diagonal cost function and Monge checks.

Every public interface speaks 1-based coordinates: a multi-index ``m`` lives
in ``[n_1] x ... x [n_d]`` with ``[n] = {1, ..., n}``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

DEFAULT_DENSE_CAP = 10**7

MultiIndex = tuple[int, ...]


class GemdError(Exception):
    """Base class for all library errors."""


class CapacityError(GemdError):
    """An instance is larger than the configured budget."""


class DataError(GemdError):
    """Input data violates a structural requirement."""


class MassMismatchError(DataError):
    pass


class ShapeMismatchError(DataError):
    pass


class DegenerateShapeError(DataError):
    pass


@dataclass(frozen=True)
class Composition:
    """A histogram: nonnegative integer counts over bins ``1..n``."""

    bins: tuple[int, ...]

    def __post_init__(self):
        bins = tuple(int(b) for b in self.bins)
        object.__setattr__(self, "bins", bins)
        if len(bins) < 1:
            raise DataError("a composition needs at least one bin")
        if any(b < 0 for b in bins):
            raise DataError(f"negative bin count in {bins}")

    @property
    def mass(self) -> int:
        return sum(self.bins)

    @property
    def n(self) -> int:
        return len(self.bins)

    def __len__(self):
        return len(self.bins)

    def __iter__(self):
        return iter(self.bins)

    def __getitem__(self, k: int) -> int:
        """Count in bin ``k`` (1-based)."""
        if not 1 <= k <= len(self.bins):
            raise IndexError(k)
        return self.bins[k - 1]


@dataclass(frozen=True)
class BinShape:
    sizes: tuple[int, ...]

    def __post_init__(self):
        sizes = tuple(int(n) for n in self.sizes)
        object.__setattr__(self, "sizes", sizes)
        if not sizes:
            raise DataError("a shape needs at least one axis")
        if any(n < 1 for n in sizes):
            raise DataError(f"bin counts must be positive: {sizes}")

    @classmethod
    def uniform(cls, d: int, n: int) -> "BinShape":
        return cls((n,) * d)

    @property
    def d(self) -> int:
        return len(self.sizes)

    @property
    def total(self) -> int:
        return sum(self.sizes)

    @property
    def cells(self) -> int:
        return math.prod(self.sizes)

    def indices(self) -> Iterator[MultiIndex]:
        """All multi-indices in lexicographic order."""
        return itertools.product(*(range(1, n + 1) for n in self.sizes))

    def contains(self, m: Sequence[int]) -> bool:
        return len(m) == self.d and all(1 <= x <= n for x, n in zip(m, self.sizes))


def as_shape(shape) -> BinShape:
    return shape if isinstance(shape, BinShape) else BinShape(tuple(shape))


def sort_coords(m: Iterable[int]) -> MultiIndex:
    return tuple(sorted(m))


def cost_min_form(m: Sequence[int]) -> int:
    """Taxicab distance to the main diagonal, by minimizing over the anchor coordinate.

    Quadratic in ``d``; kept as a reference for :func:`cost_sorted_form`.
    """
    return min(sum(abs(mi - mj) for mj in m) for mi in m)


def cost_sorted_form(m: Sequence[int]) -> int:
    """Diagonal cost: sum of outside-in differences of the sorted coordinates."""
    t = sorted(m)
    d = len(t)
    return sum(t[d - 1 - i] - t[i] for i in range(d // 2))


cost = cost_sorted_form


def cost_range(m: Sequence[int]) -> int:
    """``max(m) - min(m)``; an alternative cost, not used for EMD."""
    return max(m) - min(m)


def cost_increment_case(m: Sequence[int], i: int) -> int:
    """Change in cost when coordinate ``i`` (1-based) of ``m`` is increased by one.

    Decided from the rank of ``m_i`` among the sorted coordinates, without
    recomputing the cost.
    """
    d = len(m)
    if not 1 <= i <= d:
        raise IndexError(i)
    if d == 1:
        return 0
    t = sorted(m)
    big = (d + 1) // 2 + 1  # 1-based position just above the median
    mi = m[i - 1]
    if mi >= t[big - 1]:
        return 1
    if d % 2 == 0 or mi < t[big - 2]:
        return -1
    return 0


@dataclass(frozen=True)
class CostArray:
    """Dense integer array over a :class:`BinShape` (stored 0-based)."""

    shape: BinShape
    entries: np.ndarray

    def __post_init__(self):
        entries = np.asarray(self.entries)
        if entries.shape != self.shape.sizes:
            raise ShapeMismatchError(
                f"entries have shape {entries.shape}, expected {self.shape.sizes}"
            )
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_nested(cls, rows) -> "CostArray":
        arr = np.asarray(rows, dtype=np.int64)
        return cls(BinShape(arr.shape), arr)

    def __getitem__(self, m: Sequence[int]):
        return self.entries[tuple(x - 1 for x in m)]


def build_cost_array(shape, cap: int = DEFAULT_DENSE_CAP) -> CostArray:
    shape = as_shape(shape)
    if shape.cells > cap:
        raise CapacityError(f"{shape.cells} cells exceed the dense cap of {cap}")
    # sort every index along the last axis, then take outside-in differences
    grids = np.meshgrid(*(np.arange(1, n + 1) for n in shape.sizes), indexing="ij")
    pts = np.sort(np.stack(grids, axis=-1), axis=-1)
    d = shape.d
    entries = np.zeros(shape.sizes, dtype=np.int64)
    for i in range(d // 2):
        entries += pts[..., d - 1 - i] - pts[..., i]
    return CostArray(shape, entries)


@dataclass(frozen=True)
class MongeResult:
    holds: bool
    witness: tuple[MultiIndex, MultiIndex] | None = None

    def __bool__(self):
        return self.holds


def monge_check_full(a: CostArray) -> MongeResult:
    """Check ``A(x ^ y) + A(x v y) <= A(x) + A(y)`` over every pair of cells.

    Quadratic in the number of cells.
    """
    vals = a.entries.reshape(-1)
    idx = np.array(list(np.ndindex(*a.shape.sizes)), dtype=np.int64).reshape(-1, a.shape.d)
    strides = np.array([math.prod(a.shape.sizes[k + 1:]) for k in range(a.shape.d)])
    for p in range(len(idx) - 1):
        x = idx[p]
        ys = idx[p + 1:]
        lo = np.minimum(x, ys) @ strides
        hi = np.maximum(x, ys) @ strides
        bad = vals[lo] + vals[hi] > vals[p] + vals[p + 1:]
        if bad.any():
            q = int(np.argmax(bad))
            return MongeResult(False, (_one_based(x), _one_based(ys[q])))
    return MongeResult(True)


def monge_check_planes(a: CostArray) -> MongeResult:
    """Check the adjacent 2x2 condition in every axis-parallel plane."""
    e = a.entries
    d = a.shape.d
    for i, j in itertools.combinations(range(d), 2):
        # mixed second difference must be <= 0
        mixed = np.diff(np.diff(e, axis=i), axis=j)
        bad = np.argwhere(mixed > 0)
        if len(bad):
            base = bad[0]
            x = base.copy()
            y = base.copy()
            x[j] += 1
            y[i] += 1
            return MongeResult(False, (_one_based(x), _one_based(y)))
    return MongeResult(True)


def _one_based(v) -> MultiIndex:
    return tuple(int(c) + 1 for c in v)
