"""Discrete and continuous generalized EMD.

Three independent routes to the same number:

* :func:`discrete_emd` streams the columns of the stacked RSK words;
* :func:`greedy_joint` fills a plan by the d-dimensional northwest corner rule;
* :func:`brute_force_emd` minimizes over *every* integer plan.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .core import (
    BinShape,
    CapacityError,
    Composition,
    DataError,
    DegenerateShapeError,
    MassMismatchError,
    MultiIndex,
    ShapeMismatchError,
    cost,
)

DEFAULT_SEARCH_BUDGET = 10**6


@dataclass(frozen=True)
class DistTuple:
    """A d-tuple of compositions sharing one total mass."""

    members: tuple[Composition, ...]

    def __post_init__(self):
        members = tuple(
            m if isinstance(m, Composition) else Composition(tuple(m)) for m in self.members
        )
        object.__setattr__(self, "members", members)
        if not members:
            raise DataError("a distribution tuple needs at least one member")
        masses = {m.mass for m in members}
        if len(masses) != 1:
            raise MassMismatchError(f"members have different masses: {[m.mass for m in members]}")

    @classmethod
    def of(cls, *members: Sequence[int]) -> "DistTuple":
        return cls(tuple(Composition(tuple(m)) for m in members))

    @property
    def d(self) -> int:
        return len(self.members)

    @property
    def mass(self) -> int:
        return self.members[0].mass

    @property
    def shape(self) -> BinShape:
        return BinShape(tuple(m.n for m in self.members))

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)


def _as_tuple(t) -> DistTuple:
    if isinstance(t, DistTuple):
        return t
    return DistTuple(tuple(t))


@dataclass(frozen=True)
class WordMatrix:
    rows: tuple[tuple[int, ...], ...]

    @property
    def s(self) -> int:
        return len(self.rows[0])

    def columns(self) -> Iterator[MultiIndex]:
        return zip(*self.rows)


@dataclass(frozen=True)
class JointArray:
    """Sparse integer transport plan: distinct cells with positive weights."""

    shape: BinShape
    support: tuple[tuple[MultiIndex, int], ...]

    def __post_init__(self):
        cells = [m for m, _ in self.support]
        if len(set(cells)) != len(cells):
            raise DataError("support cells must be distinct")
        for m, w in self.support:
            if w <= 0:
                raise DataError(f"nonpositive weight {w} at {m}")
            if not self.shape.contains(m):
                raise DataError(f"cell {m} outside shape {self.shape.sizes}")

    @classmethod
    def from_counts(cls, shape: BinShape, counts) -> "JointArray":
        return cls(shape, tuple(sorted((tuple(m), int(w)) for m, w in counts.items() if w)))

    @property
    def mass(self) -> int:
        return sum(w for _, w in self.support)

    def as_dict(self) -> dict[MultiIndex, int]:
        return dict(self.support)

    def marginals(self) -> tuple[tuple[int, ...], ...]:
        out = [[0] * n for n in self.shape.sizes]
        for m, w in self.support:
            for i, k in enumerate(m):
                out[i][k - 1] += w
        return tuple(tuple(row) for row in out)

    def satisfies(self, t: DistTuple) -> bool:
        """True when the axis sums reproduce every member of ``t``."""
        t = _as_tuple(t)
        return self.shape == t.shape and self.marginals() == tuple(m.bins for m in t)

    def is_chain(self) -> bool:
        cells = sorted(m for m, _ in self.support)
        return all(
            all(a <= b for a, b in zip(p, q)) for p, q in zip(cells, cells[1:])
        )

    def dense(self):
        """0-based numpy view, for display."""
        import numpy as np

        arr = np.zeros(self.shape.sizes, dtype=np.int64)
        for m, w in self.support:
            arr[tuple(x - 1 for x in m)] = w
        return arr


def rsk_word(mu) -> tuple[int, ...]:
    """One-row tableau of ``mu``: bin ``k`` repeated ``mu(k)`` times."""
    return tuple(k for k, c in enumerate(mu, start=1) for _ in range(c))


def word_matrix(t) -> WordMatrix:
    t = _as_tuple(t)
    return WordMatrix(tuple(rsk_word(m) for m in t))


def rsk_joint(t) -> JointArray:
    t = _as_tuple(t)
    return JointArray.from_counts(t.shape, Counter(word_matrix(t).columns()))


def _column_runs(t: DistTuple) -> Iterator[tuple[MultiIndex, int]]:
    """Distinct columns of the word matrix with their multiplicities, in order.

    Walks one pointer per member; never materializes the words.
    """
    bins = [m.bins for m in t]
    pos = [0] * t.d
    left = [0] * t.d
    for i, b in enumerate(bins):
        while pos[i] < len(b) and b[pos[i]] == 0:
            pos[i] += 1
        if pos[i] < len(b):
            left[i] = b[pos[i]]
    remaining = t.mass
    while remaining:
        w = min(left)
        yield tuple(p + 1 for p in pos), w
        remaining -= w
        for i, b in enumerate(bins):
            left[i] -= w
            if left[i] == 0 and remaining:
                pos[i] += 1
                while b[pos[i]] == 0:
                    pos[i] += 1
                left[i] = b[pos[i]]


def total_cost(j: JointArray) -> int:
    return sum(cost(m) * w for m, w in j.support)


def discrete_emd(t) -> int:
    """Sum of the diagonal cost over the columns of the stacked RSK words."""
    t = _as_tuple(t)
    return sum(cost(col) * w for col, w in _column_runs(t))


def greedy_joint(t) -> JointArray:
    """Northwest corner rule in d dimensions.

    Repeatedly saturates the cell formed by every axis's lowest bin with
    supply left, then advances each axis whose bin ran dry.
    """
    t = _as_tuple(t)
    supply = [list(m.bins) for m in t]
    n = t.shape.sizes
    p = [0] * t.d
    plan: dict[MultiIndex, int] = {}

    def skip_empty(i):
        while p[i] < n[i] and supply[i][p[i]] == 0:
            p[i] += 1

    for i in range(t.d):
        skip_empty(i)
    while all(p[i] < n[i] for i in range(t.d)):
        w = min(supply[i][p[i]] for i in range(t.d))
        cell = tuple(x + 1 for x in p)
        plan[cell] = plan.get(cell, 0) + w
        for i in range(t.d):
            supply[i][p[i]] -= w
        for i in range(t.d):
            skip_empty(i)
    return JointArray.from_counts(t.shape, plan)


def brute_force_emd(t, budget: int = DEFAULT_SEARCH_BUDGET) -> int:
    """Exact minimum of the total cost over all nonnegative integer plans.

    Depth-first search on residual marginals: the lowest bin of axis 1 with
    mass left must be covered by some cell, so branch over the cells through
    it whose other coordinates still have mass, and memoize on the residual.
    ``budget`` bounds the number of residual states that can ever arise.
    """
    t = _as_tuple(t)
    states = math.prod(c + 1 for m in t for c in m.bins)
    if states > budget:
        raise CapacityError(
            f"brute force would visit up to {states} residual states (budget {budget})"
        )
    memo: dict[tuple[tuple[int, ...], ...], int] = {}

    def best(res: tuple[tuple[int, ...], ...]) -> int:
        if not any(res[0]):
            return 0
        hit = memo.get(res)
        if hit is not None:
            return hit
        k0 = next(k for k, c in enumerate(res[0]) if c)
        choices = [[k for k, c in enumerate(r) if c] for r in res[1:]]
        value = None
        for rest in itertools.product(*choices):
            cell = (k0,) + rest
            # one unit at a time
            nxt = tuple(
                r[:k] + (r[k] - 1,) + r[k + 1:] for r, k in zip(res, cell)
            )
            c = cost(cell) + best(nxt)
            if value is None or c < value:
                value = c
        memo[res] = value
        return value

    return best(tuple(m.bins for m in t))


def pairwise_emd_sum(t) -> int:
    t = _as_tuple(t)
    if t.d != 3:
        raise DataError(f"pairwise sum identity needs exactly 3 members, got {t.d}")
    return sum(discrete_emd(DistTuple((a, b))) for a, b in itertools.combinations(t.members, 2))


def max_emd(d: int, n: int) -> int:
    """Largest possible EMD per unit of mass for d distributions on n bins."""
    return (d // 2) * (n - 1)


def continuous_emd(t) -> Fraction:
    t = _as_tuple(t)
    if t.mass < 1:
        raise DataError("continuous EMD needs positive mass")
    return Fraction(discrete_emd(t), t.mass)


def unit_normalized_emd(t) -> Fraction:
    t = _as_tuple(t)
    sizes = set(t.shape.sizes)
    if len(sizes) != 1:
        raise ShapeMismatchError(f"members have different bin counts: {t.shape.sizes}")
    (n,) = sizes
    value = continuous_emd(t)
    top = max_emd(t.d, n)
    if top == 0:
        if value:
            raise DegenerateShapeError("nonzero EMD with zero maximum")
        return Fraction(0)
    return value / top
