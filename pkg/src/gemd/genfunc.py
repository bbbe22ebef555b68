"""Exact generating functions for the distribution of discrete EMD values.

For a bin shape ``n = (n_1, ..., n_d)``:

* ``H_n(z, t)`` counts d-tuples of compositions by mass (``t``) and EMD (``z``);
* ``H_n(1, t) = W_n(t) / (1 - t)^(|n| - d + 1)`` with ``W_n`` the Simon Newcomb
  polynomial;
* ``dH_n/dz at z=1 = N_n(t) / (1 - t)^(|n| - d + 2)`` sums EMD values by mass.

All arithmetic is exact (``int`` / ``Fraction``).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .core import CapacityError, DataError, DegenerateShapeError, cost

Shape = tuple[int, ...]

DEFAULT_SERIES_BUDGET = 10**7
MAX_SUBSET_DIM = 20


class RationalPoly:
    """Dense polynomial in ``t`` with exact rational coefficients.

    ``coeffs[i]`` is the coefficient of ``t**i``; trailing zeros are dropped.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = [Fraction(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(c)

    @classmethod
    def monomial(cls, k: int, c=1) -> "RationalPoly":
        return cls([0] * k + [c])

    @classmethod
    def one_minus_t_pow(cls, k: int) -> "RationalPoly":
        """``(1 - t)**k``."""
        return cls([(-1) ** j * math.comb(k, j) for j in range(k + 1)])

    @classmethod
    def t_minus_one_pow(cls, k: int) -> "RationalPoly":
        """``(t - 1)**k``."""
        return cls([(-1) ** (k - j) * math.comb(k, j) for j in range(k + 1)])

    @property
    def degree(self) -> int:
        """Degree; ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    def __getitem__(self, i: int) -> Fraction:
        """``[t^i]``; zero outside the stored range."""
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __eq__(self, other):
        if isinstance(other, RationalPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def __add__(self, other: "RationalPoly") -> "RationalPoly":
        k = max(len(self.coeffs), len(other.coeffs))
        return RationalPoly(self[i] + other[i] for i in range(k))

    def __neg__(self):
        return RationalPoly(-c for c in self.coeffs)

    def __sub__(self, other: "RationalPoly") -> "RationalPoly":
        return self + (-other)

    def __mul__(self, other) -> "RationalPoly":
        if not isinstance(other, RationalPoly):
            return RationalPoly(c * other for c in self.coeffs)
        if not self or not other:
            return RationalPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return RationalPoly(out)

    __rmul__ = __mul__

    def __call__(self, x) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def truncate(self, order: int) -> "RationalPoly":
        """Drop every term of degree above ``order``."""
        return RationalPoly(self.coeffs[: order + 1])

    def series_over_one_minus_t(self, k: int, s: int) -> Fraction:
        """``[t^s]`` of the power series ``self / (1 - t)**k``."""
        if k == 0:
            return self[s]
        return sum(
            (c * math.comb(s - i + k - 1, k - 1) for i, c in enumerate(self.coeffs) if i <= s),
            Fraction(0),
        )

    def is_palindromic(self) -> bool:
        return self.coeffs == self.coeffs[::-1]

    def is_unimodal(self) -> bool:
        c = self.coeffs
        peak = c.index(max(c)) if c else 0
        return all(a <= b for a, b in zip(c[:peak], c[1 : peak + 1])) and all(
            a >= b for a, b in zip(c[peak:], c[peak + 1 :])
        )

    def __repr__(self):
        return f"RationalPoly({[str(c) for c in self.coeffs]})"


def canonical(shape: Sequence[int]) -> Shape:
    shape = tuple(int(n) for n in shape)
    if not shape:
        raise DataError("empty shape")
    if any(n < 0 for n in shape):
        raise DataError(f"negative bin count in {shape}")
    return tuple(sorted(shape))


def _excess(shape: Shape) -> int:
    """``|n| - d``: the number of letters in the multiset ``{i^(n_i - 1)}``."""
    return sum(shape) - len(shape)


def _subsets(d: int):
    if d > MAX_SUBSET_DIM:
        raise CapacityError(f"subset recursion over d={d} axes exceeds the limit {MAX_SUBSET_DIM}")
    for r in range(1, d + 1):
        for a in itertools.combinations(range(d), r):
            yield a


def _minus(shape: Shape, axes) -> Shape:
    return tuple(n - 1 if i in axes else n for i, n in enumerate(shape))


def newcomb_coefficient(shape: Sequence[int], i: int) -> int:
    """Number of permutations of ``{1^(n_1-1), ..., d^(n_d-1)}`` with ``i`` descents."""
    shape = canonical(shape)
    if i < 0:
        raise DataError("descent count must be nonnegative")
    top = _excess(shape) + 1
    total = sum(
        (-1) ** j * math.comb(top, j) * math.prod(math.comb(i - j + n - 1, n - 1) for n in shape)
        for j in range(i + 1)
    )
    return total


def w_degree(shape: Sequence[int]) -> int:
    """Maximum descent count of the multiset ``{k^(n_k - 1)}``."""
    shape = canonical(shape)
    return _excess(shape) - (max(shape) - 1)


def w_poly(shape: Sequence[int]) -> RationalPoly:
    shape = canonical(shape)
    return RationalPoly(newcomb_coefficient(shape, i) for i in range(w_degree(shape) + 1))


def w_at_one(shape: Sequence[int]) -> int:
    """Multinomial count of the permutations of ``{k^(n_k - 1)}``."""
    shape = canonical(shape)
    return math.factorial(_excess(shape)) // math.prod(math.factorial(n - 1) for n in shape)


def h_coeff(shape: Sequence[int], s: int) -> int:
    """Number of d-tuples of compositions of ``s`` into the given bin counts."""
    shape = canonical(shape)
    return math.prod(math.comb(s + n - 1, n - 1) for n in shape)


_N_CACHE: dict[Shape, RationalPoly] = {}


def n_poly(shape: Sequence[int]) -> RationalPoly:
    """Numerator of the EMD-sum series over ``(1 - t)^(|n| - d + 2)``."""
    shape = canonical(shape)
    if min(shape) == 0 or max(shape) == 1:
        return RationalPoly()
    hit = _N_CACHE.get(shape)
    if hit is not None:
        return hit
    # fill the sublattice bottom-up so deep shapes never recurse
    for sub in sorted(_sublattice(shape), key=sum):
        if sub not in _N_CACHE:
            _N_CACHE[sub] = _n_poly_step(sub)
    return _N_CACHE[shape]


def _sublattice(shape: Shape):
    seen = set()
    for sub in itertools.product(*(range(1, n + 1) for n in shape)):
        c = tuple(sorted(sub))
        if c not in seen:
            seen.add(c)
            yield c


def _n_poly_step(shape: Shape) -> RationalPoly:
    if max(shape) == 1:
        return RationalPoly()
    acc = RationalPoly()
    for a in _subsets(len(shape)):
        sub = _minus(shape, a)
        if min(sub) == 0:
            continue
        prev = _N_CACHE.get(tuple(sorted(sub)))
        if prev is None:
            prev = n_poly(sub)
        if prev:
            acc = acc + RationalPoly.t_minus_one_pow(len(a) - 1) * prev
    return acc + RationalPoly.monomial(1, cost(shape)) * w_poly(shape)


def hprime_coeff(shape: Sequence[int], s: int) -> int:
    """Sum of discrete EMD over all d-tuples of compositions of ``s``."""
    shape = canonical(shape)
    if s < 0:
        raise DataError("mass must be nonnegative")
    value = n_poly(shape).series_over_one_minus_t(_excess(shape) + 2, s)
    assert value.denominator == 1
    return int(value)


def discrete_expected(shape: Sequence[int], s: int) -> Fraction:
    if s == 0:
        return Fraction(0)
    return Fraction(hprime_coeff(shape, s), h_coeff(shape, s))


_E_CACHE: dict[Shape, Fraction] = {}


def continuous_expected(shape: Sequence[int]) -> Fraction:
    """Expected EMD of uniformly random probability distributions on the given bins."""
    shape = canonical(shape)
    if min(shape) == 0 or max(shape) == 1:
        return Fraction(0)
    hit = _E_CACHE.get(shape)
    if hit is not None:
        return hit
    for sub in sorted(_sublattice(shape), key=sum):
        if sub in _E_CACHE or max(sub) == 1:
            continue
        acc = Fraction(cost(sub))
        for i, n in enumerate(sub):
            if n > 1:
                acc += (n - 1) * _E_CACHE.get(tuple(sorted(_minus(sub, (i,)))), Fraction(0))
        _E_CACHE[sub] = acc / (_excess(sub) + 1)
    return _E_CACHE[shape]


def unit_normalized_expected(d: int, n: int) -> Fraction:
    if d < 2 or n < 2:
        raise DegenerateShapeError(f"normalization needs d >= 2 and n >= 2, got d={d}, n={n}")
    return continuous_expected((n,) * d) / ((d // 2) * (n - 1))


@dataclass
class BivariateSeries:
    """``sum_r z^r * P_r(t)`` with every ``P_r`` truncated at ``t^order``.

    ``terms[r][s]`` is the integer coefficient of ``z^r t^s``.
    """

    order: int
    terms: dict[int, list[int]]

    @classmethod
    def zero(cls, order: int) -> "BivariateSeries":
        return cls(order, {})

    def coeff(self, r: int, s: int) -> int:
        row = self.terms.get(r)
        return row[s] if row is not None and 0 <= s <= self.order else 0

    def poly(self, r: int) -> RationalPoly:
        return RationalPoly(self.terms.get(r, ()))

    def at_z_one(self) -> list[int]:
        out = [0] * (self.order + 1)
        for row in self.terms.values():
            for s, c in enumerate(row):
                out[s] += c
        return out

    def mass_slice(self, s: int) -> dict[int, int]:
        """``{r: [z^r t^s]}`` for nonzero coefficients."""
        return {r: row[s] for r, row in sorted(self.terms.items()) if row[s]}

    def add_scaled(self, other: "BivariateSeries", k: int) -> None:
        for r, row in other.terms.items():
            mine = self.terms.setdefault(r, [0] * (self.order + 1))
            for s, c in enumerate(row):
                mine[s] += k * c

    def divide_by_geometric(self, c: int) -> "BivariateSeries":
        """Multiply by ``1 / (1 - z^c t)`` under truncation."""
        out: dict[int, list[int]] = {}
        for r, row in self.terms.items():
            for s, v in enumerate(row):
                if not v:
                    continue
                for k in range(self.order - s + 1):
                    dst = out.setdefault(r + k * c, [0] * (self.order + 1))
                    dst[s + k] += v
        return BivariateSeries(self.order, {r: row for r, row in out.items() if any(row)})


def h_bivariate(shape: Sequence[int], s_max: int, budget: int = DEFAULT_SERIES_BUDGET) -> BivariateSeries:
    """Truncation at ``t^s_max`` of ``H_n(z, t)`` via the inclusion-exclusion recursion."""
    shape = canonical(shape)
    if s_max < 0:
        raise DataError("truncation order must be nonnegative")
    if min(shape) == 0:
        return BivariateSeries.zero(s_max)
    subs = sorted(_sublattice(shape), key=sum)
    work = len(subs) * (2 ** len(shape)) * (s_max + 1) * (s_max * cost(shape) + 1)
    if work > budget:
        raise CapacityError(f"bivariate series work estimate {work} exceeds budget {budget}")
    table: dict[Shape, BivariateSeries] = {}
    for sub in subs:
        if max(sub) == 1:
            table[sub] = BivariateSeries(s_max, {0: [1] * (s_max + 1)})
            continue
        num = BivariateSeries.zero(s_max)
        for a in _subsets(len(sub)):
            lower = _minus(sub, a)
            if min(lower) == 0:
                continue
            num.add_scaled(table[tuple(sorted(lower))], (-1) ** (len(a) - 1))
        table[sub] = num.divide_by_geometric(cost(sub))
    return table[shape]
