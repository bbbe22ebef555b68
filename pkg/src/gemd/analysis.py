"""Exhaustive EMD histograms and the grade-distribution report."""
from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterator

import numpy as np

from .core import CapacityError, Composition, DataError, DegenerateShapeError
from .genfunc import h_bivariate, h_coeff, unit_normalized_expected
from .transport import (
    DistTuple,
    continuous_emd,
    discrete_emd,
    max_emd,
    rsk_word,
    unit_normalized_emd,
)

ENUM_BUDGET_ENV = "GEMD_ENUM_BUDGET"
DEFAULT_ENUM_BUDGET = 10**6
BUNDLED_TABLES = ("spring_2019", "fall_2019")


def enum_budget() -> int:
    raw = os.environ.get(ENUM_BUDGET_ENV)
    return int(raw) if raw else DEFAULT_ENUM_BUDGET


def enumerate_compositions(s: int, n: int) -> Iterator[tuple[int, ...]]:
    """Weak compositions of ``s`` into ``n`` parts, lexicographically decreasing.

    ``(s, 0, ..., 0)`` comes first and ``(0, ..., 0, s)`` last.
    """
    if n < 1 or s < 0:
        raise DataError(f"need s >= 0 and n >= 1, got s={s}, n={n}")
    if n == 1:
        yield (s,)
        return
    for first in range(s, -1, -1):
        for rest in enumerate_compositions(s - first, n - 1):
            yield (first,) + rest


@dataclass
class EmdHistogram:
    d: int
    n: int
    s: int
    counts: dict[int, int]
    total: int = field(init=False)

    def __post_init__(self):
        self.counts = {r: c for r, c in sorted(self.counts.items()) if c}
        self.total = sum(self.counts.values())

    @property
    def emd_sum(self) -> int:
        return sum(r * c for r, c in self.counts.items())

    @property
    def mean(self) -> Fraction:
        return Fraction(self.emd_sum, self.total)

    @property
    def max_value(self) -> int:
        return max(self.counts)

    def central_moment(self, k: int) -> Fraction:
        mu = self.mean
        return sum((c * (r - mu) ** k for r, c in self.counts.items()), Fraction(0)) / self.total

    def skewness(self) -> tuple[float, bool]:
        return skewness(self)


def _word_table(s: int, n: int) -> np.ndarray:
    comps = list(enumerate_compositions(s, n))
    return np.array([rsk_word(c) for c in comps], dtype=np.int16).reshape(len(comps), s)


def emd_histogram(
    d: int, n: int, s: int, budget: int | None = None, via_genfunc: bool = False
) -> EmdHistogram:
    """Counts of discrete EMD values over every d-tuple in ``C(s, n)^d``.

    Enumeration is vectorized: the RSK words of all compositions are stacked,
    and each block of tuples sharing a first member is priced at once.
    """
    if d < 1:
        raise DataError("d must be positive")
    if via_genfunc:
        series = h_bivariate((n,) * d, s)
        return EmdHistogram(d, n, s, series.mass_slice(s))
    budget = enum_budget() if budget is None else budget
    size = h_coeff((n,) * d, s)
    if size > budget:
        raise CapacityError(
            f"{size} tuples exceed the enumeration budget {budget}; "
            f"raise {ENUM_BUDGET_ENV} or use the generating function"
        )
    if d == 1 or s == 0:
        return EmdHistogram(d, n, s, {0: size})
    words = _word_table(s, n)
    k = len(words)
    rest = d - 1
    # every (d-1)-tuple of word indices, as one array
    tail_idx = np.stack(np.unravel_index(np.arange(k**rest), (k,) * rest), axis=-1)
    tail = words[tail_idx]  # (k**rest, rest, s)
    counts = np.zeros(s * max_emd(d, n) + 1, dtype=np.int64)
    for first in range(k):
        cols = np.concatenate(
            [np.broadcast_to(words[first], (len(tail), 1, s)), tail], axis=1
        )
        cols = np.sort(cols, axis=1)
        value = np.zeros(len(tail), dtype=np.int64)
        for i in range(d // 2):
            value += (cols[:, d - 1 - i, :] - cols[:, i, :]).sum(axis=1)
        counts += np.bincount(value, minlength=len(counts))
    return EmdHistogram(d, n, s, {r: int(c) for r, c in enumerate(counts)})


def skewness(h: EmdHistogram) -> tuple[float, bool]:
    """Population skewness of the EMD values; ``(0.0, True)`` when the variance is zero."""
    var = h.central_moment(2)
    if var == 0:
        return 0.0, True
    return float(h.central_moment(3)) / float(var) ** 1.5, False


@dataclass(frozen=True)
class GradeTable:
    labels: tuple[str, ...]
    sections: tuple[tuple[str, tuple[int, ...]], ...]

    def __post_init__(self):
        n = len(self.labels)
        if n < 1:
            raise DataError("a grade table needs at least one grade label")
        for name, counts in self.sections:
            if len(counts) != n:
                raise DataError(f"section {name!r} has {len(counts)} counts, expected {n}")
            if any(c < 0 for c in counts):
                raise DataError(f"section {name!r} has a negative count")

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.sections)


def parse_grade_csv(text: str) -> GradeTable:
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(x.strip() for x in r)]
    if not rows:
        raise DataError("empty grade table")
    header = [x.strip() for x in rows[0]]
    if len(header) < 2:
        raise DataError("header must be 'label,<grade-1>,...'")
    sections = []
    for lineno, row in enumerate(rows[1:], start=2):
        try:
            counts = tuple(int(x) for x in row[1:])
        except ValueError as exc:
            raise DataError(f"line {lineno}: non-integer count ({exc})") from None
        sections.append((row[0].strip(), counts))
    return GradeTable(tuple(header[1:]), tuple(sections))


def read_grade_csv(path) -> GradeTable:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from None
    return parse_grade_csv(text)


def bundled_table(name: str) -> GradeTable:
    text = resources.files("gemd.data").joinpath(f"{name}.csv").read_text(encoding="utf-8")
    return parse_grade_csv(text)


def _apportion(counts: tuple[int, ...], target: int) -> tuple[int, ...]:
    """Largest-remainder rounding of ``counts`` scaled to sum to ``target``."""
    s = sum(counts)
    exact = [Fraction(c * target, s) for c in counts]
    out = [math.floor(x) for x in exact]
    short = target - sum(out)
    order = sorted(range(len(counts)), key=lambda k: (-(exact[k] - out[k]), k))
    for k in order[:short]:
        out[k] += 1
    return tuple(out)


def rescale_common_mass(g: GradeTable) -> DistTuple:
    """Scale every section to the largest section mass, rounding by largest remainder."""
    if not g.sections:
        raise DataError("grade table has no sections")
    masses = [sum(c) for _, c in g.sections]
    if min(masses) == 0:
        raise DataError("a section has zero students")
    target = max(masses)
    return DistTuple(
        tuple(
            Composition(c if m == target else _apportion(c, target))
            for (_, c), m in zip(g.sections, masses)
        )
    )


@dataclass(frozen=True)
class EmdReport:
    names: tuple[str, ...]
    labels: tuple[str, ...]
    mass: int
    rescaled: DistTuple
    discrete: int
    continuous: Fraction
    normalized: Fraction
    expected_normalized: Fraction | None
    warnings: tuple[str, ...] = ()

    @property
    def ratio(self) -> Fraction | None:
        if not self.expected_normalized:
            return None
        return self.normalized / self.expected_normalized


def grade_report(g: GradeTable) -> EmdReport:
    t = rescale_common_mass(g)
    warnings = []
    if t.d == 1:
        warnings.append("only one section: EMD of a single distribution is always 0")
    try:
        expected = unit_normalized_expected(t.d, g.n)
    except DegenerateShapeError:
        expected = None
    try:
        normalized = unit_normalized_emd(t)
    except DegenerateShapeError:
        normalized = Fraction(0)
    return EmdReport(
        names=g.names,
        labels=g.labels,
        mass=t.mass,
        rescaled=t,
        discrete=discrete_emd(t),
        continuous=continuous_emd(t),
        normalized=normalized,
        expected_normalized=expected,
        warnings=tuple(warnings),
    )
