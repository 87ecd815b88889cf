"""Truncated power series in one and two variables.

Coefficients may be any ring elements supporting +, -, * with ints
(``Fraction`` and :class:`~k3fgl.padic.PadicInt` in practice).  A univariate
series with cutoff D stores c_0..c_D; everything beyond degree D is unknown.
The bivariate series keeps the triangle i + j <= D.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from .exact import DomainError


def _zero_like(x):
    return x * 0


def _is_zero(x) -> bool:
    if hasattr(x, "value") and hasattr(x, "N"):
        return x.value == 0
    return x == 0


@dataclass(frozen=True)
class TruncatedSeries:
    coeffs: tuple
    cutoff: int

    def __post_init__(self):
        c = list(self.coeffs)[: self.cutoff + 1]
        if not c:
            raise DomainError("series needs at least one coefficient")
        zero = _zero_like(c[0])
        c += [zero] * (self.cutoff + 1 - len(c))
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def from_list(cls, coeffs: Sequence, cutoff: int | None = None) -> TruncatedSeries:
        return cls(tuple(coeffs), len(coeffs) - 1 if cutoff is None else cutoff)

    @property
    def zero(self):
        return _zero_like(self.coeffs[0])

    def __getitem__(self, i: int):
        return self.coeffs[i]

    def truncate(self, D: int) -> TruncatedSeries:
        return TruncatedSeries(self.coeffs[: D + 1], min(D, self.cutoff))

    def __add__(self, other: TruncatedSeries) -> TruncatedSeries:
        D = min(self.cutoff, other.cutoff)
        return TruncatedSeries(tuple(self[i] + other[i] for i in range(D + 1)), D)

    def __sub__(self, other: TruncatedSeries) -> TruncatedSeries:
        D = min(self.cutoff, other.cutoff)
        return TruncatedSeries(tuple(self[i] - other[i] for i in range(D + 1)), D)

    def scale(self, c) -> TruncatedSeries:
        return TruncatedSeries(tuple(c * a for a in self.coeffs), self.cutoff)

    def __mul__(self, other: TruncatedSeries) -> TruncatedSeries:
        D = min(self.cutoff, other.cutoff)
        a, b = self.coeffs, other.coeffs
        out = [self.zero] * (D + 1)
        for i in range(D + 1):
            if _is_zero(a[i]):
                continue
            for j in range(D + 1 - i):
                out[i + j] = out[i + j] + a[i] * b[j]
        return TruncatedSeries(tuple(out), D)

    def equals(self, other: TruncatedSeries) -> bool:
        D = min(self.cutoff, other.cutoff)
        return all(self[i] == other[i] for i in range(D + 1))

    def __repr__(self) -> str:
        return f"TruncatedSeries({list(self.coeffs)}, D={self.cutoff})"


@dataclass(frozen=True)
class BivariateTruncatedSeries:
    """Coefficients g[(i, j)] of t1^i t2^j for i + j <= cutoff."""

    coeffs: tuple  # tuple of rows; row i has length cutoff + 1 - i
    cutoff: int

    @classmethod
    def zeros(cls, D: int, zero) -> BivariateTruncatedSeries:
        return cls(tuple(tuple(zero for _ in range(D + 1 - i)) for i in range(D + 1)), D)

    @classmethod
    def from_dict(cls, d: dict, D: int, zero) -> BivariateTruncatedSeries:
        rows = [[zero] * (D + 1 - i) for i in range(D + 1)]
        for (i, j), c in d.items():
            if i + j <= D:
                rows[i][j] = rows[i][j] + c
        return cls(tuple(tuple(r) for r in rows), D)

    @property
    def zero(self):
        return _zero_like(self.coeffs[0][0])

    def __getitem__(self, ij: tuple[int, int]):
        i, j = ij
        if i + j > self.cutoff:
            raise IndexError(f"({i}, {j}) is beyond total degree {self.cutoff}")
        return self.coeffs[i][j]

    def items(self):
        for i, row in enumerate(self.coeffs):
            for j, c in enumerate(row):
                yield (i, j), c

    def map(self, fn) -> BivariateTruncatedSeries:
        return BivariateTruncatedSeries(
            tuple(tuple(fn(c) for c in row) for row in self.coeffs), self.cutoff)

    def __add__(self, other):
        if not isinstance(other, BivariateTruncatedSeries):
            rows = [list(r) for r in self.coeffs]
            rows[0][0] = rows[0][0] + other
            return BivariateTruncatedSeries(tuple(tuple(r) for r in rows), self.cutoff)
        D = min(self.cutoff, other.cutoff)
        return BivariateTruncatedSeries(
            tuple(tuple(self.coeffs[i][j] + other.coeffs[i][j] for j in range(D + 1 - i))
                  for i in range(D + 1)), D)

    def scale(self, c) -> BivariateTruncatedSeries:
        return self.map(lambda a: c * a)

    def __mul__(self, other: BivariateTruncatedSeries) -> BivariateTruncatedSeries:
        D = min(self.cutoff, other.cutoff)
        out = [[self.zero] * (D + 1 - i) for i in range(D + 1)]
        nz = [(i, j, c) for (i, j), c in other.items() if i + j <= D and not _is_zero(c)]
        for (i, j), a in self.items():
            if i + j > D or _is_zero(a):
                continue
            budget = D - i - j
            for k, l, b in nz:
                if k + l <= budget:
                    out[i + k][j + l] = out[i + k][j + l] + a * b
        return BivariateTruncatedSeries(tuple(tuple(r) for r in out), D)

    def swap(self) -> BivariateTruncatedSeries:
        D = self.cutoff
        return BivariateTruncatedSeries(
            tuple(tuple(self.coeffs[j][i] for j in range(D + 1 - i)) for i in range(D + 1)), D)

    def restrict_second_zero(self) -> TruncatedSeries:
        """G(t, 0) as a univariate series."""
        return TruncatedSeries(tuple(self.coeffs[i][0] for i in range(self.cutoff + 1)),
                               self.cutoff)

    def equals(self, other: BivariateTruncatedSeries) -> bool:
        D = min(self.cutoff, other.cutoff)
        return all(self.coeffs[i][j] == other.coeffs[i][j]
                   for i in range(D + 1) for j in range(D + 1 - i))

    def as_dict(self, skip_zero: bool = True) -> dict[tuple[int, int], Any]:
        return {ij: c for ij, c in self.items() if not (skip_zero and _is_zero(c))}


def univariate_in_first(s: TruncatedSeries, D: int | None = None) -> BivariateTruncatedSeries:
    D = s.cutoff if D is None else D
    return BivariateTruncatedSeries.from_dict({(i, 0): s[i] for i in range(min(D, s.cutoff) + 1)},
                                              D, s.zero)


def compose(outer: TruncatedSeries, inner):
    """outer(inner) truncated at the common cutoff; inner must have zero constant term."""
    if isinstance(inner, TruncatedSeries):
        if not _is_zero(inner[0]):
            raise DomainError("inner series has a non-zero constant term")
        D = min(outer.cutoff, inner.cutoff)
        inner = inner.truncate(D)
        acc = TruncatedSeries((outer[D],), D)
        for k in range(D - 1, -1, -1):
            acc = acc * inner
            acc = TruncatedSeries((acc[0] + outer[k],) + acc.coeffs[1:], D)
        return acc
    if isinstance(inner, BivariateTruncatedSeries):
        if not _is_zero(inner[0, 0]):
            raise DomainError("inner series has a non-zero constant term")
        D = min(outer.cutoff, inner.cutoff)
        acc = BivariateTruncatedSeries.zeros(D, outer.zero) + outer[D]
        for k in range(D - 1, -1, -1):
            acc = acc * inner + outer[k]
        return acc
    raise TypeError(f"cannot compose into {type(inner).__name__}")


def _unit_inverse(c):
    if hasattr(c, "inverse"):
        return c.inverse()
    if c == 0:
        raise DomainError("leading coefficient is not a unit")
    return Fraction(1) / c


def reversion(l: TruncatedSeries) -> TruncatedSeries:
    """Compositional inverse g with l(g(t)) = t mod t^(D+1).

    Degree-by-degree solve using a running table of powers of g, so no
    integer divisions occur beyond inverting the linear coefficient.
    """
    if not _is_zero(l[0]):
        raise DomainError("series to invert has a non-zero constant term")
    c1 = l[1] if l.cutoff >= 1 else None
    if c1 is None:
        raise DomainError("series too short to invert")
    if hasattr(c1, "is_unit"):
        if not c1.is_unit():
            raise DomainError("linear coefficient is not a unit")
    elif c1 == 0:
        raise DomainError("linear coefficient is zero")
    inv = _unit_inverse(c1)
    D = l.cutoff
    zero = l.zero
    g = [zero] * (D + 1)
    g[1] = inv + zero
    # powers[k][d] = coefficient of t^d in g^k, filled column by column
    powers = [[zero] * (D + 1) for _ in range(D + 1)]
    powers[1][1] = g[1]
    for d in range(2, D + 1):
        for k in range(2, d + 1):
            acc = zero
            prev = powers[k - 1]
            for j in range(1, d - k + 2):
                if not _is_zero(g[j]):
                    acc = acc + g[j] * prev[d - j]
            powers[k][d] = acc
        s = zero
        for k in range(2, d + 1):
            if not _is_zero(l[k]):
                s = s + l[k] * powers[k][d]
        g[d] = (zero - s) * inv
        powers[1][d] = g[d]
    return TruncatedSeries(tuple(g), D)
