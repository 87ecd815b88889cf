"""Truncated p-adic integers, Teichmueller lifts and Morita's p-adic gamma.

A :class:`PadicInt` is a residue modulo p^N together with its precision N.
Binary operations truncate to the smaller precision.  Exact division by a
multiple of p must be asked for explicitly (:meth:`PadicInt.exact_div`); it
loses the corresponding number of digits and refuses to guess when the
dividend is not divisible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import DomainError


class PrecisionError(ArithmeticError):
    """A result cannot be certified at the requested precision."""

    def __init__(self, message: str, needed: int | None = None):
        super().__init__(message)
        self.needed = needed


@dataclass(frozen=True)
class AtLeast:
    """Valuation sentinel: the element is zero to the known precision."""

    n: int

    def __ge__(self, other: int) -> bool:
        return self.n >= other

    def __str__(self) -> str:
        return f">={self.n}"


def vp(n: int, p: int) -> int:
    """Exact p-adic valuation of a non-zero integer."""
    if n == 0:
        raise DomainError("valuation of 0")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp_factorial(n: int, p: int) -> int:
    """Legendre: v_p(n!) = (n - digit sum of n in base p) / (p - 1)."""
    s, m = 0, n
    while m:
        s += m % p
        m //= p
    return (n - s) // (p - 1)


@dataclass(frozen=True)
class PadicInt:
    p: int
    N: int
    value: int

    def __post_init__(self):
        if self.N < 1:
            raise DomainError(f"precision must be positive, got {self.N}")
        object.__setattr__(self, "value", self.value % self.p ** self.N)

    @property
    def modulus(self) -> int:
        return self.p ** self.N

    @classmethod
    def from_fraction(cls, x: Fraction | int, p: int, N: int) -> PadicInt:
        x = Fraction(x)
        if x.denominator % p == 0:
            raise DomainError(f"{x} is not {p}-integral")
        mod = p ** N
        return cls(p, N, x.numerator * pow(x.denominator, -1, mod))

    def _other(self, other) -> PadicInt:
        if isinstance(other, PadicInt):
            if other.p != self.p:
                raise DomainError(f"mixed primes {self.p} and {other.p}")
            return other
        if isinstance(other, int):
            return PadicInt(self.p, self.N, other)
        if isinstance(other, Fraction):
            return PadicInt.from_fraction(other, self.p, self.N)
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return PadicInt(self.p, min(self.N, o.N), self.value + o.value)

    __radd__ = __add__

    def __neg__(self):
        return PadicInt(self.p, self.N, -self.value)

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return PadicInt(self.p, min(self.N, o.N), self.value - o.value)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return PadicInt(self.p, min(self.N, o.N), self.value * o.value)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> PadicInt:
        if e < 0:
            return self.inverse() ** (-e)
        return PadicInt(self.p, self.N, pow(self.value, e, self.modulus))

    def is_unit(self) -> bool:
        return self.value % self.p != 0

    def inverse(self) -> PadicInt:
        if not self.is_unit():
            raise ZeroDivisionError(f"{self.value} is not a unit mod {self.p}")
        return PadicInt(self.p, self.N, pow(self.value, -1, self.modulus))

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._other(other) / self

    def valuation(self) -> int | AtLeast:
        if self.value == 0:
            return AtLeast(self.N)
        return vp(self.value, self.p)

    def exact_div(self, m: int) -> PadicInt:
        """Divide by a non-zero integer; p-power part must divide the value."""
        if m == 0:
            raise ZeroDivisionError("division by zero")
        s = vp(m, self.p)
        unit = m // self.p ** s
        if s:
            if s >= self.N:
                raise PrecisionError(
                    f"dividing by p^{s} leaves no digits at precision {self.N}",
                    needed=s + 1)
            if self.value % self.p ** s:
                raise DomainError(f"{self.value} is not divisible by {self.p}^{s}")
        return PadicInt(self.p, self.N - s, self.value // self.p ** s) * \
            PadicInt(self.p, self.N - s, pow(unit, -1, self.p ** (self.N - s)))

    def reduce(self, N: int) -> PadicInt:
        if N > self.N:
            raise PrecisionError(f"cannot raise precision {self.N} to {N}", needed=N)
        return PadicInt(self.p, N, self.value)

    def residue(self) -> int:
        return self.value % self.p

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = PadicInt(self.p, self.N, other)
        if not isinstance(other, PadicInt) or other.p != self.p:
            return NotImplemented
        n = min(self.N, other.N)
        return (self.value - other.value) % self.p ** n == 0

    def __hash__(self):
        return hash((self.p, self.N, self.value))

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"PadicInt({self.value} mod {self.p}^{self.N})"


@dataclass(frozen=True)
class PadicUnitCertificate:
    element: PadicInt
    witness: int

    def __post_init__(self):
        if self.witness % self.element.p == 0:
            raise DomainError("unit witness must be non-zero mod p")
        if self.element.residue() != self.witness % self.element.p:
            raise DomainError("witness does not match the element mod p")

    @classmethod
    def of(cls, x: PadicInt) -> PadicUnitCertificate:
        return cls(x, x.residue())


def teichmuller(c: int, p: int, N: int) -> PadicInt:
    """Unique root of x^p = x congruent to c mod p (0 maps to 0)."""
    c %= p
    if c == 0:
        return PadicInt(p, N, 0)
    mod = p ** N
    x = c
    # each application of x -> x^p gains one p-adic digit
    for _ in range(N):
        x = pow(x, p, mod)
    return PadicInt(p, N, x)


def padic_gamma_int(n: int, p: int, N: int) -> int:
    """Gamma_p(n) mod p^N for an integer n >= 0, Morita's normalization."""
    mod = p ** N
    acc = 1
    for j in range(1, n):
        if j % p:
            acc = acc * j % mod
    return (-acc if n % 2 else acc) % mod


def padic_gamma(x: Fraction | int, p: int, N: int) -> PadicInt:
    """Morita's Gamma_p at a p-integral rational, correct mod p^N for odd p."""
    if p == 2:
        raise DomainError("p = 2 is not supported")
    x = Fraction(x)
    if x.denominator % p == 0:
        raise DomainError(f"{x} is not {p}-integral")
    mod = p ** N
    m = x.numerator * pow(x.denominator, -1, mod) % mod
    return PadicInt(p, N, padic_gamma_int(m, p, N))


class FactorialTable:
    """Unit parts and valuations of j! for 0 <= j <= M, working mod p^N.

    Multinomials become (product of unit parts) * p^(valuation) and are
    exact modulo p^N without touching the huge integers themselves.
    """

    def __init__(self, p: int, N: int, M: int):
        self.p, self.N, self.M = p, N, M
        self.mod = p ** N
        units = [1] * (M + 1)
        vals = [0] * (M + 1)
        u, v = 1, 0
        mod = self.mod
        for j in range(1, M + 1):
            k = j
            while k % p == 0:
                k //= p
                v += 1
            u = u * k % mod
            units[j] = u
            vals[j] = v
        self.units = units
        self.vals = vals
        self._inv: dict[int, int] = {}

    def inv_unit(self, j: int) -> int:
        r = self._inv.get(j)
        if r is None:
            r = self._inv[j] = pow(self.units[j], -1, self.mod)
        return r

    def multinomial(self, top: int, parts) -> int:
        """top! / prod(parts!) mod p^N (parts must sum to top)."""
        v = self.vals[top]
        acc = self.units[top]
        for q in parts:
            v -= self.vals[q]
            acc = acc * self.inv_unit(q) % self.mod
        if v >= self.N:
            return 0
        return acc * self.p ** v % self.mod

    def multinomial_valuation(self, top: int, parts) -> int:
        return self.vals[top] - sum(self.vals[q] for q in parts)


_TABLES: dict[tuple[int, int], FactorialTable] = {}


def factorial_table(p: int, N: int, M: int) -> FactorialTable:
    """Shared table, grown on demand (callers must treat it as read-only)."""
    t = _TABLES.get((p, N))
    if t is None or t.M < M:
        t = FactorialTable(p, N, max(M, 2 * (t.M if t else 0), 64))
        _TABLES[(p, N)] = t
    return t
