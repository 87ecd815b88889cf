"""Exact integers, rationals and dense polynomials over prime fields.

Polynomials over F_p are stored low-degree first as tuples of residues in
[0, p); the zero polynomial is the empty tuple.  Factorization follows the
classical route: squarefree decomposition, distinct-degree splitting, then
randomized equal-degree splitting (Cantor-Zassenhaus) driven by an explicit
seed so that runs are reproducible.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

BigRational = Fraction


class DomainError(ValueError):
    """Raised when an operation is called outside its mathematical domain."""


def binomial(n: int, k: int) -> int:
    """C(n, k) for non-negative n, k; zero when k > n."""
    if n < 0 or k < 0:
        raise DomainError(f"binomial needs non-negative arguments, got ({n}, {k})")
    return math.comb(n, k)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_below(n: int) -> list[int]:
    return [q for q in range(2, n) if is_prime(q)]


def _trim(coeffs) -> tuple[int, ...]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class FpPoly:
    """Polynomial over F_p, coefficients low degree first."""

    p: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(c % self.p for c in self.coeffs))

    @classmethod
    def from_ints(cls, p: int, coeffs) -> FpPoly:
        return cls(p, tuple(int(c) for c in coeffs))

    @classmethod
    def x(cls, p: int) -> FpPoly:
        return cls(p, (0, 1))

    @classmethod
    def constant(cls, p: int, c: int) -> FpPoly:
        return cls(p, (c,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def _coerce(self, other) -> FpPoly:
        if isinstance(other, FpPoly):
            if other.p != self.p:
                raise DomainError(f"mixed characteristics {self.p} and {other.p}")
            return other
        if isinstance(other, int):
            return FpPoly(self.p, (other,))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return FpPoly(self.p, tuple((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                                    for i in range(n)))

    __radd__ = __add__

    def __neg__(self):
        return FpPoly(self.p, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return FpPoly(self.p, ())
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return FpPoly(self.p, tuple(out))

    __rmul__ = __mul__

    def __divmod__(self, other):
        other = self._coerce(other)
        if not other:
            raise ZeroDivisionError("division by the zero polynomial")
        p = self.p
        r = list(self.coeffs)
        db = other.degree
        inv = pow(other.lead, -1, p)
        if len(r) - 1 < db:
            return FpPoly(p, ()), self
        q = [0] * (len(r) - db)
        b = other.coeffs
        for k in range(len(r) - 1 - db, -1, -1):
            c = r[k + db] * inv % p
            q[k] = c
            if c:
                for j in range(db + 1):
                    r[k + j] = (r[k + j] - c * b[j]) % p
        return FpPoly(p, tuple(q)), FpPoly(p, tuple(r[:db]))

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self) -> FpPoly:
        if not self:
            return self
        inv = pow(self.lead, -1, self.p)
        return FpPoly(self.p, tuple(c * inv for c in self.coeffs))

    def derivative(self) -> FpPoly:
        return FpPoly(self.p, tuple(i * c for i, c in enumerate(self.coeffs))[1:])

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % self.p
        return acc

    def powmod(self, e: int, modulus: FpPoly) -> FpPoly:
        result = FpPoly(self.p, (1,)) % modulus
        base = self % modulus
        while e:
            if e & 1:
                result = (result * base) % modulus
            base = (base * base) % modulus
            e >>= 1
        return result

    def __pow__(self, e: int) -> FpPoly:
        result = FpPoly(self.p, (1,))
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def roots(self) -> list[int]:
        """Roots in F_p by exhaustive evaluation."""
        return [a for a in range(self.p) if self(a) == 0]

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if i == 0:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"{c}*{mono}")
        return " + ".join(terms)


def fp_gcd(f: FpPoly, g: FpPoly) -> FpPoly:
    """Monic gcd of two polynomials over F_p."""
    if f.p != g.p:
        raise DomainError("gcd of polynomials over different fields")
    if not f and not g:
        raise DomainError("gcd(0, 0) is undefined")
    while g:
        f, g = g, f % g
    return f.monic()


def _pth_root(f: FpPoly) -> FpPoly:
    # f is a polynomial in x^p; over F_p the Frobenius on coefficients is trivial
    p = f.p
    return FpPoly(p, f.coeffs[::p])


def squarefree_decomposition(f: FpPoly) -> list[tuple[FpPoly, int]]:
    """Monic squarefree factors (g_i, i) with f = lead * prod g_i^i."""
    out: dict[int, FpPoly] = {}

    def rec(h: FpPoly, mult: int):
        if h.degree < 1:
            return
        d = h.derivative()
        if not d:
            rec(_pth_root(h), mult * h.p)
            return
        c = fp_gcd(h, d)
        w = h // c
        i = 1
        while w.degree > 0:
            y = fp_gcd(w, c)
            z = w // y
            if z.degree > 0:
                out[i * mult] = out.get(i * mult, FpPoly(h.p, (1,))) * z
            i += 1
            w = y
            c = c // y
        if c.degree > 0:
            rec(_pth_root(c), mult * h.p)

    rec(f.monic(), 1)
    return sorted(((g.monic(), m) for m, g in out.items()), key=lambda t: t[1])


def distinct_degree(f: FpPoly) -> list[tuple[FpPoly, int]]:
    """Split a monic squarefree f into products of irreducibles of equal degree."""
    p = f.p
    x = FpPoly.x(p)
    out = []
    h = x
    d = 0
    g = f
    while g.degree >= 2 * (d + 1):
        d += 1
        h = h.powmod(p, g)
        common = fp_gcd(g, h - x)
        if common.degree > 0:
            out.append((common, d))
            g = g // common
            h = h % g
    if g.degree > 0:
        out.append((g.monic(), g.degree))
    return out


def equal_degree(f: FpPoly, d: int, rng: random.Random) -> list[FpPoly]:
    """Cantor-Zassenhaus splitting of a product of degree-d irreducibles."""
    p = f.p
    if f.degree == d:
        return [f.monic()]
    while True:
        a = FpPoly(p, tuple(rng.randrange(p) for _ in range(f.degree)))
        if a.degree < 1:
            continue
        if p == 2:
            # trace map t + t^2 + ... + t^(2^(d-1))
            t = a % f
            acc = t
            for _ in range(d - 1):
                t = (t * t) % f
                acc = acc + t
            b = acc
        else:
            b = a.powmod((p ** d - 1) // 2, f) - 1
        g = fp_gcd(f, b) if b else f
        if 0 < g.degree < f.degree:
            return equal_degree(g, d, rng) + equal_degree(f // g, d, rng)


@dataclass(frozen=True)
class Factorization:
    """unit * prod(factor ** mult); factors monic irreducible, sorted by (degree, coeffs)."""

    p: int
    unit: int
    factors: tuple[tuple[FpPoly, int], ...]
    seed: int

    def expand(self) -> FpPoly:
        out = FpPoly.constant(self.p, self.unit)
        for g, m in self.factors:
            out = out * g ** m
        return out

    def degrees(self) -> list[int]:
        return sorted(g.degree for g, m in self.factors for _ in range(m))


def fp_factor(f: FpPoly, seed: int = 0) -> Factorization:
    if not f:
        raise DomainError("cannot factor the zero polynomial")
    rng = random.Random(seed)
    found: dict[tuple[int, ...], int] = {}
    for g, mult in squarefree_decomposition(f):
        for block, d in distinct_degree(g):
            for irr in equal_degree(block, d, rng):
                found[irr.coeffs] = found.get(irr.coeffs, 0) + mult
    factors = tuple(sorted(((FpPoly(f.p, c), m) for c, m in found.items()),
                           key=lambda t: (t[0].degree, t[0].coeffs)))
    return Factorization(f.p, f.lead, factors, seed)


def is_irreducible(f: FpPoly) -> bool:
    """Rabin's test: x^(p^n) = x mod f and gcd(x^(p^(n/r)) - x, f) = 1 for primes r | n."""
    n = f.degree
    if n < 1:
        return False
    if n == 1:
        return True
    p = f.p
    f = f.monic()
    x = FpPoly.x(p)
    for r in {q for q in range(2, n + 1) if n % q == 0 and is_prime(q)}:
        h = x.powmod(p ** (n // r), f)
        if fp_gcd(f, h - x).degree > 0:
            return False
    return (x.powmod(p ** n, f) - x) % f == FpPoly(p, ())
