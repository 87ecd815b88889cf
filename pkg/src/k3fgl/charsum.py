"""Character sums and brute-force point counts, used as independent checks.

Cyclotomic integers are integer vectors reduced modulo the d-th cyclotomic
polynomial.  Embeddings of Z[zeta_d] into Z_p send zeta_d to the
Teichmueller lift of an element of order d in F_p^*; every such choice is
produced, so comparisons never depend on a guessed normalization.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Sequence

from .exact import DomainError, is_prime
from .hyperfam import K3FamilySpec, get_family, monomial_values
from .padic import PadicInt, teichmuller

MAX_EVALUATIONS = 10 ** 7


# ---------------------------------------------------------------------------
# Z[zeta_d]


def _int_divmod(a: list[int], b: list[int]) -> tuple[list[int], list[int]]:
    """Division by a monic integer polynomial (low degree first)."""
    a = list(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        return [0], a
    q = [0] * (len(a) - db)
    for k in range(len(a) - 1 - db, -1, -1):
        c = a[k + db]
        q[k] = c
        if c:
            for j in range(db + 1):
                a[k + j] -= c * b[j]
    return q, a[:db]


@lru_cache(maxsize=None)
def cyclotomic_poly(d: int) -> tuple[int, ...]:
    """Phi_d with integer coefficients, low degree first."""
    if d < 1:
        raise DomainError("cyclotomic index must be positive")
    num = [-1] + [0] * (d - 1) + [1]
    for e in range(1, d):
        if d % e == 0:
            num, r = _int_divmod(num, list(cyclotomic_poly(e)))
            if any(r):
                raise ArithmeticError("cyclotomic division left a remainder")
    return tuple(num)


@dataclass(frozen=True)
class CyclotomicInt:
    d: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        phi = list(cyclotomic_poly(self.d))
        _, r = _int_divmod(list(self.coeffs) or [0], phi)
        r = r + [0] * (len(phi) - 1 - len(r))
        object.__setattr__(self, "coeffs", tuple(r))

    @classmethod
    def zeta_power(cls, d: int, k: int) -> CyclotomicInt:
        c = [0] * d
        c[k % d] = 1
        return cls(d, tuple(c))

    @classmethod
    def integer(cls, d: int, n: int) -> CyclotomicInt:
        return cls(d, (n,))

    def _check(self, other: CyclotomicInt):
        if other.d != self.d:
            raise DomainError(f"mixed cyclotomic rings {self.d} and {other.d}")

    def __add__(self, other: CyclotomicInt) -> CyclotomicInt:
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return CyclotomicInt(self.d, tuple(x + y for x, y in zip(a, b)))

    def __neg__(self) -> CyclotomicInt:
        return CyclotomicInt(self.d, tuple(-x for x in self.coeffs))

    def __sub__(self, other: CyclotomicInt) -> CyclotomicInt:
        return self + (-other)

    def __mul__(self, other) -> CyclotomicInt:
        if isinstance(other, int):
            return CyclotomicInt(self.d, tuple(other * x for x in self.coeffs))
        self._check(other)
        out = [0] * (len(self.coeffs) + len(other.coeffs))
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    out[i + j] += x * y
        return CyclotomicInt(self.d, tuple(out))

    __rmul__ = __mul__

    def galois(self, k: int) -> CyclotomicInt:
        """zeta -> zeta^k (k coprime to d)."""
        if math.gcd(k, self.d) != 1:
            raise DomainError(f"{k} is not a unit mod {self.d}")
        out = [0] * self.d
        for i, x in enumerate(self.coeffs):
            out[i * k % self.d] += x
        return CyclotomicInt(self.d, tuple(out))

    def conj(self) -> CyclotomicInt:
        return self.galois(-1)

    def embed(self, zeta: PadicInt) -> PadicInt:
        acc = zeta * 0
        for c in reversed(self.coeffs):
            acc = acc * zeta + c
        return acc

    def is_integer(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def __int__(self) -> int:
        if not self.is_integer():
            raise DomainError("not a rational integer")
        return self.coeffs[0] if self.coeffs else 0

    def to_json(self) -> dict:
        return {"d": self.d, "coeffs": list(self.coeffs)}


# ---------------------------------------------------------------------------
# Characters


def primitive_root(p: int) -> int:
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if p == 2:
        return 1
    factors = {q for q in range(2, p) if (p - 1) % q == 0 and is_prime(q)}
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
            return g
    raise ArithmeticError("no primitive root found")


@lru_cache(maxsize=None)
def _index_table(p: int, g: int) -> tuple[int, ...]:
    ind = [0] * p
    x = 1
    for n in range(p - 1):
        ind[x] = n
        x = x * g % p
    return tuple(ind)


@dataclass(frozen=True)
class MultiplicativeCharacter:
    """chi(g^n) = zeta_d^(j n) on F_p^*, chi(0) = 0."""

    p: int
    d: int
    j: int
    g: int = 0

    def __post_init__(self):
        if (self.p - 1) % self.d:
            raise DomainError(f"d = {self.d} does not divide p - 1 = {self.p - 1}")
        if self.g == 0:
            object.__setattr__(self, "g", primitive_root(self.p))
        object.__setattr__(self, "j", self.j % self.d)

    @property
    def order(self) -> int:
        return self.d // math.gcd(self.j, self.d)

    def exponent(self, x: int) -> int | None:
        """k with chi(x) = zeta_d^k, or None at x = 0."""
        x %= self.p
        if x == 0:
            return None
        return self.j * _index_table(self.p, self.g)[x] % self.d

    def __call__(self, x: int) -> CyclotomicInt:
        k = self.exponent(x)
        if k is None:
            return CyclotomicInt.integer(self.d, 0)
        return CyclotomicInt.zeta_power(self.d, k)

    def __mul__(self, other: MultiplicativeCharacter) -> MultiplicativeCharacter:
        if (other.p, other.d, other.g) != (self.p, self.d, self.g):
            raise DomainError("characters live on different groups")
        return MultiplicativeCharacter(self.p, self.d, self.j + other.j, self.g)

    def __pow__(self, k: int) -> MultiplicativeCharacter:
        return MultiplicativeCharacter(self.p, self.d, self.j * k, self.g)

    def is_trivial(self) -> bool:
        return self.j == 0


def characters(p: int, d: int) -> list[MultiplicativeCharacter]:
    return [MultiplicativeCharacter(p, d, j) for j in range(d)]


def jacobi_sum(chi1: MultiplicativeCharacter, chi2: MultiplicativeCharacter) -> CyclotomicInt:
    """sum over a not in {0, 1} of chi1(a) chi2(1 - a), exactly in Z[zeta_d].

    |J|^2 = p holds when chi1, chi2 and chi1 chi2 are all non-trivial.
    """
    if chi1.p != chi2.p:
        raise DomainError(f"characters mod {chi1.p} and {chi2.p}")
    if chi1.g != chi2.g:
        raise DomainError("characters are indexed by different generators")
    if chi1.d != chi2.d:
        d = math.lcm(chi1.d, chi2.d)
        chi1 = MultiplicativeCharacter(chi1.p, d, chi1.j * (d // chi1.d), chi1.g)
        chi2 = MultiplicativeCharacter(chi2.p, d, chi2.j * (d // chi2.d), chi2.g)
    if chi1.is_trivial() and chi2.is_trivial():
        # J(1, 1) = p - 2 carries no arithmetic; J(chi, chi^-1) = -chi(-1) is still allowed
        raise DomainError("both characters are trivial")
    p, d = chi1.p, chi1.d
    counts = [0] * d
    for a in range(2, p):
        counts[(chi1.exponent(a) + chi2.exponent(1 - a)) % d] += 1
    return CyclotomicInt(d, tuple(counts))


def norm_is_p(J: CyclotomicInt, p: int) -> bool:
    """|J|^2 = p under every complex embedding, i.e. J * conj(J) = p exactly."""
    return J * J.conj() == CyclotomicInt.integer(J.d, p)


def zeta_embeddings(p: int, d: int, N: int) -> list[PadicInt]:
    """Teichmueller lifts of all elements of exact order d in F_p^*."""
    if (p - 1) % d:
        raise DomainError(f"{d} does not divide {p - 1}")
    g = primitive_root(p)
    base = pow(g, (p - 1) // d, p)
    return [teichmuller(pow(base, k, p), p, N) for k in range(1, d + 1)
            if math.gcd(k, d) == 1]


def quartic_unit_root_candidates(p: int, N: int) -> list[dict]:
    """Images in Z_p of chi(-1)^e J(chi, chi) J(chi, chi^2) for quartic chi.

    This is g(chi)^4 / p up to the sign chi(-1)^(1-e); all characters of
    order 4, both embeddings of Z[i] and both signs are listed.
    """
    if p % 4 != 1:
        raise DomainError("quartic characters need p = 1 mod 4")
    out = []
    for j in (1, 3):
        chi = MultiplicativeCharacter(p, 4, j)
        prod = jacobi_sum(chi, chi) * jacobi_sum(chi, chi ** 2)
        sign = chi(-1)
        for zi, zeta in enumerate(zeta_embeddings(p, 4, N)):
            for twisted in (False, True):
                val = (prod * sign if twisted else prod).embed(zeta)
                out.append({"j": j, "embedding": zi, "twisted": twisted,
                            "element": prod.to_json(), "value": val.value, "unit": val.is_unit()})
    return out


# ---------------------------------------------------------------------------
# Finite fields F_q, q = p or p^2


class FiniteField:
    """F_p or F_{p^2}; elements are integers 0..q-1 (x = a + b t, encoded a + p b)."""

    def __init__(self, q: int):
        p, a = _prime_power(q)
        if a > 2:
            raise DomainError("only F_p and F_{p^2} are supported")
        self.q, self.p, self.a = q, p, a
        if a == 1:
            self.mul_table = None
        else:
            # t^2 = s (p odd, s a non-residue) or t^2 = t + 1 (p = 2)
            if p == 2:
                self._mod = (1, 1)  # t^2 = 1 + t
            else:
                s = next(x for x in range(2, p) if pow(x, (p - 1) // 2, p) == p - 1)
                self._mod = (s, 0)
            self.mul_table = [[self._mul2(x, y) for y in range(q)] for x in range(q)]
        self._pow_cache: dict[int, list[int]] = {}

    def _mul2(self, x: int, y: int) -> int:
        p = self.p
        a, b = x % p, x // p
        c, d = y % p, y // p
        s0, s1 = self._mod
        # (a + b t)(c + d t) = ac + (ad + bc) t + bd t^2
        bd = b * d
        lo = (a * c + bd * s0) % p
        hi = (a * d + b * c + bd * s1) % p
        return lo + p * hi

    def add(self, x: int, y: int) -> int:
        if self.a == 1:
            return (x + y) % self.p
        p = self.p
        return (x % p + y % p) % p + p * ((x // p + y // p) % p)

    def mul(self, x: int, y: int) -> int:
        if self.a == 1:
            return x * y % self.p
        return self.mul_table[x][y]

    def scalar(self, c: int) -> int:
        return c % self.p

    def powers(self, e: int) -> list[int]:
        t = self._pow_cache.get(e)
        if t is None:
            t = []
            for x in range(self.q):
                acc = 1
                for _ in range(e):
                    acc = self.mul(acc, x)
                t.append(acc)
            self._pow_cache[e] = t
        return t

    def quadratic_character(self) -> list[int]:
        squares = {self.mul(x, x) for x in range(1, self.q)}
        return [0] + [1 if x in squares else -1 for x in range(1, self.q)]


def _prime_power(q: int) -> tuple[int, int]:
    for p in range(2, q + 1):
        if q % p == 0:
            a, m = 0, q
            while m % p == 0:
                m //= p
                a += 1
            if m != 1 or not is_prime(p):
                raise DomainError(f"{q} is not a prime power")
            return p, a
    raise DomainError(f"{q} is not a prime power")


# ---------------------------------------------------------------------------
# Point counting

Form = Sequence[tuple[int, Sequence[int]]]  # (coefficient, exponent vector)

PROJECTIVE_CONVENTION = ("projective points: representatives with first non-zero "
                         "coordinate equal to 1")
DOUBLE_COVER_CONVENTION = ("double cover w^2 = f: sum over projective plane points P of "
                           "1 + eta(f(P)), eta the quadratic character with eta(0) = 0")


def _check_form(form: Form) -> tuple[int, int]:
    if not form:
        raise DomainError("empty form")
    nv = len(form[0][1])
    degs = {sum(e) for _, e in form}
    if any(len(e) != nv for _, e in form):
        raise DomainError("monomials have different numbers of variables")
    if len(degs) != 1:
        raise DomainError(f"form is not homogeneous (degrees {sorted(degs)})")
    return nv, degs.pop()


def _projective_points(F: FiniteField, nv: int):
    q = F.q
    for lead in range(nv):
        tail = nv - lead - 1
        for rest in itertools.product(range(q), repeat=tail):
            yield (0,) * lead + (1,) + rest


def _evaluator(F: FiniteField, form: Form):
    terms = []
    maxe = max(max(e) for _, e in form)
    pow_tables = [F.powers(k) for k in range(maxe + 1)]
    for c, e in form:
        cs = F.scalar(c)
        if cs == 0:
            continue
        terms.append((cs, [(v, k) for v, k in enumerate(e) if k]))

    def value(pt) -> int:
        acc = 0
        for cs, mono in terms:
            t = cs
            for v, k in mono:
                t = F.mul(t, pow_tables[k][pt[v]])
                if t == 0:
                    break
            if t:
                acc = F.add(acc, t)
        return acc

    return value


def projective_count(form: Form, q: int) -> int:
    nv, _ = _check_form(form)
    size = (q ** nv - 1) // (q - 1)
    if size > MAX_EVALUATIONS:
        raise DomainError(f"refusing to enumerate {size} points (limit {MAX_EVALUATIONS})")
    F = FiniteField(q)
    value = _evaluator(F, form)
    return sum(1 for pt in _projective_points(F, nv) if value(pt) == 0)


def double_cover_count(form: Form, q: int) -> int:
    nv, deg = _check_form(form)
    if deg % 2:
        raise DomainError("double cover needs an even-degree branch form")
    size = (q ** nv - 1) // (q - 1)
    if size > MAX_EVALUATIONS:
        raise DomainError(f"refusing to enumerate {size} points (limit {MAX_EVALUATIONS})")
    F = FiniteField(q)
    if F.p == 2:
        raise DomainError("double covers in characteristic 2 are not supported")
    eta = F.quadratic_character()
    value = _evaluator(F, form)
    return sum(1 + eta[value(pt)] for pt in _projective_points(F, nv))


def family_form(spec: K3FamilySpec | str, params: Mapping[str, int]) -> Form:
    if isinstance(spec, str):
        spec = get_family(spec)
    if spec.kind == "elliptic":
        raise DomainError(f"{spec.id} has no surface equation in the catalog")
    vals = monomial_values(spec, params)
    return [(v, e) for v, (e, _, _) in zip(vals, spec.monomials)]


def point_count(target, q: int, params: Mapping[str, int] | None = None) -> dict:
    """Exact point count of a catalog surface or a raw homogeneous form over F_q."""
    if isinstance(target, (str, K3FamilySpec)):
        spec = get_family(target) if isinstance(target, str) else target
        form = family_form(spec, params or {})
        double = spec.kind == "double-sextic"
    else:
        form = [(int(c), tuple(int(x) for x in e)) for c, e in target]
        double = False
    if double:
        count = double_cover_count(form, q)
        convention = DOUBLE_COVER_CONVENTION
    else:
        count = projective_count(form, q)
        convention = PROJECTIVE_CONVENTION
    return {"q": q, "count": count, "convention": convention}


__all__ = [
    "CyclotomicInt", "FiniteField", "MultiplicativeCharacter", "characters", "cyclotomic_poly",
    "double_cover_count", "family_form", "jacobi_sum", "norm_is_p", "point_count",
    "primitive_root", "projective_count", "quartic_unit_root_candidates", "zeta_embeddings",
]
