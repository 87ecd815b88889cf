"""Hypergeometric series and the catalog of K3 families.

Every catalog family has a logarithm

    l(t) = sum_m a(m) t^(e*m + 1) / (e*m + 1)

with stride e.  The coefficient a(m) is computed from a closed-form
multinomial sum (valid for every parameter value, including lambda = 0);
a terminating pFq expression is available as a second route
whenever lambda is a unit.  :func:`multinomial_oracle` extracts the same
numbers directly from the defining polynomial, independently of both.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .exact import DomainError
from .padic import PadicInt, factorial_table


class UnsupportedFamily(DomainError):
    pass


class IntegralityError(ArithmeticError):
    """A quantity that must be p-integral was not; signals a generator bug."""


def pochhammer(a, r: int):
    """Rising factorial (a)_r = a (a+1) ... (a+r-1); (a)_0 = 1."""
    if r < 0:
        raise DomainError("Pochhammer index must be non-negative")
    acc = Fraction(1) if not isinstance(a, PadicInt) else a * 0 + 1
    for i in range(r):
        acc = acc * (a + i)
    return acc


@dataclass(frozen=True)
class FareyIndex:
    """[n]^m: the fractions i/n with gcd(i, n) = 1, each repeated m times."""

    n: int
    repeat: int = 1

    def expand(self) -> list[Fraction]:
        return farey_expand(self)


def farey_expand(idx: FareyIndex) -> list[Fraction]:
    base = [Fraction(i, idx.n) for i in range(1, idx.n + 1) if math.gcd(i, idx.n) == 1]
    return sorted(base * idx.repeat)


def expand_indices(indices: Sequence[FareyIndex]) -> list[Fraction]:
    out: list[Fraction] = []
    for idx in indices:
        out += farey_expand(idx)
    return out


@dataclass(frozen=True)
class HGParams:
    upper: tuple[Fraction, ...]
    lower: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "upper", tuple(Fraction(a) for a in self.upper))
        object.__setattr__(self, "lower", tuple(Fraction(b) for b in self.lower))
        for b in self.lower:
            if b.denominator == 1 and b <= 0:
                raise DomainError(f"lower parameter {b} is a non-positive integer")

    def termination_index(self) -> int | None:
        """Largest r with a non-zero term, or None for a genuine series."""
        stops = [-a.numerator for a in self.upper if a.denominator == 1 and a <= 0]
        return min(stops) if stops else None

    def coefficient_ratio(self, r: int) -> Fraction:
        """c_{r+1} / c_r."""
        num = Fraction(1)
        for a in self.upper:
            num *= a + r
        den = Fraction(r + 1)
        for b in self.lower:
            den *= b + r
        return num / den


def pfq_coefficients(params: HGParams, R: int) -> list[Fraction]:
    """First R coefficients of sum_r prod (a_i)_r / prod (b_i)_r x^r / r!."""
    out = []
    c = Fraction(1)
    for r in range(R):
        out.append(c)
        c = c * params.coefficient_ratio(r)
    return out


def pfq_terminating(params: HGParams, x):
    """Exact value of a terminating hypergeometric polynomial at x.

    x may be a Fraction, an int or a PadicInt; in the last case each
    rational coefficient must be p-integral.
    """
    stop = params.termination_index()
    if stop is None:
        raise DomainError("series does not terminate; refusing to truncate")
    coeffs = pfq_coefficients(params, stop + 1)
    acc = x * 0
    xr = x * 0 + 1
    for c in coeffs:
        acc = acc + c * xr
        xr = xr * x
    return acc


# ---------------------------------------------------------------------------
# Family catalog

QUARTIC_VARS = 4
SEXTIC_VARS = 3


@dataclass(frozen=True)
class K3FamilySpec:
    """Catalog entry.

    ``monomials`` lists (exponent vector, constant, parameter name or None);
    the defining polynomial is the sum of const * param * T^exponents.
    The coefficient generator is

        a(m) = sum_n  multinomial(M; M - core_top*n, parts*n) * (-k lam)^(M - core_top*n) * c^n

    with M = e*m for hypersurfaces (M = e*m/2 powers of the branch sextic for
    double covers); for non-pencils only the M = core_top*n terms exist.
    """

    id: str
    kind: str  # "quartic", "double-sextic" or "elliptic"
    stride: int
    params: tuple[str, ...]
    monomials: tuple[tuple[tuple[int, ...], int, str | None], ...]
    core_top: int
    core_parts: tuple[int, ...]
    pencil_k: int | None = None
    x_norm: Fraction = Fraction(1)
    lower: tuple[FareyIndex, ...] = ()
    limit_upper: tuple[FareyIndex | Fraction, ...] = ()
    limit_lower: tuple[FareyIndex | Fraction, ...] = ()
    min_prime: int = 3
    smoothness_checked: bool = field(default=False)

    @property
    def is_pencil(self) -> bool:
        return self.pencil_k is not None

    @property
    def c_names(self) -> tuple[str, ...]:
        return tuple(n for n in self.params if n != "lam")

    def exponent_matrix(self) -> list[list[int]]:
        return [list(e) for e, _, _ in self.monomials]

    def descriptor(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "stride": self.stride,
            "exponent_pattern": f"t^({self.stride}m+1)/({self.stride}m+1)",
            "parameters": list(self.params),
            "exponent_matrix": self.exponent_matrix(),
            "monomial_coefficients": [[c, name] for _, c, name in self.monomials],
            "core": {"top": self.core_top, "parts": list(self.core_parts)},
            "pencil_k": self.pencil_k,
            "x_normalization": str(self.x_norm),
            "smoothness_checked": self.smoothness_checked,
        }

    def descriptor_json(self) -> str:
        return json.dumps(self.descriptor(), sort_keys=True)

    def limit_params(self) -> HGParams:
        def flat(items):
            out = []
            for it in items:
                out += farey_expand(it) if isinstance(it, FareyIndex) else [Fraction(it)]
            return tuple(out)
        return HGParams(flat(self.limit_upper), flat(self.limit_lower))


def _diag(n_vars: int, deg: int) -> tuple:
    out = []
    for i in range(n_vars):
        e = [0] * n_vars
        e[i] = deg
        out.append((tuple(e), 1, f"c{i + 1}"))
    return tuple(out)


def _cyclic(n_vars: int, pattern: Sequence[int]) -> tuple:
    # monomial i has exponent pattern[k] on variable i + k (cyclically)
    out = []
    for i in range(n_vars):
        e = [0] * n_vars
        for k, a in enumerate(pattern):
            e[(i + k) % n_vars] += a
        out.append((tuple(e), 1, f"c{i + 1}"))
    return tuple(out)


_Q = ("c1", "c2", "c3", "c4")
_S = ("c1", "c2", "c3")
_QUARTIC_LAM = ((1, 1, 1, 1), -4, "lam")
_SEXTIC_LAM = ((2, 2, 2), -3, "lam")
_F4 = (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4))
_F6 = (Fraction(1, 6), Fraction(1, 2), Fraction(5, 6))


def _quartic_pencil(name, principal):
    return K3FamilySpec(name, "quartic", 1, _Q + ("lam",), principal + (_QUARTIC_LAM,),
                        4, (1, 1, 1, 1), pencil_k=4, lower=(FareyIndex(1, 3),),
                        limit_upper=_F4, limit_lower=(1, 1))


def _sextic_pencil(name, principal):
    return K3FamilySpec(name, "double-sextic", 2, _S + ("lam",), principal + (_SEXTIC_LAM,),
                        3, (1, 1, 1), pencil_k=3, lower=(FareyIndex(1, 2),),
                        limit_upper=_F6, limit_lower=(1, 1), min_prime=5)


CATALOG: dict[str, K3FamilySpec] = {s.id: s for s in [
    K3FamilySpec("jacobi-quartic", "elliptic", 4, (), (), 2, (1, 1),
                 limit_upper=(Fraction(1, 4), Fraction(1, 4)), limit_lower=(1,)),
    K3FamilySpec("diagonal-quartic", "quartic", 4, _Q, _diag(4, 4), 4, (1, 1, 1, 1),
                 limit_upper=_F4, limit_lower=(1, 1)),
    _quartic_pencil("quartic-pencil-1", _diag(4, 4)),
    _quartic_pencil("quartic-pencil-2", _cyclic(4, (3, 1))),
    _quartic_pencil("quartic-pencil-3", _cyclic(4, (2, 1, 1))),
    K3FamilySpec("diagonal-sextic", "double-sextic", 6, _S, _diag(3, 6), 3, (1, 1, 1),
                 limit_upper=_F6, limit_lower=(1, 1)),
    _sextic_pencil("sextic-pencil-1", _diag(3, 6)),
    _sextic_pencil("sextic-pencil-2", _cyclic(3, (5, 1))),
    _sextic_pencil("sextic-pencil-3", _cyclic(3, (4, 2))),
    _sextic_pencil("sextic-pencil-4", _cyclic(3, (3, 2, 1))),
    K3FamilySpec("quasi-diagonal-quartic", "quartic", 1, ("lam",),
                 (((4, 0, 0, 0), 1, None), ((1, 3, 0, 0), 1, None), ((0, 0, 4, 0), 1, None),
                  ((0, 0, 0, 4), 1, None), ((1, 1, 1, 1), -12, "lam")),
                 12, (2, 4, 3, 3), pencil_k=12, x_norm=Fraction(2 ** 10 * 3 ** 6),
                 lower=(FareyIndex(1, 3), FareyIndex(2, 2), FareyIndex(3, 2), FareyIndex(4)),
                 limit_upper=(FareyIndex(6), FareyIndex(12)),
                 limit_lower=(FareyIndex(1, 2), FareyIndex(2), FareyIndex(3)), min_prime=5),
    K3FamilySpec("quasi-diagonal-sextic", "double-sextic", 2, ("lam",),
                 (((6, 0, 0), 1, None), ((1, 5, 0), 1, None), ((0, 0, 6), 1, None),
                  ((2, 2, 2), -15, "lam")),
                 15, (4, 6, 5), pencil_k=15, x_norm=Fraction(4 ** 4 * 5 ** 5 * 6 ** 6),
                 lower=(FareyIndex(1, 2), FareyIndex(2, 2), FareyIndex(3), FareyIndex(4),
                        FareyIndex(5), FareyIndex(6)),
                 limit_upper=(FareyIndex(10), FareyIndex(30)),
                 limit_lower=(FareyIndex(1, 2), FareyIndex(2), FareyIndex(3), FareyIndex(4),
                              FareyIndex(5)), min_prime=7),
]}


def get_family(family_id: str) -> K3FamilySpec:
    try:
        return CATALOG[family_id]
    except KeyError:
        raise DomainError(f"unknown family {family_id!r}; known: {sorted(CATALOG)}") from None


# ---------------------------------------------------------------------------
# Coefficient generators


def _param(params: Mapping, name: str):
    if name not in params:
        raise DomainError(f"missing parameter {name!r}")
    return params[name]


def c_hat(spec: K3FamilySpec, params: Mapping):
    acc = 1
    for name in spec.c_names:
        acc = acc * _param(params, name)
    return acc


def power_count(spec: K3FamilySpec, m: int) -> int:
    """Power of the defining polynomial whose coefficient gives a(m)."""
    top = spec.stride * m
    if spec.kind == "double-sextic":
        return top // 2
    return top


def _core_terms(spec: K3FamilySpec, M: int):
    """(n, parts) for each non-zero term of the closed-form sum at power M."""
    if not spec.is_pencil:
        if M % spec.core_top:
            return
        n = M // spec.core_top
        yield n, [d * n for d in spec.core_parts]
        return
    for n in range(M // spec.core_top + 1):
        yield n, [M - spec.core_top * n] + [d * n for d in spec.core_parts]


def family_log_coeff(spec: K3FamilySpec, params: Mapping, m: int, N: int,
                     method: str = "sum") -> PadicInt:
    """a(m) mod p^N; params map names to PadicInt (all at the same prime).

    ``method="pfq"`` uses the terminating hypergeometric expression and
    needs a unit lambda.
    """
    if m < 0:
        raise DomainError("coefficient index must be non-negative")
    p = _prime_of(params)
    if method == "pfq":
        return _log_coeff_pfq(spec, params, m, N, p)
    if method != "sum":
        raise DomainError(f"unknown method {method!r}")
    mod = p ** N
    if spec.id == "jacobi-quartic":
        t = factorial_table(p, N, 2 * m)
        c = t.multinomial(2 * m, (m, m))
        return PadicInt(p, N, c * c)
    M = power_count(spec, m)
    t = factorial_table(p, N, M)
    ch = int(c_hat(spec, params)) % mod if spec.c_names else 1
    lam_term = 0
    if spec.is_pencil:
        lam_term = (-spec.pencil_k * int(_param(params, "lam"))) % mod
    acc = 0
    for n, parts in _core_terms(spec, M):
        top = sum(parts)
        term = t.multinomial(top, parts)
        if spec.is_pencil:
            term = term * pow(lam_term, M - spec.core_top * n, mod)
        acc += term * pow(ch, n, mod)
    return PadicInt(p, N, acc)


def family_log_coeff_exact(spec: K3FamilySpec, params: Mapping[str, int], m: int) -> int:
    """a(m) as an exact integer at integer parameter values."""
    if spec.id == "jacobi-quartic":
        return math.comb(2 * m, m) ** 2
    M = power_count(spec, m)
    ch = int(c_hat(spec, params)) if spec.c_names else 1
    acc = 0
    for n, parts in _core_terms(spec, M):
        term = _multinomial_exact(sum(parts), parts)
        if spec.is_pencil:
            term *= (-spec.pencil_k * int(_param(params, "lam"))) ** (M - spec.core_top * n)
        acc += term * ch ** n
    return acc


def _multinomial_exact(top: int, parts: Sequence[int]) -> int:
    acc = 1
    rest = top
    for q in parts:
        acc *= math.comb(rest, q)
        rest -= q
    return acc


def _prime_of(params: Mapping) -> int:
    for v in params.values():
        if isinstance(v, PadicInt):
            return v.p
    if "p" in params:
        return params["p"]
    raise DomainError("parameters carry no prime; pass PadicInt values")


def pencil_hgparams(spec: K3FamilySpec, m: int) -> HGParams:
    j = spec.core_top
    upper = tuple(Fraction(-m + i, j) for i in range(j))
    return HGParams(upper, tuple(expand_indices(spec.lower)))


def pencil_argument(spec: K3FamilySpec, params: Mapping):
    """The hypergeometric argument c / (x_norm * lam^j)."""
    lam = _param(params, "lam")
    ch = c_hat(spec, params) if spec.c_names else lam * 0 + 1
    return ch * (lam ** spec.core_top * spec.x_norm).inverse()


def _log_coeff_pfq(spec, params, m, N, p) -> PadicInt:
    if not spec.is_pencil:
        raise UnsupportedFamily(f"{spec.id} has no pFq pencil expression")
    lam = _param(params, "lam")
    if not lam.is_unit():
        raise DomainError("the pFq route needs a unit lambda")
    M = power_count(spec, m)
    z = pencil_argument(spec, params)
    try:
        val = pfq_terminating(pencil_hgparams(spec, M), z)
    except DomainError as exc:
        raise IntegralityError(f"pFq coefficient not {p}-integral: {exc}") from exc
    return (lam * (-spec.pencil_k)) ** M * val


def x_line_kappa(spec: K3FamilySpec) -> Fraction:
    """A_m(x) = sum_n multinomial * kappa^n * x^n with kappa = x_norm * (-k)^(-j)."""
    return spec.x_norm / Fraction(-spec.pencil_k) ** spec.core_top


def x_line_coefficients(spec: K3FamilySpec, M: int, p: int, N: int) -> list[int]:
    """Coefficients of A at power M as a polynomial in x, reduced mod p^N."""
    if not spec.is_pencil:
        raise UnsupportedFamily(f"{spec.id} is not a pencil")
    kappa = x_line_kappa(spec)
    mod = p ** N
    if kappa.denominator % p == 0 or kappa.numerator % p == 0:
        raise DomainError(f"p = {p} divides the x-normalization of {spec.id}")
    k = kappa.numerator * pow(kappa.denominator, -1, mod) % mod
    t = factorial_table(p, N, M)
    out = []
    kn = 1
    for n, parts in _core_terms(spec, M):
        out.append(t.multinomial(M, parts) * kn % mod)
        kn = kn * k % mod
    return out


def x_line_coeff(spec: K3FamilySpec, x: PadicInt, m: int) -> PadicInt:
    """A_m(x) for the family index m: the lambda-free normalized coefficient."""
    coeffs = x_line_coefficients(spec, power_count(spec, m), x.p, x.N)
    acc = 0
    mod = x.modulus
    for c in reversed(coeffs):
        acc = (acc * x.value + c) % mod
    return PadicInt(x.p, x.N, acc)


# ---------------------------------------------------------------------------
# Independent oracle


def _solutions(monos: Sequence[Sequence[int]], count: int, target: Sequence[int]):
    """All (k_1..k_r) >= 0 with sum k = count and sum k_i * monos[i] = target."""
    r = len(monos)
    ks = [0] * r

    def rec(i: int, left: int, rem: list[int]):
        if i == r - 1:
            e = monos[i]
            if all(left * e[v] == rem[v] for v in range(len(rem))):
                ks[i] = left
                yield tuple(ks)
            return
        e = monos[i]
        bound = left
        for v, ev in enumerate(e):
            if ev:
                bound = min(bound, rem[v] // ev)
        for k in range(bound + 1):
            ks[i] = k
            yield from rec(i + 1, left - k, [rem[v] - k * e[v] for v in range(len(rem))])

    yield from rec(0, count, list(target))


def form_coefficient(monomials, values: Sequence[int], power: int, target: Sequence[int]) -> int:
    """Coefficient of T^target in (sum values[i] * T^monomials[i])^power, exact."""
    fact = math.factorial
    total = 0
    for ks in _solutions(monomials, power, target):
        term = fact(power)
        for k, v in zip(ks, values):
            term = term // fact(k) * v ** k if k else term
        total += term
    return total


def monomial_values(spec: K3FamilySpec, params: Mapping) -> list[int]:
    vals = []
    for _, const, name in spec.monomials:
        v = const
        if name is not None:
            v *= int(_param(params, name))
        vals.append(v)
    return vals


def multinomial_oracle(spec: K3FamilySpec, params: Mapping, m: int) -> int:
    """a(m) read off the defining polynomial by exhaustive exponent solving."""
    if spec.kind == "elliptic":
        raise UnsupportedFamily("the Jacobi quartic logarithm comes from an elliptic "
                                "fibration; use the Vandermonde cross-check instead")
    monos = [e for e, _, _ in spec.monomials]
    vals = monomial_values(spec, params)
    nv = len(monos[0])
    if spec.kind == "quartic":
        M = spec.stride * m
        return form_coefficient(monos, vals, M, [M] * nv)
    M = spec.stride * m // 2
    return form_coefficient(monos, vals, M, [2 * M] * nv)


def limit_series_coeffs(spec: K3FamilySpec, R: int) -> list[Fraction]:
    """First R coefficients of the p-adic limit series of the family."""
    return pfq_coefficients(spec.limit_params(), R)
