"""Newton polygons, slope factorization and power structure of Weil polynomials.

Slopes are those of P(T) = prod (1 - alpha_i T) over Z_p, i.e. the
valuations v_p(alpha_i).  With q = p^a they are split by the normalized
value v_p(alpha)/a into the parts below 1, equal to 1 and above 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exact import DomainError, FpPoly, fp_factor, is_irreducible, primes_below
from .padic import PadicInt, PrecisionError, vp


@dataclass(frozen=True)
class WeilPoly:
    """Integer polynomial with constant term 1, low degree first; q = p^a."""

    coeffs: tuple[int, ...]
    p: int
    a: int = 1

    def __post_init__(self):
        c = [int(x) for x in self.coeffs]
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        if not c or c[0] != 1:
            raise DomainError("a Weil polynomial must have constant term 1")
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def q(self) -> int:
        return self.p ** self.a

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1


@dataclass(frozen=True)
class NewtonPolygonData:
    vertices: tuple[tuple[int, int], ...]
    slopes: tuple[tuple[Fraction, int], ...]

    def to_json(self) -> dict:
        return {"vertices": [list(v) for v in self.vertices],
                "slopes": [[str(s), m] for s, m in self.slopes]}


def _coeff_list(f) -> list[int]:
    if isinstance(f, WeilPoly):
        return list(f.coeffs)
    if isinstance(f, FpPoly):
        return list(f.coeffs)
    return [int(c) for c in f]


def newton_polygon(f, p: int) -> NewtonPolygonData:
    """Lower convex hull of the points (i, v_p(c_i)) over non-zero c_i."""
    c = _coeff_list(f)
    pts = [(i, vp(x, p)) for i, x in enumerate(c) if x]
    if not pts:
        raise DomainError("Newton polygon of the zero polynomial")
    hull: list[tuple[int, int]] = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point if it lies on or above the chord
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    slopes = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slopes.append((Fraction(y2 - y1, x2 - x1), x2 - x1))
    return NewtonPolygonData(tuple(hull), tuple(slopes))


# ---------------------------------------------------------------------------
# Slope factorization over Q_p


class _Qp:
    """Fractions with p-power denominators, rounded to absolute precision p^W."""

    def __init__(self, p: int, W: int):
        self.p, self.W = p, W

    def round(self, x: Fraction) -> Fraction:
        if x == 0:
            return x
        p = self.p
        e = vp(x.denominator, p) if x.denominator % p == 0 else 0
        unit_den = x.denominator // p ** e
        mod = p ** (self.W + e)
        n = x.numerator * pow(unit_den, -1, mod) % mod
        if n > mod // 2:
            n -= mod
        return Fraction(n, p ** e)

    def poly(self, c: Sequence[Fraction]) -> list[Fraction]:
        out = [self.round(Fraction(x)) for x in c]
        while len(out) > 1 and out[-1] == 0:
            out.pop()
        return out


def _pmul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _psub(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]


def _padd(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def _pdivmod(a, b):
    a = list(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        return [Fraction(0)], a
    q = [Fraction(0)] * (len(a) - db)
    inv = 1 / Fraction(b[-1])
    for k in range(len(a) - 1 - db, -1, -1):
        c = a[k + db] * inv
        q[k] = c
        if c:
            for j in range(db + 1):
                a[k + j] -= c * b[j]
    return q, a[:db] or [Fraction(0)]


def _min_val(c, p) -> int | None:
    vals = [vp(x.numerator, p) - vp(x.denominator, p) for x in c if x]
    return min(vals) if vals else None


def _split(f: list[int], k: int, p: int, N: int, max_iter: int = 400):
    """f = A B with deg A = k carrying the first k slopes, A(0) = B(0) = 1."""
    total = sum(abs(vp(x, p)) for x in f if x) + 2
    W = N + total + 4
    Q = _Qp(p, W)
    fr = [Fraction(x) for x in f]
    A = Q.poly(fr[: k + 1])
    B = [Fraction(1)]
    for _ in range(max_iter):
        E = Q.poly(_psub(fr, _pmul(A, B)))
        v = _min_val(E, p)
        if v is None or v >= W - total:
            break
        q, r = _pdivmod(E, A)
        B = Q.poly(_padd(B, q))
        A = Q.poly(_padd(A, r))
    else:
        raise PrecisionError(f"slope splitting did not converge at working precision {W}",
                             needed=2 * N)
    a0, b0 = A[0], B[0]
    A = [x / a0 for x in A]
    B = [x * a0 for x in B]
    if b0 * a0 == 0:
        raise PrecisionError("degenerate constant term during splitting", needed=2 * N)
    mod = p ** N
    out = []
    for poly in (A, B):
        ints = []
        for x in poly:
            if x.denominator % p == 0:
                raise PrecisionError("factor is not p-integral at this precision", needed=2 * N)
            ints.append(x.numerator * pow(x.denominator, -1, mod) % mod)
        out.append(ints)
    return out


def _mul_mod(a, b, mod):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % mod
    return out


def _trim_mod(c, mod):
    c = [x % mod for x in c]
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return c


@dataclass(frozen=True)
class SlopeFactorization:
    """P = P_lt * P_eq * P_gt mod p^N; coefficient tuples of PadicInt."""

    p: int
    a: int
    N: int
    lt: tuple[PadicInt, ...]
    eq: tuple[PadicInt, ...]
    gt: tuple[PadicInt, ...]
    polygon: NewtonPolygonData = field(compare=False)

    @property
    def h(self) -> int:
        return len(self.lt) - 1

    def part_values(self) -> dict[str, list[int]]:
        return {"lt": [c.value for c in self.lt], "eq": [c.value for c in self.eq],
                "gt": [c.value for c in self.gt]}

    def to_json(self) -> dict:
        raw = [[str(s), m] for s, m in self.polygon.slopes]
        norm = [[str(s / self.a), m] for s, m in self.polygon.slopes]
        return {"p": self.p, "a": self.a, "N": self.N, "h": self.h,
                "raw_slopes": raw, "normalized_slopes": norm, "parts": self.part_values()}


def slope_factorize(f: WeilPoly | Sequence[int], p: int | None = None, N: int = 6,
                    a: int | None = None) -> SlopeFactorization:
    """Split f by normalized slope (< 1, = 1, > 1) and verify the result mod p^N."""
    if isinstance(f, WeilPoly):
        p = f.p if p is None else p
        a = f.a if a is None else a
        coeffs = list(f.coeffs)
    else:
        coeffs = [int(c) for c in f]
        a = 1 if a is None else a
        WeilPoly(tuple(coeffs), p, a)
    if p is None:
        raise DomainError("prime required")
    poly = newton_polygon(coeffs, p)
    mod = p ** N
    # break points between the three groups
    deg_lt = sum(m for s, m in poly.slopes if s < a)
    deg_eq = sum(m for s, m in poly.slopes if s == a)
    # dividing by a leading coefficient of valuation y costs y digits downstream
    Nw = N + max(y for _, y in poly.vertices) + 2
    rest = coeffs
    parts = []
    for k in (deg_lt, deg_eq):
        if k == 0:
            parts.append([1])
            continue
        if k == len(rest) - 1:
            parts.append([x % mod for x in rest])
            rest = [1]
            continue
        A, B = _split(rest, k, p, Nw)
        parts.append(A)
        rest = _signed(B, p ** Nw)
    parts.append([x % mod for x in rest])
    # keep each part at its polygon degree; high-slope coefficients may vanish mod p^N
    degrees = (deg_lt, deg_eq, len(coeffs) - 1 - deg_lt - deg_eq)
    parts = [(x + [0] * (d + 1))[: d + 1] for x, d in zip(parts, degrees)]
    parts = [[c % mod for c in x] for x in parts]
    product = _mul_mod(_mul_mod(parts[0], parts[1], mod), parts[2], mod)
    if _trim_mod(product, mod) != _trim_mod(coeffs, mod):
        raise PrecisionError("slope factors do not multiply back to the input", needed=2 * N)
    lt, eq, gt = (tuple(PadicInt(p, N, c) for c in part) for part in parts)
    sf = SlopeFactorization(p, a, N, lt, eq, gt, poly)
    _check_supports(sf, a)
    return sf


def _signed(c, mod):
    return [x - mod if x > mod // 2 else x for x in c]


def _check_supports(sf: SlopeFactorization, a: int):
    """Slope ranges of the parts, read from coefficients known mod p^N.

    A coefficient that vanishes mod p^N only says v >= N, so it can confirm
    "above the line y = a i" when N > a i and is otherwise inconclusive.
    """
    N, p = sf.N, sf.p

    def val(c: PadicInt) -> int | None:
        return vp(c.value, p) if c.value else None

    for name, part in (("lt", sf.lt), ("eq", sf.eq)):
        d = len(part) - 1
        if d == 0:
            continue
        vd = val(part[-1])
        if vd is None:
            raise PrecisionError(f"leading coefficient of P_{name} vanished mod p^N",
                                 needed=N + a * d)
        target_ok = (vd < a * d) if name == "lt" else (vd == a * d)
        if not target_ok:
            raise PrecisionError(f"P_{name} has slopes outside its range", needed=2 * N)
        for i in range(1, d):
            v = val(part[i])
            if name == "eq" and v is not None and v < a * i:
                raise PrecisionError("P_eq has a slope below 1", needed=2 * N)
        if name == "lt":
            # last slope < a: every point (i, v_i) lies above the line into (d, vd) of slope a
            for i in range(d):
                v = val(part[i])
                if v is not None and vd - v >= a * (d - i):
                    raise PrecisionError("P_lt has a slope >= 1", needed=2 * N)
    for i in range(1, len(sf.gt)):
        v = val(sf.gt[i])
        if v is not None and v <= a * i:
            raise PrecisionError("P_gt has a slope <= 1", needed=2 * N)


def functional_equation_check(sf: SlopeFactorization, q: int | None = None,
                              h: int | None = None) -> dict:
    """Solve P_gt(T) = c T^h P_lt(1/(q^2 T)) for c and test it mod p^N.

    Comparing coefficients of T^(h-i) gives d_(h-i) b_h = q^(2(h-i)) b_i,
    where b, d are the coefficients of P_lt, P_gt; that cross-multiplied form
    is what gets checked, and c = q^(2h) / b_h.
    """
    p, N = sf.p, sf.N
    q = p ** sf.a if q is None else q
    if h is None:
        h = sf.h
    if len(sf.lt) - 1 != h or len(sf.gt) - 1 != h:
        raise DomainError(f"degree mismatch: deg P_lt = {len(sf.lt) - 1}, "
                          f"deg P_gt = {len(sf.gt) - 1}, h = {h}")
    if h == 0:
        return {"holds": True, "c": 1, "c_valuation": 0, "c_modulus": None, "h": 0}
    mod = p ** N
    b = [c.value for c in sf.lt]
    d = [c.value for c in sf.gt]
    holds = all((d[h - i] * b[h] - q ** (2 * (h - i)) * b[i]) % mod == 0 for i in range(h + 1))
    if b[h] % mod == 0:
        raise PrecisionError("leading coefficient of P_lt vanishes mod p^N", needed=N + h)
    vb = vp(b[h], p)
    vq = vp(q, p)
    cval = 2 * h * vq - vb
    # c = p^cval * (q-unit)^(2h) / (b_h-unit), the unit known mod p^(N - vb)
    known = N - vb
    unit = (q // p ** vq) ** (2 * h) * pow(b[h] // p ** vb, -1, p ** known) % p ** known
    if cval >= 0:
        c_mod = p ** (cval + known)
        c = unit * p ** cval % c_mod
        c = c - c_mod if c > c_mod // 2 else c
        return {"holds": holds, "c": c, "c_valuation": cval, "c_modulus": c_mod, "h": h}
    return {"holds": holds, "c": str(Fraction(unit, p ** -cval)), "c_valuation": cval,
            "c_modulus": None, "h": h}


# ---------------------------------------------------------------------------
# Power structure


def _series_root(R: list[int], r: int, n: int) -> list[Fraction]:
    """First n + 1 coefficients of R^(1/r) for R(0) = 1."""
    alpha = Fraction(1, r)
    q = [Fraction(1)]
    for m in range(1, n + 1):
        acc = Fraction(0)
        for k in range(1, min(m, len(R) - 1) + 1):
            acc += (alpha * k - (m - k)) * R[k] * q[m - k]
        q.append(acc / m)
    return q


def _int_pow(a: list[int], e: int) -> list[int]:
    out = [1]
    for _ in range(e):
        nxt = [0] * (len(out) + len(a) - 1)
        for i, x in enumerate(out):
            for j, y in enumerate(a):
                nxt[i + j] += x * y
        out = nxt
    return out


def _subset_sums(degrees: list[int]) -> set[int]:
    sums = {0}
    for d in degrees:
        sums |= {s + d for s in sums}
    return sums


@dataclass(frozen=True)
class PowerStructure:
    Q: tuple[int, ...]
    r: int
    verdict: str  # "certified", "reducible" or "probable"
    evidence: dict

    def to_json(self) -> dict:
        return {"Q": list(self.Q), "r": self.r, "irreducibility": self.verdict,
                "evidence": self.evidence}


def irreducibility_verdict(Q: Sequence[int], n_primes: int = 25) -> tuple[str, dict]:
    """Irreducibility over Q from reductions mod auxiliary primes.

    "certified" when one reduction is irreducible, or when the factor-degree
    patterns of several reductions leave no proper subset-sum in common;
    "reducible" when Q has a rational root; otherwise "probable".
    """
    Q = [int(c) for c in Q]
    n = len(Q) - 1
    if n <= 1:
        return "certified", {"reason": "degree <= 1"}
    if _rational_root(Q) is not None:
        return "reducible", {"rational_root": str(_rational_root(Q))}
    common = set(range(n + 1))
    patterns = {}
    used = 0
    for ell in primes_below(10 ** 4):
        if used >= n_primes:
            break
        if Q[-1] % ell == 0:
            continue
        f = FpPoly(ell, tuple(Q))
        if f.derivative().is_zero():
            continue
        fac = fp_factor(f)
        if any(m > 1 for _, m in fac.factors):
            continue
        used += 1
        degs = fac.degrees()
        patterns[ell] = degs
        if len(degs) == 1:
            return "certified", {"prime": ell, "degrees": degs}
        common &= _subset_sums(degs)
        if common == {0, n}:
            return "certified", {"degree_patterns": {str(k): v for k, v in patterns.items()}}
    return "probable", {"degree_patterns": {str(k): v for k, v in patterns.items()}}


def _rational_root(Q: list[int]) -> Fraction | None:
    lead, const = Q[-1], Q[0]
    if const == 0:
        return Fraction(0)
    if abs(lead) > 10 ** 6 or abs(const) > 10 ** 6:
        return None

    def divisors(m):
        m = abs(m)
        return [d for d in range(1, m + 1) if m % d == 0]

    for num in divisors(const):
        for den in divisors(lead):
            for sgn in (1, -1):
                x = Fraction(sgn * num, den)
                if sum(c * x ** i for i, c in enumerate(Q)) == 0:
                    return x
    return None


def power_structure(R: WeilPoly | Sequence[int]) -> PowerStructure:
    """Largest r with R = Q^r exactly, and an irreducibility verdict for Q."""
    coeffs = list(R.coeffs) if isinstance(R, WeilPoly) else [int(c) for c in R]
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    if coeffs[0] != 1:
        raise DomainError("power structure expects constant term 1")
    n = len(coeffs) - 1
    best_Q, best_r = coeffs, 1
    for r in sorted((d for d in range(2, n + 1) if n % d == 0), reverse=True):
        root = _series_root(coeffs, r, n // r)
        if any(c.denominator != 1 for c in root):
            continue
        cand = [int(c) for c in root]
        if _int_pow(cand, r) == coeffs:
            best_Q, best_r = cand, r
            break
    verdict, evidence = irreducibility_verdict(best_Q)
    return PowerStructure(tuple(best_Q), best_r, verdict, evidence)


# ---------------------------------------------------------------------------
# Admissible exponents


def possible_r(tau: int, h: int) -> set[int]:
    """{r : r | h, r | tau, tau / r even} for 1 <= h <= tau / 2."""
    if tau < 2 or tau % 2:
        raise DomainError("tau must be an even integer >= 2")
    if h < 1 or h > tau // 2:
        raise DomainError(f"h = {h} is outside 1..{tau // 2}")
    return {r for r in range(1, h + 1) if h % r == 0 and tau % r == 0 and (tau // r) % 2 == 0}


def r_table(tau_max: int = 20) -> dict[int, dict[int, list[int]]]:
    return {tau: {h: sorted(possible_r(tau, h)) for h in range(1, tau // 2 + 1)}
            for tau in range(2, tau_max + 1, 2)}


__all__ = ["NewtonPolygonData", "PowerStructure", "SlopeFactorization", "WeilPoly",
           "functional_equation_check", "irreducibility_verdict", "newton_polygon",
           "possible_r", "power_structure", "r_table", "slope_factorize"]
