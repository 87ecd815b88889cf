from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from k3fgl.exact import DomainError
from k3fgl.weil import (
    WeilPoly,
    functional_equation_check,
    irreducibility_verdict,
    newton_polygon,
    possible_r,
    power_structure,
    r_table,
    slope_factorize,
)
from weil_cases import mul, power_cases, slope_cases


def test_newton_examples():
    assert newton_polygon([1, -1], 7).slopes == ((0, 1),)
    assert newton_polygon([1, -26, 25], 5).slopes == ((0, 1), (2, 1))
    for p in (3, 5, 11):
        assert newton_polygon([1, -p], p).slopes == ((1, 1),)


@settings(max_examples=40)
@given(st.lists(st.integers(-500, 500), min_size=1, max_size=8), st.sampled_from([2, 3, 5]))
def test_newton_hull_is_below_points(tail, p):
    coeffs = [1] + tail
    np_ = newton_polygon(coeffs, p)
    assert sum(m for _, m in np_.slopes) == max(i for i, c in enumerate(coeffs) if c)
    slopes = [s for s, _ in np_.slopes]
    assert slopes == sorted(slopes)
    from k3fgl.padic import vp
    for i, c in enumerate(coeffs):
        if not c:
            continue
        # height of the hull over i
        x0, y0 = np_.vertices[0]
        for (x1, y1), (x2, y2) in zip(np_.vertices, np_.vertices[1:]):
            if x1 <= i <= x2:
                assert vp(c, p) >= y1 + Fraction(y2 - y1, x2 - x1) * (i - x1)


def test_single_slope_input():
    sf = slope_factorize(WeilPoly((1, 3, 1), 5), N=6)
    assert sf.part_values() == {"lt": [1, 3, 1], "eq": [1], "gt": [1]}


def test_two_slope_example():
    sf = slope_factorize(WeilPoly((1, -26, 25), 5), N=6)
    m = 5 ** 6
    assert sf.part_values() == {"lt": [1, m - 1], "eq": [1], "gt": [1, m - 25]}
    fe = functional_equation_check(sf)
    assert fe["holds"] and fe["c"] == -25 and fe["h"] == 1


def test_supersingular_style_input():
    sf = slope_factorize(WeilPoly((1, -10, 25), 5), N=6)
    assert sf.h == 0
    assert functional_equation_check(sf) == {"holds": True, "c": 1, "c_valuation": 0,
                                             "c_modulus": None, "h": 0}


def test_mirror_gives_equal_degrees():
    lt = [1, -3]
    gt = [1, -3 * 25]
    sf = slope_factorize(WeilPoly(tuple(mul(lt, gt)), 5), N=6)
    assert len(sf.lt) == len(sf.gt) == 2


@pytest.mark.parametrize("case", slope_cases(12, seed=11), ids=lambda c: f"p{c.p}a{c.a}")
def test_constructed_slope_parts(case):
    sf = slope_factorize(WeilPoly(tuple(case.poly), case.p, case.a), N=6)
    mod = case.p ** 6
    assert sf.part_values() == {k: [x % mod for x in v]
                                for k, v in (("lt", case.lt), ("eq", case.eq), ("gt", case.gt))}
    fe = functional_equation_check(sf)
    assert fe["holds"]
    assert (fe["c"] - case.c) % fe["c_modulus"] == 0


def test_functional_equation_detects_wrong_mirror():
    sf = slope_factorize(WeilPoly(tuple(mul([1, 1, 1], [1, 50, 625])), 5), N=6)
    assert not functional_equation_check(sf)["holds"]


def test_weil_poly_requires_unit_constant():
    with pytest.raises(DomainError):
        WeilPoly((2, 1), 5)


@pytest.mark.parametrize("Q,r", power_cases())
def test_power_structure_recovers(Q, r):
    R = [1]
    for _ in range(r):
        R = mul(R, Q)
    ps = power_structure(R)
    assert (list(ps.Q), ps.r) == (Q, r)


def test_power_structure_examples():
    assert power_structure(mul([1, -1, 1], [1, -1, 1])).Q == (1, -1, 1)
    cube = mul(mul([1, -3, 1], [1, -3, 1]), [1, -3, 1])
    assert power_structure(cube).r == 3
    ps = power_structure([1, 1, 2, 3])
    assert ps.r == 1 and ps.verdict == "certified"


def test_irreducibility_verdicts():
    assert irreducibility_verdict([1, 0, 1])[0] == "certified"
    assert irreducibility_verdict([-1, 0, 1])[0] == "reducible"
    # x^4 + 1 splits mod every prime but is irreducible over Q
    verdict, ev = irreducibility_verdict([1, 0, 0, 0, 1])
    assert verdict == "probable"
    assert all(sorted(d) != [4] for d in ev["degree_patterns"].values())


def test_possible_r_examples():
    assert possible_r(2, 1) == {1}
    assert possible_r(18, 6) == {1, 3}
    assert possible_r(20, 10) == {1, 2, 5, 10}
    with pytest.raises(DomainError):
        possible_r(7, 1)
    with pytest.raises(DomainError):
        possible_r(8, 5)


def test_r_table_shape():
    t = r_table(20)
    assert sorted(t) == list(range(2, 21, 2))
    assert sum(len(row) for row in t.values()) == 55
    assert all(1 in r for row in t.values() for r in row.values())
