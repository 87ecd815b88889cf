from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from k3fgl.exact import DomainError
from k3fgl.padic import (
    AtLeast,
    PadicInt,
    PrecisionError,
    factorial_table,
    padic_gamma,
    teichmuller,
    vp,
    vp_factorial,
)


def test_valuation_examples():
    assert PadicInt(5, 4, 75).valuation() == 2
    assert PadicInt(5, 4, 0).valuation() == AtLeast(4)
    assert str(PadicInt(5, 4, 0).valuation()) == ">=4"
    assert PadicInt(13, 3, 13 * 7).valuation() == 1


def test_teichmuller_examples():
    for p, N in [(5, 1), (5, 6), (13, 4)]:
        assert teichmuller(1, p, N).value == 1
    w = teichmuller(2, 5, 2)
    assert w.value == 7
    assert pow(7, 4, 25) == 1


@pytest.mark.parametrize("p", [5, 13])
@pytest.mark.parametrize("N", [1, 3, 6])
def test_teichmuller_is_root_of_unity(p, N):
    for c in range(1, p):
        w = teichmuller(c, p, N)
        assert (w ** (p - 1)).value == 1
        assert w.residue() == c


def test_gamma_examples():
    assert padic_gamma(1, 5, 4).value == 5 ** 4 - 1
    assert padic_gamma(6, 5, 2).value == 24


@pytest.mark.parametrize("x", [Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)])
def test_gamma_recurrence_at_units(x):
    p, N = 13, 4
    lhs = padic_gamma(x + 1, p, N)
    rhs = -PadicInt.from_fraction(x, p, N) * padic_gamma(x, p, N)
    assert lhs == rhs


def test_gamma_recurrence_at_multiples_of_p():
    # Gamma_p(x + 1) = -Gamma_p(x) when p divides x
    p, N = 7, 3
    assert padic_gamma(8, p, N) == -padic_gamma(7, p, N)


@given(st.integers(1, 10 ** 6), st.sampled_from([3, 5, 7, 13]))
def test_vp_matches_division(n, p):
    v = vp(n, p)
    assert n % p ** v == 0 and n % p ** (v + 1) != 0


@given(st.integers(0, 500), st.sampled_from([2, 3, 5, 7]))
def test_legendre_formula(n, p):
    import math
    assert vp_factorial(n, p) == (vp(math.factorial(n), p) if n > 1 else 0)


@given(st.integers(0, 10 ** 8), st.integers(0, 10 ** 8))
def test_ring_ops_mod_pn(a, b):
    p, N = 7, 5
    x, y = PadicInt(p, N, a), PadicInt(p, N, b)
    m = p ** N
    assert (x + y).value == (a + b) % m
    assert (x * y).value == a * b % m
    assert (x - y).value == (a - b) % m


@given(st.integers(1, 10 ** 8).filter(lambda a: a % 11))
def test_inverse(a):
    x = PadicInt(11, 4, a)
    assert (x * x.inverse()).value == 1


def test_inverse_of_non_unit_raises():
    with pytest.raises(ZeroDivisionError):
        PadicInt(5, 3, 10).inverse()


def test_exact_div_and_precision_loss():
    x = PadicInt(5, 4, 50)
    q = x.exact_div(5)
    assert q.N == 3 and q.value == 10
    with pytest.raises(PrecisionError):
        PadicInt(5, 2, 0).exact_div(25)
    with pytest.raises(DomainError):
        PadicInt(5, 4, 7).exact_div(5)


def test_reduce_cannot_raise_precision():
    with pytest.raises(PrecisionError) as info:
        PadicInt(5, 2, 3).reduce(4)
    assert info.value.needed == 4


def test_mixed_primes_rejected():
    with pytest.raises(DomainError):
        PadicInt(5, 2, 1) + PadicInt(7, 2, 1)


def test_equality_uses_common_precision():
    assert PadicInt(5, 2, 3) == PadicInt(5, 4, 3 + 25 * 7)
    assert PadicInt(5, 2, 3) != PadicInt(5, 2, 4)


def test_from_fraction_requires_integrality():
    assert PadicInt.from_fraction(Fraction(1, 3), 5, 3).value * 3 % 125 == 1
    with pytest.raises(DomainError):
        PadicInt.from_fraction(Fraction(1, 5), 5, 3)


def test_factorial_table_multinomial():
    import math
    p, N = 5, 4
    table = factorial_table(p, N, 40)
    for top, parts in [(12, (2, 4, 3, 3)), (20, (5, 5, 5, 5)), (9, (3, 3, 3))]:
        exact = math.factorial(top)
        for k in parts:
            exact //= math.factorial(k)
        assert table.multinomial(top, parts) == exact % p ** N
