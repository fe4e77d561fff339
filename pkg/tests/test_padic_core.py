import pytest
from hypothesis import given, settings, strategies as st

from padic_iwasawa.padic import (PadicScalar, PrecisionError, invert, log1p_unit, teichmuller,
                                 vp, vp_bounded)

import oracles

PRIMES = [3, 5, 7, 11, 13]


def test_teichmuller_examples():
    assert teichmuller(1, 5, 3).residue == 1
    assert teichmuller(4, 5, 3).residue == 124
    assert teichmuller(2, 5, 3).residue == 57


def test_teichmuller_rejects_multiples_of_p():
    with pytest.raises(ValueError):
        teichmuller(10, 5, 3)


@pytest.mark.parametrize("p", PRIMES)
def test_teichmuller_matches_iterated_power(p):
    N = 6
    for a in range(1, p):
        w = teichmuller(a, p, N).residue
        assert w == oracles.teichmuller(a, p, N)
        assert pow(w, p - 1, p**N) == 1
        assert w % p == a


def test_log_examples():
    assert log1p_unit(PadicScalar(5, 1, 6)).residue == 0
    # 5 - 25/2 + 125/3 mod 625
    assert log1p_unit(PadicScalar(5, 6, 4), 4).residue == 555


@pytest.mark.parametrize("p", PRIMES)
def test_log_matches_series_oracle(p):
    N = 8
    for y in (p, 2 * p, p * p, (p - 1) * p, 7 * p + p * p):
        got = log1p_unit(PadicScalar(p, 1 + y, N), N).residue
        assert got == oracles.log1p_series(y, p, N)


def test_log_requires_principal_unit():
    with pytest.raises(ValueError):
        log1p_unit(PadicScalar(5, 2, 4))


def test_invert_examples():
    assert invert(PadicScalar(5, 1, 4)).residue == 1
    assert invert(PadicScalar(5, 2, 4)).residue == 313
    with pytest.raises(ZeroDivisionError):
        invert(PadicScalar(5, 5, 4))


def test_valuations():
    assert vp(0, 5) is None
    assert vp(250, 5) == 3
    assert vp_bounded(0, 5, 7) == 7
    assert PadicScalar(5, 25, 4).unit_valuation == 2
    assert PadicScalar(5, 0, 4).unit_valuation is None


def test_precision_tracking_in_products():
    a = PadicScalar(5, 5, 4)    # valuation 1, known mod 5^4
    b = PadicScalar(5, 3, 4)
    assert (a * b).prec == 4
    assert (a * a).prec == 5


def test_precision_error_is_arithmetic_error():
    assert issubclass(PrecisionError, ArithmeticError)


# -- properties -----------------------------------------------------------

units = st.integers(min_value=0, max_value=10**6)


@settings(max_examples=60, deadline=None)
@given(p=st.sampled_from(PRIMES), a=units, b=units)
def test_log_is_a_homomorphism(p, a, b):
    N = 7
    u = PadicScalar(p, 1 + p * a, N + 2)
    v = PadicScalar(p, 1 + p * b, N + 2)
    lhs = log1p_unit(u * v, N).residue
    rhs = (log1p_unit(u, N).residue + log1p_unit(v, N).residue) % p**N
    assert lhs == rhs


@settings(max_examples=60, deadline=None)
@given(p=st.sampled_from(PRIMES), a=st.integers(1, 10**5), b=st.integers(1, 10**5))
def test_teichmuller_is_multiplicative(p, a, b):
    if a % p == 0 or b % p == 0:
        return
    N = 6
    wa, wb = teichmuller(a, p, N).residue, teichmuller(b, p, N).residue
    assert teichmuller(a * b, p, N).residue == wa * wb % p**N


@settings(max_examples=60, deadline=None)
@given(p=st.sampled_from(PRIMES), a=units)
def test_log_of_power(p, a):
    N = 6
    u = PadicScalar(p, 1 + p * a, N + 2)
    assert log1p_unit(u * u, N).residue == 2 * log1p_unit(u, N).residue % p**N


@settings(max_examples=60, deadline=None)
@given(p=st.sampled_from(PRIMES), x=st.integers(1, 10**9))
def test_invert_roundtrip(p, x):
    if x % p == 0:
        return
    s = PadicScalar(p, x, 9)
    assert (s * invert(s)).residue == 1
