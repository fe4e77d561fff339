import cmath
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from padic_iwasawa.characters import DirichletCharacter, enumerate_characters
from padic_iwasawa.cyclotomic import (CycloElement, DomainError, PadicCyclo, Tower, build_special,
                                      cyclotomic_poly, embed_root, euler_phi, field_log,
                                      galois_apply, gauss_sum, one_over_pi, relative_norm,
                                      special_element)
from padic_iwasawa.padic import PadicScalar, log1p_unit


def to_complex(x: CycloElement, k: int = 1) -> complex:
    z = cmath.exp(2j * cmath.pi * k / x.m)
    return sum(float(c) * z**i for i, c in enumerate(x.coeffs))


def random_element(m, coeffs):
    return CycloElement(m, coeffs[: euler_phi(m)] + [0] * max(0, euler_phi(m) - len(coeffs)))


@pytest.mark.parametrize("m", [1, 3, 4, 5, 8, 9, 12, 15, 25, 27])
def test_cyclotomic_poly_matches_sympy(m):
    x = sympy.symbols("x")
    ref = sympy.Poly(sympy.cyclotomic_poly(m, x), x).all_coeffs()[::-1]
    assert list(cyclotomic_poly(m)) == [int(c) for c in ref]


def test_embed_root_examples():
    for m in (3, 5, 9, 12):
        assert embed_root(m, 0) == CycloElement.one(m)
        total = CycloElement.zero(m)
        for k in range(m):
            total = total + embed_root(m, k)
        assert total.is_zero()
    assert embed_root(3, 1) + embed_root(3, 2) == CycloElement.from_rational(3, -1)


def test_galois_examples():
    m = 9
    x = embed_root(m, 1) * 3 + embed_root(m, 4) - Fraction(1, 2)
    assert galois_apply(1, x) == x
    assert galois_apply(m - 1, embed_root(m, 1)) == embed_root(m, m - 1)
    assert galois_apply(2, galois_apply(4, x)) == galois_apply(8, x)


coeff_lists = st.lists(st.integers(-20, 20), min_size=1, max_size=12)


@settings(max_examples=60, deadline=None)
@given(m=st.sampled_from([5, 7, 8, 9, 12, 25]), a=coeff_lists, b=coeff_lists)
def test_product_matches_complex_embedding(m, a, b):
    x, y = random_element(m, a), random_element(m, b)
    assert abs(to_complex(x * y) - to_complex(x) * to_complex(y)) < 1e-6 * (1 + abs(to_complex(x)) * abs(to_complex(y)))


@settings(max_examples=60, deadline=None)
@given(m=st.sampled_from([5, 7, 9, 12]), a=coeff_lists, k=st.integers(1, 100))
def test_galois_is_substitution(m, a, k):
    if sympy.gcd(k, m) != 1:
        return
    x = random_element(m, a)
    assert abs(to_complex(galois_apply(k, x)) - to_complex(x, k)) < 1e-6 * (1 + sum(map(abs, a)))


def test_relative_norm_identity_level():
    x = embed_root(9, 1) - 1
    assert relative_norm(x, 3, 1, 1, 1) == x


def test_relative_norm_hand_example():
    # prod_k (zeta_9 zeta_3^k - 1) = zeta_3 - 1 (expanded by hand: zeta_9^3 - 1)
    got = relative_norm(embed_root(9, 1) - 1, 3, 1, 1, 0)
    assert got == embed_root(3, 1) - 1


@pytest.mark.parametrize("p,d,n", [(3, 1, 2), (5, 2, 1), (7, 2, 1), (5, 4, 1)])
def test_norm_relation_all_levels(p, d, n):
    t = Tower(p, d, n)
    F = t.frobenius()
    for i in range(n + 1):
        # Frobenius twist F^(i-n) on zeta_{q_n}
        twist = pow(F, -(n - i) % (t.m), t.m) if d > 1 else 1
        x = galois_apply(twist, t.zeta_q(n)) - 1
        got = relative_norm(x, p, d, n, i)
        want = t.zeta_q_in_level(i) - 1
        assert got == want


def test_relative_norm_rejects_wrong_field():
    with pytest.raises(DomainError):
        relative_norm(embed_root(5, 1), 5, 1, 1, 0)


def test_gauss_sum_examples():
    triv = DirichletCharacter.trivial(1)
    assert gauss_sum(triv) == CycloElement.one(1)
    quad = [c for c in enumerate_characters(5) if c.order == 2][0]
    g = gauss_sum(quad)
    assert g * g == CycloElement.from_rational(g.m, 5)


@pytest.mark.parametrize("m", [3, 4, 5, 7, 8, 9, 11, 12, 13, 15, 16, 21])
def test_gauss_sum_norm_sweep(m):
    for chi in enumerate_characters(m):
        if not chi.is_primitive():
            continue
        g, h = gauss_sum(chi), gauss_sum(chi.conjugate())
        M = max(g.m, h.m)
        prod = g.embed(M) * h.embed(M) if g.m != h.m else g * h
        assert prod == CycloElement.from_rational(prod.m, chi.parity * chi.modulus)
        # complex oracle: |tau|^2 = f
        assert abs(abs(to_complex(g)) ** 2 - chi.modulus) < 1e-6


def test_gauss_sum_needs_primitive():
    chi = DirichletCharacter.trivial(5)
    with pytest.raises(DomainError):
        gauss_sum(chi)


def test_one_over_pi():
    x = one_over_pi(3, 0)
    assert x == (embed_root(3, 1) + embed_root(3, 2) * 2) * Fraction(1, 3)
    for p, n in ((3, 1), (5, 0), (7, 0), (5, 1)):
        assert one_over_pi(p, n) * (embed_root(p ** (n + 1), 1) - 1) == CycloElement.one(p ** (n + 1))


def test_special_elements():
    for p in (3, 5, 7):
        assert special_element("script_T", p, 0) == embed_root(p, 1)
        assert special_element("tilde_T", p, 0).is_zero()
    s = build_special("script_T", 3, 1, 2)
    assert s.value == embed_root(27, 1) + embed_root(27, 3) * Fraction(1, 3) + embed_root(27, 9) * Fraction(1, 9)
    with pytest.raises(DomainError):
        special_element("nonsense", 3, 0)


def _padic(x, p, digits=20):
    return PadicCyclo.from_exact(p, x, digits)


@pytest.mark.parametrize("p,n", [(3, 0), (3, 1), (5, 0), (7, 0)])
def test_field_log_kills_roots_of_unity(p, n):
    m = p ** (n + 1)
    assert field_log(_padic(embed_root(m, 1), p)).is_zero()
    assert field_log(_padic(embed_root(m, 1) * -1, p)).is_zero()


@pytest.mark.parametrize("p", [3, 5, 7])
def test_field_log_extends_scalar_log(p):
    N = 12
    u = 1 + 3 * p
    got = field_log(_padic(CycloElement.from_rational(p, u), p, N + 4))
    want = log1p_unit(PadicScalar(p, u, N + 4), N).residue
    assert got.with_prec(N).compare(PadicCyclo.scalar(p, p, want, N)) == "equal"


@pytest.mark.parametrize("p,n", [(3, 1), (5, 0), (7, 0)])
def test_field_log_equivariance_and_homomorphism(p, n):
    m = p ** (n + 1)
    z = embed_root(m, 1)
    x = _padic(CycloElement.one(m) - z, p, 24)
    y = _padic(CycloElement.one(m) + z * p - z * z, p, 24)
    lx, ly = field_log(x), field_log(y)
    for a in (2, m - 1):
        assert field_log(x.galois(a)).compare(lx.galois(a)) == "equal"
    assert field_log(x * y).compare(lx + ly) == "equal"
