from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given, settings, strategies as st

from padic_iwasawa.lattice import IntLattice, PadicLattice, hnf_int
from padic_iwasawa.padic import PrecisionError

import oracles


def square(n, lo=-6, hi=6):
    return st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=n, max_size=n)


def det(M):
    return int(sympy.Matrix(M).det())


def test_hnf_examples():
    assert PadicLattice.standard(5, 3, 10).hnf() == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert PadicLattice(5, [[5, 0], [0, 5], [1, 1]], 10).hnf() == [[1, 1], [0, 5]]
    dup = PadicLattice(5, [[1, 2], [1, 2], [0, 5]], 10)
    assert dup.hnf() == PadicLattice(5, [[1, 2], [0, 5]], 10).hnf()
    assert hnf_int([[1, 0], [0, 1]]) == [[1, 0], [0, 1]]


def test_index_examples():
    L = PadicLattice.standard(7, 4, 12)
    assert L.index(L) == 0
    assert L.index(PadicLattice.standard(7, 4, 12, 7)) == 4
    assert L.equals(L) == "equal"
    assert L.equals(L.scale(7)) == "unequal"


def test_intersection_examples():
    Z2 = IntLattice([[1, 0], [0, 1]])
    assert Z2.intersect(Z2) == Z2
    assert Z2.intersect(Z2.scale(2)) == Z2.scale(2)
    line = IntLattice([[1, 1]])
    assert Z2.intersect(line) == line
    assert IntLattice([[2, 0], [0, 3]]).intersect(IntLattice([[3, 0], [0, 2]])) == IntLattice([[6, 0], [0, 6]])


def test_rank_and_containment_errors():
    Z2 = IntLattice([[1, 0], [0, 1]])
    with pytest.raises(ValueError):
        Z2.index(IntLattice([[1, 0]]))
    with pytest.raises(ValueError):
        Z2.scale(2).index(Z2)
    P = PadicLattice.standard(3, 2, 10)
    with pytest.raises(ValueError):
        P.scale(3).index(P)


def test_undecidable_at_low_precision():
    # a pivot of valuation 9 at precision 10 cannot be certified with slack 8
    L = PadicLattice(3, [[1, 0], [0, 3**9]], 10)
    with pytest.raises(PrecisionError):
        L.smith()


@settings(max_examples=80, deadline=None)
@given(M=square(3))
def test_int_index_is_determinant(M):
    d = det(M)
    assume(d != 0)
    Z = IntLattice([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert Z.index(IntLattice(M)) == abs(d)


@settings(max_examples=80, deadline=None)
@given(p=st.sampled_from([3, 5, 7]), M=square(4))
def test_padic_index_is_valuation_of_determinant(p, M):
    d = det(M)
    assume(d != 0)
    L = PadicLattice.standard(p, 4, 40)
    assert L.index(PadicLattice(p, M, 40)) == oracles.vp(d, p)


@settings(max_examples=60, deadline=None)
@given(p=st.sampled_from([3, 5]), A=square(3), B=square(3))
def test_index_is_multiplicative(p, A, B):
    assume(det(A) != 0 and det(B) != 0)
    BA = (sympy.Matrix(B) * sympy.Matrix(A)).tolist()
    L1 = PadicLattice.standard(p, 3, 40)
    L2 = PadicLattice(p, A, 40)
    L3 = PadicLattice(p, BA, 40)
    assert L1.index(L3) == L1.index(L2) + L2.index(L3)
    Z = IntLattice([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    I2, I3 = IntLattice(A), IntLattice(BA)
    assert Z.index(I3) == Z.index(I2) * I2.index(I3)


@settings(max_examples=60, deadline=None)
@given(p=st.sampled_from([3, 5, 7]), M=square(3), lo=st.integers(20, 30), extra=st.integers(1, 30))
def test_index_is_stable_under_precision(p, M, lo, extra):
    d = det(M)
    assume(d != 0)
    Q = [[Fraction(c, p) for c in row] for row in M]   # rational entries
    amb = Fraction(1, p)
    a = PadicLattice.standard(p, 3, lo, amb).index(PadicLattice(p, Q, lo))
    b = PadicLattice.standard(p, 3, lo + extra, amb).index(PadicLattice(p, Q, lo + extra))
    assert a == b == oracles.vp(d, p)


@settings(max_examples=60, deadline=None)
@given(M=st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3), min_size=1, max_size=5),
       K=st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3), min_size=1, max_size=5))
def test_intersection_is_contained_in_both(M, K):
    a, b = IntLattice(M), IntLattice(K)
    c = a.intersect(b)
    if c.rank:
        assert a.contains(c) and b.contains(c)
    # sum and intersection ranks: dim(A+B) + dim(A cap B) = dim A + dim B
    assert (a + b).rank + c.rank == a.rank + b.rank
