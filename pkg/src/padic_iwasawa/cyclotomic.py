"""Arithmetic in Q(zeta_m) and Q_p(zeta_m) on the power basis mod Phi_m.

Two element types share the polynomial machinery:

* :class:`CycloElement` -- exact, integer numerators over a common denominator.
* :class:`PadicCyclo` -- coefficients known modulo p^digits with an explicit
  power-of-p denominator ``shift``; the value is ``p^-shift * sum c_i zeta^i``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .padic import PrecisionError, vp, vp_bounded, teichmuller_int


class DomainError(ValueError):
    pass


def euler_phi(m: int) -> int:
    result, k, q = m, m, 2
    while q * q <= k:
        if k % q == 0:
            while k % q == 0:
                k //= q
            result -= result // q
        q += 1
    if k > 1:
        result -= result // k
    return result


def _poly_mul_int(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_divexact(num, den):
    num = list(num)
    q = [0] * (len(num) - len(den) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = num[i + len(den) - 1] // den[-1]
        q[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    return q


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> tuple:
    """Coefficients of Phi_m, lowest degree first."""
    if m == 1:
        return (-1, 1)
    poly = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            poly = _poly_divexact(poly, cyclotomic_poly(d))
    return tuple(poly)


@lru_cache(maxsize=None)
def _phi_terms(m: int):
    """Nonzero lower terms of Phi_m as (degree, coeff) pairs."""
    poly = cyclotomic_poly(m)
    return tuple((i, c) for i, c in enumerate(poly[:-1]) if c)


def reduce_poly(raw: list, m: int, modulus: int | None = None) -> list:
    """Reduce an integer polynomial modulo Phi_m (in place), return length phi(m) list."""
    phi = euler_phi(m)
    terms = _phi_terms(m)
    for j in range(len(raw) - 1, phi - 1, -1):
        c = raw[j]
        if c:
            base = j - phi
            for t, coef in terms:
                raw[base + t] -= c * coef
            raw[j] = 0
    out = raw[:phi] + [0] * max(0, phi - len(raw))
    if modulus is not None:
        out = [c % modulus for c in out]
    return out


def _mul_reduce(a, b, m, modulus=None):
    return reduce_poly(_poly_mul_int(a, b), m, modulus)


def _galois_raw(coeffs, a, m):
    raw = [0] * m
    for i, c in enumerate(coeffs):
        if c:
            raw[(a * i) % m] += c
    return raw


# ---------------------------------------------------------------------------
# exact elements


class CycloElement:
    """Element of Q(zeta_m): ``sum(num[i] zeta_m^i) / den``, reduced mod Phi_m."""

    __slots__ = ("m", "num", "den")

    def __init__(self, m: int, num, den: int = 1, _reduced: bool = False):
        if den == 0:
            raise ZeroDivisionError
        num = list(num)
        if not _reduced:
            num = reduce_poly(num, m)
        if den < 0:
            num, den = [-c for c in num], -den
        g = den
        for c in num:
            g = gcd(g, c)
            if g == 1:
                break
        if g > 1:
            num = [c // g for c in num]
            den //= g
        self.m = m
        self.num = tuple(num)
        self.den = den

    @classmethod
    def from_rational(cls, m: int, q) -> "CycloElement":
        q = Fraction(q)
        return cls(m, [q.numerator] + [0] * (euler_phi(m) - 1), q.denominator, _reduced=True)

    @classmethod
    def zero(cls, m: int) -> "CycloElement":
        return cls.from_rational(m, 0)

    @classmethod
    def one(cls, m: int) -> "CycloElement":
        return cls.from_rational(m, 1)

    @property
    def coeffs(self) -> tuple:
        return tuple(Fraction(c, self.den) for c in self.num)

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise DomainError("element is not rational")
        return Fraction(self.num[0], self.den)

    def _coerce(self, other) -> "CycloElement":
        if isinstance(other, CycloElement):
            if other.m != self.m:
                raise DomainError(f"modulus mismatch {self.m} vs {other.m}")
            return other
        if isinstance(other, (int, Fraction)):
            return CycloElement.from_rational(self.m, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        den = self.den * other.den // gcd(self.den, other.den)
        fa, fb = den // self.den, den // other.den
        return CycloElement(self.m, [x * fa + y * fb for x, y in zip(self.num, other.num)], den,
                            _reduced=True)

    __radd__ = __add__

    def __neg__(self):
        return CycloElement(self.m, [-c for c in self.num], self.den, _reduced=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return CycloElement(self.m, [c * q.numerator for c in self.num],
                                self.den * q.denominator, _reduced=True)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycloElement(self.m, _mul_reduce(self.num, other.num, self.m),
                            self.den * other.den, _reduced=True)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise DomainError("negative powers are not supported")
        result = CycloElement.one(self.m)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, q):
        return self * (1 / Fraction(q))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycloElement.from_rational(self.m, other)
        if not isinstance(other, CycloElement):
            return NotImplemented
        return self.m == other.m and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.m, self.num, self.den))

    def galois(self, a: int) -> "CycloElement":
        return galois_apply(a, self)

    def embed(self, big_m: int) -> "CycloElement":
        """Image in Q(zeta_big_m) via zeta_m -> zeta_big_m^(big_m/m)."""
        if big_m % self.m:
            raise DomainError(f"{self.m} does not divide {big_m}")
        step = big_m // self.m
        raw = [0] * (step * len(self.num))
        for i, c in enumerate(self.num):
            raw[i * step] = c
        return CycloElement(big_m, raw, self.den)

    def __repr__(self):
        terms = [f"{Fraction(c, self.den)}*z^{i}" for i, c in enumerate(self.num) if c]
        return f"CycloElement(m={self.m}: {' + '.join(terms) or '0'})"


def embed_root(m: int, k: int) -> CycloElement:
    """zeta_m^k reduced mod Phi_m."""
    raw = [0] * m
    raw[k % m] = 1
    return CycloElement(m, raw)


def galois_apply(a: int, x):
    """The automorphism zeta_m -> zeta_m^a."""
    m = x.m
    if gcd(a, m) != 1:
        raise DomainError(f"{a} is not coprime to {m}")
    a %= m
    if a == 1:
        return x
    if isinstance(x, CycloElement):
        return CycloElement(x.m, _galois_raw(x.num, a, m), x.den)
    raw = reduce_poly(_galois_raw(x.coeffs, a, m), m, x.p**x.digits)
    return PadicCyclo(x.p, m, raw, x.shift, x.digits)


def subfield_basis_matrix(big_m: int, small_m: int):
    """Rows: images of zeta_small^j (j < phi(small)) in Q(zeta_big)."""
    return [embed_root(small_m, j).embed(big_m).num for j in range(euler_phi(small_m))]


def solve_rational(rows, target):
    """Find coefficients c with sum c_j rows[j] = target, exactly; None if inconsistent."""
    r = len(rows)
    cols = len(target)
    # augmented system A^T c = target
    mat = [[Fraction(rows[j][i]) for j in range(r)] + [Fraction(target[i])] for i in range(cols)]
    piv_cols = []
    row = 0
    for col in range(r):
        pivot = next((i for i in range(row, cols) if mat[i][col] != 0), None)
        if pivot is None:
            continue
        mat[row], mat[pivot] = mat[pivot], mat[row]
        inv = 1 / mat[row][col]
        mat[row] = [v * inv for v in mat[row]]
        for i in range(cols):
            if i != row and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[row])]
        piv_cols.append(col)
        row += 1
    if any(mat[i][r] != 0 for i in range(row, cols)):
        return None
    sol = [Fraction(0)] * r
    for i, col in enumerate(piv_cols):
        sol[col] = mat[i][r]
    return sol


def descend(x: CycloElement, small_m: int) -> CycloElement:
    """Express ``x`` in Q(zeta_small_m) (embedded via zeta_m^(m/small_m)); hard error if not there."""
    rows = subfield_basis_matrix(x.m, small_m)
    sol = solve_rational(rows, x.coeffs)
    if sol is None:
        raise ArithmeticError(f"element does not lie in Q(zeta_{small_m})")
    den = math.lcm(*(c.denominator for c in sol)) if sol else 1
    return CycloElement(small_m, [int(c * den) for c in sol], den, _reduced=True)


def relative_norm(x: CycloElement, p: int, d: int, n: int, i: int) -> CycloElement:
    """Norm from Q(zeta_{q_n}) to Q(zeta_{q_i}) (q_k = p^(k+1) d) along a = 1 mod q_i."""
    qn, qi = p ** (n + 1) * d, p ** (i + 1) * d
    if x.m != qn:
        raise DomainError("element must live in modulus q_n")
    if not 0 <= i <= n:
        raise DomainError("target level out of range")
    result = CycloElement.one(qn)
    for k in range(p ** (n - i)):
        result = result * galois_apply(1 + k * qi, x)
    for a in range(1 + qi, qn, qi):
        if galois_apply(a, result) != result:
            raise ArithmeticError("norm is not fixed by Gal(K_n/K_i)")
    return descend(result, qi)


# ---------------------------------------------------------------------------
# towers Q(zeta_{q_n}) with zeta_{q_n} = alpha * zeta_{p^{n+1}}


class Tower:
    """Exponent bookkeeping for zeta_{q_i} = alpha zeta_{p^{i+1}} inside Q(zeta_{q_n}).

    The generator ``x`` of Q(zeta_{q_n}) is zeta_{q_n}.  ``alpha = x^A`` and
    ``zeta_{p^{n+1}} = x^B`` with A = 0 mod p^{n+1}, A = 1 mod d and
    B = 1 mod p^{n+1}, B = 0 mod d.
    """

    def __init__(self, p: int, d: int, n: int):
        if d % p == 0:
            raise DomainError("p must not divide d")
        self.p, self.d, self.n = p, d, n
        self.pn1 = p ** (n + 1)
        self.m = self.pn1 * d
        self.A = _crt(0, self.pn1, 1, d) % self.m
        self.B = _crt(1, self.pn1, 0, d) % self.m

    def q(self, i: int) -> int:
        return self.p ** (i + 1) * self.d

    def exp_zeta_p(self, i: int) -> int:
        """Exponent of x giving zeta_{p^{i+1}}."""
        return self.B * self.p ** (self.n - i) % self.m

    def exp_zeta_q(self, i: int) -> int:
        return (self.A + self.exp_zeta_p(i)) % self.m

    def zeta_q(self, i: int) -> CycloElement:
        return embed_root(self.m, self.exp_zeta_q(i))

    def zeta_p(self, i: int) -> CycloElement:
        return embed_root(self.m, self.exp_zeta_p(i))

    def alpha(self, power: int = 1) -> CycloElement:
        return embed_root(self.m, self.A * power)

    def frobenius(self) -> int:
        """Galois label c (c = p mod d, c = 1 mod p^{n+1}) lifting Frobenius of Q_p(alpha)."""
        return _crt(1, self.pn1, self.p % self.d, self.d) % self.m if self.d > 1 else 1

    def delta_label(self, delta: int) -> int:
        """Lift of delta in (Z/pd)^x to the torsion part of (Z/q_n)^x."""
        w = teichmuller_int(delta % self.p, self.p, self.n + 1)
        return _crt(w, self.pn1, delta % self.d, self.d) % self.m if self.d > 1 else w

    def gamma0_label(self) -> int:
        return (1 + self.p * self.d) % self.m

    def zeta_q_in_level(self, i: int) -> CycloElement:
        """zeta_{q_i} written in the standard generator y of Q(zeta_{q_i}) (y = x^(q_n/q_i))."""
        qi = self.q(i)
        E = _crt(1, self.p ** (i + 1), pow(self.p, -(self.n - i), self.d) if self.d > 1 else 0,
                 self.d)
        return embed_root(qi, E % qi)


def _crt(r1, m1, r2, m2):
    if m2 == 1:
        return r1 % m1
    g = gcd(m1, m2)
    if g != 1:
        raise DomainError("moduli must be coprime")
    return (r1 + m1 * ((r2 - r1) * pow(m1, -1, m2) % m2)) % (m1 * m2)


# ---------------------------------------------------------------------------
# p-adic elements


class PadicCyclo:
    """Element of Q_p(zeta_m): p^-shift * sum coeffs[i] zeta^i, coeffs known mod p^digits."""

    __slots__ = ("p", "m", "coeffs", "shift", "digits")

    def __init__(self, p: int, m: int, coeffs, shift: int = 0, digits: int = 40):
        mod = p**digits
        coeffs = [c % mod for c in coeffs]
        phi = euler_phi(m)
        if len(coeffs) != phi:
            raise DomainError("coefficient vector has wrong length")
        # canonical: strip common p from numerator while shift > 0
        if shift > 0 and digits > 0:
            content = min((vp_bounded(c, p, digits) for c in coeffs), default=digits)
            k = min(content, shift)
            if k:
                pk = p**k
                coeffs = [c // pk for c in coeffs]
                shift -= k
                digits -= k
        self.p, self.m = p, m
        self.coeffs = tuple(coeffs)
        self.shift = shift
        self.digits = digits

    # precision --------------------------------------------------------
    @property
    def prec(self) -> int:
        """Absolute precision: the value is known modulo p^prec * O."""
        return self.digits - self.shift

    def content(self) -> int:
        return min((vp_bounded(c, self.p, self.digits) for c in self.coeffs), default=self.digits)

    def valuation(self) -> int:
        """Lower bound for the coefficientwise p-adic valuation (exact if < prec)."""
        return self.content() - self.shift

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    @classmethod
    def from_exact(cls, p: int, x: CycloElement, digits: int) -> "PadicCyclo":
        v = vp(x.den, p) or 0
        unit = x.den // p**v
        mod = p ** (digits + v)
        inv = pow(unit, -1, mod)
        return cls(p, x.m, [c * inv for c in x.num], v, digits + v)

    @classmethod
    def scalar(cls, p: int, m: int, value: int, digits: int, shift: int = 0) -> "PadicCyclo":
        return cls(p, m, [value] + [0] * (euler_phi(m) - 1), shift, digits)

    @classmethod
    def from_fraction(cls, p: int, m: int, q, digits: int) -> "PadicCyclo":
        q = Fraction(q)
        return cls.from_exact(p, CycloElement.from_rational(m, q), digits)

    def _aligned(self, other: "PadicCyclo"):
        if other.p != self.p or other.m != self.m:
            raise DomainError("incompatible p-adic cyclotomic operands")
        s = max(self.shift, other.shift)
        da, db = s - self.shift, s - other.shift
        a = [c * self.p**da for c in self.coeffs]
        b = [c * self.p**db for c in other.coeffs]
        return a, b, s, self.digits + da, other.digits + db

    def _coerce(self, other):
        if isinstance(other, PadicCyclo):
            return other
        if isinstance(other, (int, Fraction)):
            return PadicCyclo.from_fraction(self.p, self.m, other, self.prec + 2 * self.shift + 2)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, s, da, db = self._aligned(other)
        return PadicCyclo(self.p, self.m, [x + y for x, y in zip(a, b)], s, min(da, db))

    __radd__ = __add__

    def __neg__(self):
        return PadicCyclo(self.p, self.m, [-c for c in self.coeffs], self.shift, self.digits)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.p != self.p or other.m != self.m:
            raise DomainError("incompatible p-adic cyclotomic operands")
        ca, cb = self.content(), other.content()
        # error of a*b before shifting: p^da * b + p^db * a
        digits = min(self.digits + cb, other.digits + ca)
        raw = _mul_reduce(self.coeffs, other.coeffs, self.m, self.p**digits)
        return PadicCyclo(self.p, self.m, raw, self.shift + other.shift, digits)

    __rmul__ = __mul__

    def scale(self, q) -> "PadicCyclo":
        """Multiply by a rational number (p-power denominators become shift)."""
        q = Fraction(q)
        if q == 0:
            return PadicCyclo(self.p, self.m, [0] * len(self.coeffs), 0, self.prec)
        p = self.p
        vn = vp(q.numerator, p) or 0
        vd = vp(q.denominator, p) or 0
        unit_num = q.numerator // p**vn
        unit_den = q.denominator // p**vd
        mod = p**self.digits
        factor = unit_num * pow(unit_den, -1, mod)
        shift = self.shift + vd - vn
        digits = self.digits
        coeffs = [c * factor for c in self.coeffs]
        if shift < 0:
            coeffs = [c * p ** (-shift) for c in coeffs]
            digits -= shift
            shift = 0
        return PadicCyclo(p, self.m, coeffs, shift, digits)

    def __pow__(self, k: int):
        if k < 0:
            raise DomainError("negative powers are not supported")
        result = PadicCyclo.scalar(self.p, self.m, 1, self.digits)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def galois(self, a: int) -> "PadicCyclo":
        return galois_apply(a, self)

    def with_prec(self, prec: int) -> "PadicCyclo":
        """Drop digits so that the absolute precision is at most ``prec``."""
        if prec >= self.prec:
            return self
        digits = prec + self.shift
        return PadicCyclo(self.p, self.m, self.coeffs, self.shift, max(digits, 0))

    def compare(self, other) -> str:
        """'equal', 'unequal' or 'undecidable' at the joint precision."""
        diff = self - other
        if diff.prec <= 0:
            return "undecidable"
        if diff.is_zero():
            return "equal"
        return "unequal"

    def difference_valuation(self, other) -> int:
        """Valuation of self - other (capped at the joint precision)."""
        diff = self - other
        return min(diff.valuation(), diff.prec)

    def is_integral(self) -> bool:
        return self.valuation() >= 0

    def vector(self, shift: int, digits: int) -> list:
        """Integer coordinates of p^shift * self, reduced mod p^digits."""
        if shift < self.shift:
            raise DomainError("shift too small for this element")
        f = self.p ** (shift - self.shift)
        mod = self.p**digits
        return [c * f % mod for c in self.coeffs]

    def constant_term(self):
        """(numerator mod p^digits, shift) of the zeta^0 coefficient."""
        return self.coeffs[0], self.shift

    def is_scalar(self) -> bool:
        return not any(self.coeffs[1:])

    def __repr__(self):
        return (f"PadicCyclo(p={self.p}, m={self.m}, shift={self.shift}, prec={self.prec}, "
                f"coeffs={list(self.coeffs)})")


def embed_padic(x: CycloElement, p: int, tower: Tower, digits: int) -> PadicCyclo:
    """Image of x in Q(zeta_{q_n}) inside Q_p(zeta_{p^{n+1}}), zeta_{q_n} -> alpha_p zeta.

    Needs d | p - 1 so that the d-th root of unity alpha_p lies in Z_p.
    """
    d = tower.d
    if (p - 1) % d:
        raise DomainError("alpha lies in Z_p only when d divides p - 1")
    if x.m != tower.m:
        raise DomainError("element is not in the tower's top field")
    v = vp(x.den, p) or 0
    work = digits + v
    mod = p**work
    alpha = alpha_padic(p, d, work)
    pn1 = tower.pn1
    raw = [0] * pn1
    ak = 1
    for k, c in enumerate(x.num):
        if c:
            raw[k % pn1] += c * ak
        ak = ak * alpha % mod
    coeffs = reduce_poly(raw, pn1, mod)
    unit = x.den // p**v
    inv = pow(unit, -1, mod)
    return PadicCyclo(p, pn1, [c * inv for c in coeffs], v, work)


@lru_cache(maxsize=None)
def primitive_root(p: int) -> int:
    phi = p - 1
    factors = [q for q in range(2, phi + 1) if phi % q == 0 and all(q % r for r in range(2, q))]
    for g in range(2, p):
        if all(pow(g, phi // q, p) != 1 for q in factors):
            return g
    return 1


def alpha_padic(p: int, d: int, digits: int) -> int:
    """The fixed primitive d-th root of unity in Z_p: omega(g)^((p-1)/d), g primitive root."""
    if (p - 1) % d:
        raise DomainError("d must divide p - 1")
    g = primitive_root(p)
    return pow(teichmuller_int(g, p, digits), (p - 1) // d, p**digits)


# ---------------------------------------------------------------------------
# valuations and logarithms in Q_p(zeta_{p^k})


@lru_cache(maxsize=None)
def _prime_power(m: int):
    for q in range(2, m + 1):
        if m % q == 0:
            k, r = 0, m
            while r % q == 0:
                r //= q
                k += 1
            if r != 1:
                return None
            return q, k
    return None


@lru_cache(maxsize=None)
def _binomials(e: int):
    rows = [[1]]
    for i in range(1, e):
        prev = rows[-1]
        rows.append([1] + [prev[j - 1] + prev[j] for j in range(1, i)] + [1])
    return rows


def pi_coordinates(x: PadicCyclo) -> list:
    """Coordinates of the numerator of x in the basis pi^j, pi = zeta - 1."""
    e = len(x.coeffs)
    binom = _binomials(e)
    mod = x.p**x.digits
    out = [0] * e
    for i, c in enumerate(x.coeffs):
        if c:
            row = binom[i]
            for j in range(i + 1):
                out[j] += c * row[j]
    return [c % mod for c in out]


def pi_valuation(x: PadicCyclo) -> int:
    """Valuation of x for the uniformizer zeta_{p^k} - 1 (capped by precision)."""
    pk = _prime_power(x.m)
    if pk is None or pk[0] != x.p:
        raise DomainError("pi-adic valuation needs m a power of p")
    e = len(x.coeffs)
    coords = pi_coordinates(x)
    best = e * x.digits
    for j, c in enumerate(coords):
        best = min(best, e * vp_bounded(c, x.p, x.digits) + j)
    return best - e * x.shift


def _series_terms(t: int, e: int, p: int, target: int) -> int:
    """K with v_pi(y^k/k) >= e*target for every k > K, given v_pi(y) >= t."""
    k, last_bad = 1, 0
    while True:
        if k * t - e * _flog(k, p) < e * target:
            last_bad = k
        elif k > 2 * last_bad + p:
            return last_bad
        k += 1


def _flog(k, p):
    r = 0
    while k >= p:
        k //= p
        r += 1
    return r


def field_log(x: PadicCyclo, prec: int | None = None, s: int | None = None) -> PadicCyclo:
    """Iwasawa p-adic logarithm on Q_p(zeta_{p^k}) (log_p p = 0, log of roots of unity = 0).

    Non-units go through x^e / p^(v_pi(x)/1), e the ramification index, which is a
    unit.  The unit is raised to (p-1) p^s so the log series converges fast; the
    truncation index comes from v_pi(y^k/k) >= k t - e floor(log_p k).
    Precision is tracked; ``prec`` only caps the result.
    """
    p, m = x.p, x.m
    pk = _prime_power(m)
    if pk is None or pk[0] != p:
        raise DomainError("field_log works on Q_p(zeta_{p^k})")
    e = len(x.coeffs)
    v = pi_valuation(x)
    if v >= e * x.prec:
        raise PrecisionError("cannot decide whether the argument is zero")
    if s is None:
        s = max(1, math.isqrt(max(x.prec, 1)) // 2 + 1)
    z = PadicCyclo(p, m, x.coeffs, 0, x.digits)
    ram = 1
    if v or x.shift:
        ram = e
        k = v + e * x.shift
        z = z**e
        if z.content() < k:
            raise PrecisionError("argument known to too few digits")
        pkk = p**k
        z = PadicCyclo(p, m, [c // pkk for c in z.coeffs], 0, z.digits - k)
    w = z ** ((p - 1) * p**s)
    y = w - 1
    if y.digits <= 0:
        raise PrecisionError("argument known to too few digits")
    if y.is_zero():
        acc, top, digits = [0] * e, 0, y.digits
    else:
        t = pi_valuation(y)
        if t <= 0:
            raise PrecisionError("power did not reach a principal unit")
        digits = y.digits
        K = _series_terms(t, e, p, digits)
        top = _flog(K, p)
        big = p ** (digits + top)
        acc = [0] * e
        yk = [1] + [0] * (e - 1)
        yc = list(y.coeffs)
        for k in range(1, K + 1):
            yk = _mul_reduce(yk, yc, m, big)
            vk = vp(k, p)
            f = p ** (top - vk) * pow(k // p**vk, -1, big)
            if k % 2 == 0:
                f = -f
            acc = [(a + f * c) % big for a, c in zip(acc, yk)]
    # acc / p^top is log(w) modulo p^digits
    result = PadicCyclo(p, m, acc, top, digits + top)
    result = result.scale(Fraction(1, ram * (p - 1) * p**s))
    return result if prec is None else result.with_prec(prec)


# ---------------------------------------------------------------------------
# named elements


def one_over_pi(p: int, n: int) -> CycloElement:
    """1/(zeta_{p^{n+1}} - 1) = p^-(n+1) sum_k k zeta^k, checked by multiplying back."""
    m = p ** (n + 1)
    x = CycloElement(m, list(range(m)), m)
    pi = embed_root(m, 1) - 1
    if x * pi != CycloElement.one(m):
        raise ArithmeticError("1/pi formula failed")
    return x


def gauss_sum(chi) -> CycloElement:
    """tau(chi) = sum chi(a) zeta_f^a in Q(zeta_M), M = lcm(f, order of chi)."""
    if not chi.is_primitive():
        raise DomainError("Gauss sums need a primitive character")
    f = chi.modulus
    e = chi.order
    M = math.lcm(f, e)
    raw = [0] * M
    for a in range(1, f + 1):
        j = chi.exponent(a)
        if j is None:
            continue
        raw[(a * (M // f) + j * (M // e)) % M] += 1
    return CycloElement(M, raw)


def special_element(kind: str, p: int, n: int, d: int = 1, conductor_case: str = "pd",
                    constant_reading: str = "frobenius") -> CycloElement:
    """Exact special elements in Q(zeta_{q_n}).

    kinds: ``script_T`` sum p^(i-n) zeta_{p^{i+1}} (i = 0..n), ``leopoldt_T``
    sum zeta_{p^{i+1}}, ``tilde_T`` (sum from i = 1), ``dotted_T`` (the element
    twisted by Frobenius used with conductor pd or d).  For d > 1 the first three
    are built from zeta_{p^{i+1}}; ``dotted_T`` uses zeta_{q_i}.
    ``constant_reading`` selects the coefficient of zeta_{q_0} in the conductor-d
    case: ``frobenius`` reads it as F^n (F - 1), ``conductor`` as F^n (d - 1).
    """
    tower = Tower(p, d, n)
    m = tower.m
    total = CycloElement.zero(m)
    if kind in ("script_T", "leopoldt_T", "tilde_T"):
        start = 1 if kind == "tilde_T" else 0
        for i in range(start, n + 1):
            c = Fraction(1) if kind == "leopoldt_T" else Fraction(p) ** (i - n)
            total = total + tower.zeta_p(i) * c
        return total
    if kind != "dotted_T":
        raise DomainError(f"unknown special element {kind!r}")
    F = tower.frobenius()

    def frob(x, k):
        return galois_apply(pow(F, k, m), x) if k else x

    if conductor_case == "pd":
        for i in range(n + 1):
            total = total + frob(tower.zeta_q(i), n - i) * Fraction(p) ** (i - n)
        return total
    if conductor_case != "d":
        raise DomainError("conductor_case is 'pd' or 'd'")
    for i in range(1, n + 1):
        z = frob(tower.zeta_q(i), n - i)
        total = total + (z - frob(z, 1) * Fraction(1, p)) * Fraction(p) ** (i - n)
    z0 = frob(tower.zeta_q(0), n)
    if constant_reading == "frobenius":
        const = frob(z0, 1) - z0
    elif constant_reading == "conductor":
        const = z0 * (d - 1)
    else:
        raise DomainError("constant_reading is 'frobenius' or 'conductor'")
    return total - const * Fraction(p) ** (-n)


@dataclass(frozen=True)
class SpecialElement:
    kind: str
    p: int
    d: int
    n: int
    frobenius: int | None
    value: CycloElement


def build_special(kind: str, p: int, d: int = 1, n: int = 0, F: int | None = None,
                  conductor_case: str = "pd", constant_reading: str = "frobenius") -> SpecialElement:
    """Wrap special_element with its parameters.  ``F`` must agree with the tower's Frobenius."""
    tower = Tower(p, d, n)
    frob = tower.frobenius() if kind == "dotted_T" else None
    if F is not None and kind == "dotted_T" and F % tower.m != frob % tower.m:
        raise DomainError("F is not the Frobenius of this tower")
    value = special_element(kind, p, n, d, conductor_case, constant_reading)
    return SpecialElement(kind, p, d, n, frob, value)
