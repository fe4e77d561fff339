"""Dirichlet characters, generalized Bernoulli numbers, p-adic L-values, h^-.

A character mod m is stored by its values on a fixed set of generators of
(Z/m)^x.  Values are elements of Q/Z (``Fraction`` in [0, 1)): chi(g) is
exp(2 pi i r).  This representation is canonical, so equal characters compare
equal and hash alike regardless of how they were built.

p-adic values use one fixed embedding of the roots of unity of order N' p^k
(N' | p - 1) into Q_p(zeta_{p^{n+1}}): the prime-to-p part of r goes to a power
of omega(g) (g the least primitive root mod p), the p-part to a power of zeta.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .cyclotomic import (CycloElement, DomainError, PadicCyclo, alpha_padic, euler_phi,
                         field_log, primitive_root, reduce_poly)
from .padic import PrecisionError, teichmuller_int, vp


def _factor(m: int) -> list:
    out, q = [], 2
    while q * q <= m:
        if m % q == 0:
            k = 0
            while m % q == 0:
                m //= q
                k += 1
            out.append((q, k))
        q += 1
    if m > 1:
        out.append((m, 1))
    return out


def _crt_lift(residue: int, modulus: int, m: int) -> int:
    """x = residue mod modulus, x = 1 mod m/modulus."""
    rest = m // modulus
    if rest == 1:
        return residue % m
    return (residue + modulus * ((1 - residue) * pow(modulus, -1, rest) % rest)) % m


@lru_cache(maxsize=None)
def unit_generators(m: int) -> tuple:
    """Fixed generators (g, order) of (Z/m)^x, one cyclic factor each."""
    gens = []
    for q, k in _factor(m):
        qk = q**k
        if q == 2:
            if k >= 2:
                gens.append((_crt_lift(-1, qk, m), 2))
            if k >= 3:
                gens.append((_crt_lift(5, qk, m), 2 ** (k - 2)))
        else:
            g = primitive_root(q)
            if k > 1 and pow(g, q - 1, q * q) == 1:
                g += q
            gens.append((_crt_lift(g, qk, m), euler_phi(qk)))
    return tuple(gens)


@lru_cache(maxsize=None)
def discrete_log_table(m: int) -> dict:
    """a -> exponent vector with respect to :func:`unit_generators`."""
    gens = unit_generators(m)
    table = {}
    for exps in itertools.product(*(range(o) for _, o in gens)):
        a = 1
        for (g, _), k in zip(gens, exps):
            a = a * pow(g, k, m) % m
        table[a] = exps
    if len(table) != euler_phi(m):
        raise ArithmeticError(f"generators of (Z/{m})^x are wrong")
    return table


class DirichletCharacter:
    __slots__ = ("modulus", "images", "_cond")

    def __init__(self, modulus: int, images):
        gens = unit_generators(modulus)
        images = tuple(Fraction(r) % 1 for r in images)
        if len(images) != len(gens):
            raise DomainError("one image per generator is required")
        for (_, o), r in zip(gens, images):
            if (r * o).denominator != 1:
                raise DomainError("image order does not divide generator order")
        self.modulus = modulus
        self.images = images
        self._cond = None

    @classmethod
    def trivial(cls, m: int = 1) -> "DirichletCharacter":
        return cls(m, [0] * len(unit_generators(m)))

    @classmethod
    def from_values(cls, m: int, func) -> "DirichletCharacter":
        """Build from ``func(a) -> Fraction`` (value as an element of Q/Z)."""
        return cls(m, [func(g) for g, _ in unit_generators(m)])

    # values ----------------------------------------------------------
    def frac(self, a: int):
        """chi(a) as an element of Q/Z, or None when gcd(a, m) > 1."""
        a %= self.modulus
        exps = discrete_log_table(self.modulus).get(a if self.modulus > 1 else 1)
        if exps is None:
            return None
        return sum((k * r for k, r in zip(exps, self.images)), Fraction(0)) % 1

    @property
    def order(self) -> int:
        return math.lcm(1, *(r.denominator for r in self.images))

    def exponent(self, a: int):
        """j with chi(a) = zeta_order^j (None when chi(a) = 0)."""
        r = self.frac(a)
        return None if r is None else int(r * self.order)

    def value(self, a: int, M: int | None = None) -> CycloElement:
        """Exact value in Q(zeta_M) (M defaults to the order)."""
        M = self.order if M is None else M
        if M % self.order:
            raise DomainError("target field does not contain the values")
        r = self.frac(a)
        if r is None:
            return CycloElement.zero(M)
        raw = [0] * M
        raw[int(r * M) % M] = 1
        return CycloElement(M, raw)

    def padic_value(self, a: int, p: int, n: int, digits: int):
        """(scalar, zeta exponent) with chi(a) = scalar * zeta_{p^{n+1}}^exponent, or None."""
        r = self.frac(a)
        if r is None:
            return None
        return padic_root_of_unity(r, p, n, digits)

    # structure --------------------------------------------------------
    @property
    def conductor(self) -> int:
        if self._cond is None:
            self._cond = self._compute_conductor()
        return self._cond

    def _compute_conductor(self) -> int:
        m = self.modulus
        cond = 1
        for q, k in _factor(m):
            qk = q**k
            # restriction to the q-component: values on units = 1 mod m/qk
            rest = m // qk

            def comp(x, qk=qk, rest=rest):
                return self.frac(_crt_lift(x, qk, m) if rest > 1 else x)

            if q == 2:
                ord5 = Fraction(comp(5)).denominator if k >= 3 else 1
                if ord5 > 1:
                    cond *= 2 ** (vp(ord5, 2) + 2)
                elif k >= 2 and comp(qk - 1) != 0:
                    cond *= 4
            else:
                o = math.lcm(1, *(comp(x).denominator for x in range(1, qk) if x % q))
                if o > 1:
                    cond *= q ** ((vp(o, q) or 0) + 1)
        return cond

    def is_primitive(self) -> bool:
        return self.conductor == self.modulus

    def is_trivial(self) -> bool:
        return not any(self.images)

    @property
    def parity(self) -> int:
        r = self.frac(-1)
        return 1 if r == 0 else -1

    def is_even(self) -> bool:
        return self.parity == 1

    def is_odd(self) -> bool:
        return self.parity == -1

    def primitive(self) -> "DirichletCharacter":
        f = self.conductor
        if f == self.modulus:
            return self
        m = self.modulus

        def lift(x):
            a = x % f if f > 1 else 1
            while math.gcd(a, m) != 1:
                a += f
            return self.frac(a)

        return DirichletCharacter.from_values(f, lift)

    def induce(self, m: int) -> "DirichletCharacter":
        if m % self.modulus:
            raise DomainError("can only induce to a multiple of the modulus")
        return DirichletCharacter.from_values(m, lambda a: self.frac(a % self.modulus))

    def __mul__(self, other: "DirichletCharacter") -> "DirichletCharacter":
        M = math.lcm(self.modulus, other.modulus)
        return DirichletCharacter.from_values(M, lambda a: self.frac(a) + other.frac(a))

    def __pow__(self, k: int) -> "DirichletCharacter":
        return DirichletCharacter(self.modulus, [r * k for r in self.images])

    def conjugate(self) -> "DirichletCharacter":
        return self**-1

    @property
    def key(self) -> tuple:
        return (self.modulus, tuple(str(r) for r in self.images))

    def __eq__(self, other):
        return isinstance(other, DirichletCharacter) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"DirichletCharacter(mod {self.modulus}, images={[str(r) for r in self.images]})"


def padic_root_of_unity(r: Fraction, p: int, n: int, digits: int):
    """Image of exp(2 pi i r) in Q_p(zeta_{p^{n+1}}) as (scalar, zeta exponent)."""
    r = Fraction(r) % 1
    N = r.denominator
    k = vp(N, p) or 0
    Np = N // p**k
    if (p - 1) % Np:
        raise DomainError(f"root of unity of order {N} is not in Q_p(zeta_p^n)")
    if k > n + 1:
        raise DomainError(f"root of unity of order {N} needs a higher level")
    c = r.numerator
    pk = p**k
    u = c * pow(pk, -1, Np) % Np if Np > 1 else 0
    v = c * pow(Np, -1, pk) % pk if pk > 1 else 0
    scalar = pow(teichmuller_int(primitive_root(p), p, digits), (p - 1) // Np * u, p**digits)
    return scalar, v * p ** (n + 1 - k)


def enumerate_characters(m: int) -> list:
    gens = unit_generators(m)
    return [DirichletCharacter(m, [Fraction(k, o) for k, (_, o) in zip(ks, gens)])
            for ks in itertools.product(*(range(o) for _, o in gens))]


def teichmuller_character(p: int) -> DirichletCharacter:
    """omega mod p: omega(g) = exp(2 pi i / (p-1)), matching the Teichmuller lift."""
    return DirichletCharacter(p, [Fraction(1, p - 1)])


def gamma_character(p: int, n: int, j: int, d: int = 1) -> DirichletCharacter:
    """chi_j mod p^{n+1}: trivial on mu_{p-1}, sends 1 + pd to zeta_{p^n}^j."""
    m = p ** (n + 1)
    if n == 0:
        return DirichletCharacter.trivial(m)
    gen = 1 + p * d
    table, x = {}, 1
    for b in range(p**n):
        table[x] = b
        x = x * gen % m

    def val(a):
        w = teichmuller_int(a % p, p, n + 1)
        return Fraction(j * table[a * pow(w, -1, m) % m], p**n)

    return DirichletCharacter.from_values(m, val)


def decompose(chi: DirichletCharacter, p: int):
    """chi mod p^{n+1} d -> (theta1 mod p, theta2 mod d, psi mod p^{n+1}), chi = theta1 theta2 psi."""
    m = chi.modulus
    k = vp(m, p) or 0
    pk = p**k
    d = m // pk
    theta2 = DirichletCharacter.from_values(d, lambda a: chi.frac(_crt_lift(a, d, m)))
    if k == 0:
        return DirichletCharacter.trivial(p), theta2, DirichletCharacter.trivial(1)

    def chi_p(a):
        return chi.frac(_crt_lift(a, pk, m))

    theta1 = DirichletCharacter.from_values(p, lambda x: chi_p(teichmuller_int(x % p, p, k)))
    psi = DirichletCharacter.from_values(pk, lambda a: chi_p(a) - theta1.frac(a % p))
    return theta1, theta2, psi


# ---------------------------------------------------------------------------
# Bernoulli numbers


@lru_cache(maxsize=None)
def bernoulli_number(k: int) -> Fraction:
    """B_k with B_1 = -1/2."""
    if k == 0:
        return Fraction(1)
    s = sum(math.comb(k + 1, j) * bernoulli_number(j) for j in range(k))
    return -s / (k + 1)


def bernoulli_poly(k: int, x: Fraction) -> Fraction:
    return sum(math.comb(k, j) * bernoulli_number(j) * x ** (k - j) for j in range(k + 1))


def bernoulli_B(k: int, chi: DirichletCharacter, M: int | None = None) -> CycloElement:
    """Generalized Bernoulli number B_{k,chi} (chi is primitivized first), exact in Q(zeta_M)."""
    if k < 1:
        raise DomainError("k must be positive")
    prim = chi.primitive()
    f = prim.conductor
    M = prim.order if M is None else M
    coeff = {}
    for a in range(1, f + 1):
        r = prim.frac(a)
        if r is None:
            continue
        i = int(r * M) % M
        coeff[i] = coeff.get(i, Fraction(0)) + bernoulli_poly(k, Fraction(a, f))
    den = math.lcm(1, *(c.denominator for c in coeff.values()))
    raw = [0] * M
    for i, c in coeff.items():
        raw[i] += int(c * den)
    return CycloElement(M, raw, den) * Fraction(f) ** (k - 1)


def h_minus(p: int, n: int) -> int:
    """Relative class number of Q(zeta_{p^{n+1}}) from the product of B_{1,chi}, chi odd."""
    m = p ** (n + 1)
    E = euler_phi(m)
    prod = CycloElement.one(E)
    for chi in enumerate_characters(m):
        if chi.is_odd():
            prod = prod * (bernoulli_B(1, chi, E) * Fraction(-1, 2))
    value = prod.rational_value() * 2 * m
    if value.denominator != 1 or value <= 0:
        raise ArithmeticError(f"relative class number formula gave {value}")
    return int(value)


# ---------------------------------------------------------------------------
# p-adic L-values


@dataclass(frozen=True)
class LValueRecord:
    character: tuple
    s: int
    value: object
    precision: int | None


def _monomial_times(x: PadicCyclo, scalar: int, exp: int) -> list:
    """Raw (unreduced, length m) coefficients of scalar * zeta^exp * x."""
    m = x.m
    raw = [0] * m
    for i, c in enumerate(x.coeffs):
        if c:
            raw[(i + exp) % m] += c * scalar
    return raw


@lru_cache(maxsize=4096)
def _log_one_minus(p: int, n: int, digits: int, A: int, zexp: int) -> PadicCyclo:
    """log_p(1 - A zeta_{p^{n+1}}^zexp) with A an integer root of unity mod p^digits."""
    m = p ** (n + 1)
    raw = [0] * m
    raw[0] += 1
    raw[zexp % m] -= A
    x = PadicCyclo(p, m, reduce_poly(raw, m), 0, digits)
    return field_log(x)


def _split_conductor(f: int, p: int):
    t = vp(f, p) or 0
    return f // p**t, t


def gauss_sum_padic(chi: DirichletCharacter, p: int, n: int, digits: int) -> PadicCyclo:
    """tau(chi) in Q_p(zeta_{p^{n+1}}) with zeta_f = alpha_{f0} zeta_{p^t}, f = f0 p^t."""
    prim = chi.primitive()
    f = prim.conductor
    f0, t = _split_conductor(f, p)
    if t > n + 1:
        raise DomainError("conductor needs a higher cyclotomic level")
    m = p ** (n + 1)
    mod = p**digits
    A = alpha_padic(p, f0, digits) if f0 > 1 else 1
    step = p ** (n + 1 - t)
    raw = [0] * m
    for a in range(1, f + 1):
        v = prim.padic_value(a, p, n, digits)
        if v is None:
            continue
        s, zx = v
        raw[(zx + a * step) % m] += s * pow(A, a, mod)
    return PadicCyclo(p, m, reduce_poly(raw, m, mod), 0, digits)


def lp_at_one(psi: DirichletCharacter, p: int, n: int, digits: int = 20) -> LValueRecord:
    """L_p(1, psi) for even nontrivial psi, as an element of Q_p(zeta_{p^{n+1}}).

    Uses L_p(1, psi) = -(1 - psi(p)/p) tau(psi)/f sum_a psibar(a) log_p(1 - zeta_f^a)
    with zeta_f = alpha_{f0} zeta_{p^t}.  The log sum is grouped by a mod f0 so
    only f0 logarithms are taken; the rest follow by Galois equivariance.
    """
    if psi.is_odd():
        raise DomainError("L_p(1, chi) is only implemented for even chi")
    if psi.is_trivial():
        raise DomainError("trivial character has a pole at s = 1")
    prim = psi.primitive()
    f = prim.conductor
    f0, t = _split_conductor(f, p)
    if t > n + 1:
        raise DomainError("conductor needs a higher cyclotomic level")
    m = p ** (n + 1)
    work = digits + 2 * n + 8
    mod = p**work
    A = alpha_padic(p, f0, work) if f0 > 1 else 1
    step = p ** (n + 1 - t)

    def val(a):
        return prim.padic_value(a, p, n, work)

    tau = gauss_sum_padic(prim, p, n, work)

    # sum of conj(psi)(a) log(1 - zeta_f^a)
    acc = None
    for a in range(1, f + 1):
        v = val(a)
        if v is None:
            continue
        s, zx = v
        s_inv = pow(s, -1, mod)
        if t == 0:
            lg = _log_one_minus(p, n, work, pow(A, a, mod), 0)
            term_raw = _monomial_times(lg, s_inv, -zx)
            shift, dig = lg.shift, lg.digits
        else:
            base = _log_one_minus(p, n, work, pow(A, a % f0 if f0 > 1 else 0, mod), step)
            lg = base.galois(a % m)
            term_raw = _monomial_times(lg, s_inv, -zx)
            shift, dig = lg.shift, lg.digits
        term = PadicCyclo(p, m, reduce_poly(term_raw, m), shift, dig)
        acc = term if acc is None else acc + term
    # Euler factor 1 - psi(p)/p
    ev = val(p)
    euler = PadicCyclo.scalar(p, m, 1, work)
    if ev is not None:
        s, zx = ev
        raw = [0] * m
        raw[zx % m] = s
        euler = euler - PadicCyclo(p, m, reduce_poly(raw, m), 1, work + 1)
    value = -(euler * tau * acc).scale(Fraction(1, f))
    if value.prec < digits:
        raise PrecisionError(f"L-value known only to precision {value.prec}")
    return LValueRecord(prim.key, 1, value.with_prec(digits), digits)


def lp_at_one_minus_k(chi: DirichletCharacter, k: int, p: int) -> CycloElement:
    """L_p(1-k, chi) = -(1 - chi omega^-k (p) p^{k-1}) B_{k, chi omega^-k} / k, exact."""
    if k < 1:
        raise DomainError("k must be at least 1")
    psi = (chi * teichmuller_character(p) ** (-k)).primitive()
    M = psi.order
    B = bernoulli_B(k, psi, M)
    euler = CycloElement.one(M) - psi.value(p, M) * Fraction(p) ** (k - 1)
    return -(euler * B) * Fraction(1, k)
