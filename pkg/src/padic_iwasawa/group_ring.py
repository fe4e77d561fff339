"""Group rings of Galois groups of cyclotomic fields and their action on elements.

Three groups are modelled, each labelling its elements by small integers:

* ``UnitGroup(m)`` -- (Z/m)^x = Gal(Q(zeta_m)/Q), label a is sigma_a.
* ``Gamma(p, n, q0)`` -- cyclic of order p^n generated by gamma0 = sigma_{1+q0};
  label b is gamma0^b.
* ``Delta(p, n)`` -- the torsion subgroup (Z/p)^x of Gal(K_n/Q_p); label x is
  sigma_{omega(x)}.

Coefficients may be ints, Fractions, CycloElement or PadicCyclo.  Rational
coefficients that only approximate p-adic numbers carry ``prec``: they are
known modulo p^prec.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .cyclotomic import CycloElement, DomainError, PadicCyclo, embed_root, galois_apply
from .padic import PrecisionError, teichmuller_int, vp


class UnitGroup:
    def __init__(self, m: int):
        self.m = m

    def elements(self):
        return [a for a in range(1, self.m + 1) if math.gcd(a, self.m) == 1] if self.m > 1 else [1]

    def identity(self):
        return 1 % self.m if self.m > 1 else 1

    def mul(self, a, b):
        return a * b % self.m if self.m > 1 else 1

    def inverse(self, a):
        return pow(a, -1, self.m) if self.m > 1 else 1

    def galois(self, a, M):
        if M % self.m and self.m % M:
            raise DomainError(f"cannot act by (Z/{self.m})^x on modulus {M}")
        if self.m % M == 0:
            return a % M if M > 1 else 1
        # M a multiple of m: lift a to the element acting trivially on the complement
        from .characters import _crt_lift
        return _crt_lift(a, self.m, M)

    def __eq__(self, other):
        return isinstance(other, UnitGroup) and other.m == self.m

    def __hash__(self):
        return hash(("U", self.m))

    def __repr__(self):
        return f"UnitGroup({self.m})"


class Gamma:
    def __init__(self, p: int, n: int, q0: int | None = None):
        self.p, self.n = p, n
        self.q0 = p if q0 is None else q0
        self.order = p**n

    def elements(self):
        return list(range(self.order))

    def identity(self):
        return 0

    def mul(self, a, b):
        return (a + b) % self.order

    def inverse(self, a):
        return -a % self.order

    def galois(self, b, M):
        return pow(1 + self.q0, b, M)

    def restrict_label(self, b, n):
        return b % self.p**n

    def __eq__(self, other):
        return isinstance(other, Gamma) and (other.p, other.n, other.q0) == (self.p, self.n, self.q0)

    def __hash__(self):
        return hash(("G", self.p, self.n, self.q0))

    def __repr__(self):
        return f"Gamma(p={self.p}, n={self.n}, q0={self.q0})"


class Delta:
    def __init__(self, p: int, n: int):
        self.p, self.n = p, n

    def elements(self):
        return list(range(1, self.p))

    def identity(self):
        return 1

    def mul(self, a, b):
        return a * b % self.p

    def inverse(self, a):
        return pow(a, -1, self.p)

    def galois(self, x, M):
        k = vp(M, self.p) or 0
        if M != self.p**k:
            raise DomainError("Delta acts on Q_p(zeta_{p^k}) only")
        return teichmuller_int(x, self.p, max(k, 1)) % M if M > 1 else 1

    def __eq__(self, other):
        return isinstance(other, Delta) and (other.p, other.n) == (self.p, self.n)

    def __hash__(self):
        return hash(("D", self.p, self.n))

    def __repr__(self):
        return f"Delta(p={self.p})"


def _is_zero(c) -> bool:
    if isinstance(c, (int, Fraction)):
        return c == 0
    return c.is_zero()


def _val(c, p):
    """p-adic valuation of a rational coefficient (None for zero)."""
    if isinstance(c, int):
        c = Fraction(c)
    if isinstance(c, Fraction):
        if c == 0:
            return None
        return (vp(c.numerator, p) or 0) - (vp(c.denominator, p) or 0)
    return None


class GroupRingElement:
    __slots__ = ("group", "coeffs", "prec")

    def __init__(self, group, coeffs: dict, prec: int | None = None):
        self.group = group
        self.coeffs = {k: v for k, v in coeffs.items() if not _is_zero(v)}
        self.prec = prec

    @classmethod
    def identity(cls, group) -> "GroupRingElement":
        return cls(group, {group.identity(): Fraction(1)})

    @classmethod
    def basis(cls, group, label) -> "GroupRingElement":
        return cls(group, {label: Fraction(1)})

    @classmethod
    def norm(cls, group) -> "GroupRingElement":
        return cls(group, {g: Fraction(1) for g in group.elements()})

    def coefficient(self, label):
        return self.coeffs.get(label, 0)

    def _check(self, other):
        if not isinstance(other, GroupRingElement) or other.group != self.group:
            raise DomainError("group ring elements over different groups")

    def _p(self):
        return getattr(self.group, "p", None)

    def _min_val(self):
        p = self._p()
        vals = [_val(c, p) for c in self.coeffs.values()] if p else []
        vals = [v for v in vals if v is not None]
        return min(vals) if vals else None

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = GroupRingElement.identity(self.group) * other
        self._check(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out[k] + v if k in out else v
        return GroupRingElement(self.group, out, _min_prec(self.prec, other.prec))

    __radd__ = __add__

    def __neg__(self):
        return GroupRingElement(self.group, {k: -v for k, v in self.coeffs.items()}, self.prec)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, GroupRingElement):
            return GroupRingElement(self.group, {k: v * other for k, v in self.coeffs.items()},
                                    self.prec)
        self._check(other)
        out = {}
        mul = self.group.mul
        for a, x in self.coeffs.items():
            for b, y in other.coeffs.items():
                g = mul(a, b)
                out[g] = out[g] + x * y if g in out else x * y
        prec = None
        if self.prec is not None or other.prec is not None:
            va, vb = self._min_val(), other._min_val()
            cands = []
            if self.prec is not None:
                cands.append(self.prec + (vb if vb is not None else 0))
            if other.prec is not None:
                cands.append(other.prec + (va if va is not None else 0))
            prec = min(cands)
        return GroupRingElement(self.group, out, prec)

    def __rmul__(self, other):
        return self * other

    def __pow__(self, k: int):
        result = GroupRingElement.identity(self.group)
        for _ in range(k):
            result = result * self
        return result

    def compare(self, other) -> str:
        """'equal', 'unequal' or 'undecidable' (approximate p-adic coefficients)."""
        diff = self - other
        if diff.prec is None:
            return "equal" if not diff.coeffs else "unequal"
        p = self._p()
        for c in diff.coeffs.values():
            v = _val(c, p)
            if v is not None and v < diff.prec:
                return "unequal"
        return "equal" if diff.prec > 0 else "undecidable"

    def __eq__(self, other):
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        return self.group == other.group and self.compare(other) == "equal"

    __hash__ = None

    def is_integral(self) -> bool:
        p = self._p()
        for c in self.coeffs.values():
            if isinstance(c, (int, Fraction)):
                if p is None:
                    if Fraction(c).denominator != 1:
                        return False
                elif (_val(c, p) or 0) < 0:
                    return False
            elif isinstance(c, PadicCyclo):
                if c.valuation() < 0:
                    return False
            elif isinstance(c, CycloElement):
                if c.den != 1:
                    return False
        return True

    def act(self, v):
        """sum coeff(g) g(v) for v a CycloElement or PadicCyclo."""
        M = v.m
        total = None
        for g, c in self.coeffs.items():
            term = galois_apply(self.group.galois(g, M), v) * c
            total = term if total is None else total + term
        if total is None:
            total = v * 0
        if self.prec is not None and isinstance(total, PadicCyclo):
            total = total.with_prec(self.prec + min(v.valuation(), 0))
        return total

    def restrict(self, target) -> "GroupRingElement":
        """Image under restriction to a quotient group (smaller modulus or level)."""
        out = {}
        if isinstance(self.group, UnitGroup) and isinstance(target, UnitGroup):
            if self.group.m % target.m:
                raise DomainError("target is not a quotient")
            key = (lambda a: a % target.m if target.m > 1 else 1)
        elif isinstance(self.group, Gamma) and isinstance(target, Gamma):
            key = (lambda b: b % target.order)
        else:
            raise DomainError("unsupported restriction")
        for g, c in self.coeffs.items():
            k = key(g)
            out[k] = out[k] + c if k in out else c
        return GroupRingElement(target, out, self.prec)

    def conjugate_involution(self) -> "GroupRingElement":
        """g -> g^{-1} on group labels."""
        return GroupRingElement(self.group, {self.group.inverse(g): c for g, c in self.coeffs.items()},
                                self.prec)

    def __repr__(self):
        items = ", ".join(f"{g}: {c}" for g, c in sorted(self.coeffs.items(), key=lambda t: t[0]))
        return f"GroupRingElement({self.group}, {{{items}}})"


def _min_prec(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


# ---------------------------------------------------------------------------
# idempotents and special elements


def idempotent_delta(k: int, p: int, n: int, digits: int) -> GroupRingElement:
    """e_theta for theta = omega^k on Delta: (1/(p-1)) sum omega(x)^{-k} sigma_x."""
    mod = p**digits
    inv = pow(p - 1, -1, mod)
    coeffs = {}
    for x in range(1, p):
        w = teichmuller_int(x, p, digits)
        coeffs[x] = Fraction(pow(w, -k % (p - 1), mod) * inv % mod)
    return GroupRingElement(Delta(p, n), coeffs, digits)


def norm_delta(p: int, n: int) -> GroupRingElement:
    return GroupRingElement.norm(Delta(p, n))


def partial_norm_projector(p: int, n: int, k: int, q0: int | None = None) -> GroupRingElement:
    """(1/p^{n-k}) sum over the subgroup Gal(K_n/K_k), generated by gamma0^{p^k}."""
    G = Gamma(p, n, q0)
    step = p**k
    c = Fraction(1, p ** (n - k))
    return GroupRingElement(G, {b: c for b in range(0, p**n, step)})


def idempotent_conductor_level(level: int, p: int, n: int, q0: int | None = None) -> GroupRingElement:
    """Sum of e_chi over characters of Gamma_n of conductor p^{level+1}."""
    if not 0 <= level <= n:
        raise DomainError("level out of range")
    e = partial_norm_projector(p, n, level, q0)
    if level:
        e = e - partial_norm_projector(p, n, level - 1, q0)
    return e


def ell_operator(p: int, n: int, q0: int | None = None) -> GroupRingElement:
    """l_n = sum p^{n-i} e_i."""
    out = GroupRingElement(Gamma(p, n, q0), {})
    for i in range(n + 1):
        out = out + idempotent_conductor_level(i, p, n, q0) * p ** (n - i)
    return out


def idempotent_unit_group(chi, M: int | None = None) -> GroupRingElement:
    """e_chi = (1/|G|) sum conj(chi)(a) sigma_a on (Z/m)^x with exact values in Q(zeta_M)."""
    m = chi.modulus
    G = UnitGroup(m)
    M = chi.order if M is None else M
    elems = G.elements()
    c = Fraction(1, len(elems))
    cj = chi.conjugate()
    return GroupRingElement(G, {a: cj.value(a, M) * c for a in elems})


def stickelberger_eps(p: int, n: int) -> GroupRingElement:
    """(1/p^{n+1}) sum_{p not | a} a sigma_a on (Z/p^{n+1})^x."""
    m = p ** (n + 1)
    return GroupRingElement(UnitGroup(m), {a: Fraction(a, m) for a in range(1, m) if a % p})


@lru_cache(maxsize=None)
def gamma_log_table(p: int, n: int, q0: int) -> dict:
    """<a> -> b with <a> = (1+q0)^b mod p^{n+1}."""
    m = p ** (n + 1)
    table, x = {}, 1
    for b in range(p**n):
        table[x] = b
        x = x * (1 + q0) % m
    return table


def gamma_component(a: int, p: int, n: int, q0: int | None = None) -> int:
    """Label of the Gamma_n-component of sigma_a."""
    q0 = p if q0 is None else q0
    m = p ** (n + 1)
    w = teichmuller_int(a % p, p, n + 1)
    return gamma_log_table(p, n, q0)[a * pow(w, -1, m) % m]


def stickelberger_eps_twisted(psi, p: int, n: int, digits: int, q0: int | None = None
                              ) -> GroupRingElement:
    """(1/p^{n+1}) sum_{1<=a<=p^{n+1}, p not | a} a psi(a) gamma_n(a) on Gamma_n.

    ``psi`` is a character mod p (values in mu_{p-1}, read p-adically).
    """
    from .characters import padic_root_of_unity
    m = p ** (n + 1)
    mod = p**digits
    acc = {}
    for a in range(1, m):
        if a % p == 0:
            continue
        s, z = padic_root_of_unity(psi.frac(a), p, 0, digits)
        if z:
            raise DomainError("character values must lie in mu_{p-1}")
        b = gamma_component(a, p, n, q0)
        acc[b] = (acc.get(b, 0) + a * s) % mod
    coeffs = {b: Fraction(c, m) for b, c in acc.items()}
    return GroupRingElement(Gamma(p, n, q0), coeffs, digits - (n + 1))


# ---------------------------------------------------------------------------
# power series in T and the correspondence with Gamma_n


class TruncatedPowerSeries:
    def __init__(self, coeffs, degree: int | None = None, var: str = "T"):
        self.coeffs = [Fraction(c) for c in coeffs]
        self.degree = len(self.coeffs) if degree is None else degree
        self.var = var

    def __call__(self, x):
        """Horner evaluation at an element x (ring element)."""
        acc = None
        for c in reversed(self.coeffs):
            acc = x * 0 + c if acc is None else acc * x + c
        return acc if acc is not None else x * 0


def reduce_mod_omega(g: TruncatedPowerSeries, p: int, n: int, q0: int | None = None
                     ) -> GroupRingElement:
    """Image of g(T) under T -> gamma0 - 1 in Q_p[Gamma_n]."""
    if g.degree < p**n:
        raise DomainError("truncation degree below p^n")
    G = Gamma(p, n, q0)
    t = GroupRingElement.basis(G, 1 % G.order) - GroupRingElement.identity(G)
    acc = GroupRingElement(G, {})
    for c in reversed(g.coeffs):
        acc = acc * t + c
    return acc


def coefficients_by_characters(g: TruncatedPowerSeries, p: int, n: int) -> dict:
    """b -> (1/p^n) sum_chi g(chi(gamma0) - 1) conj(chi)(gamma0^b), exact in Q(zeta_{p^n})."""
    N = p**n
    vals = []
    for j in range(N):
        z = embed_root(N, j) if N > 1 else CycloElement.one(1)
        vals.append(g(z - 1))
    out = {}
    for b in range(N):
        s = CycloElement.zero(N)
        for j in range(N):
            s = s + vals[j] * (embed_root(N, -j * b) if N > 1 else CycloElement.one(1))
        out[b] = (s * Fraction(1, N)).rational_value()
    return out


def element_from_l_values(values, p: int, n: int, q0: int | None = None) -> GroupRingElement:
    """The element of Q_p[Gamma_n] with e_chi_j eps = values[j] e_chi_j.

    chi_j(gamma0) = zeta_{p^n}^j, realized as zeta_{p^{n+1}}^{pj} in Q_p(zeta_{p^{n+1}}).
    Each coefficient must descend to Q_p; otherwise ArithmeticError.
    """
    N = p**n
    m = p ** (n + 1)
    if len(values) != N:
        raise DomainError("need one value per character of Gamma_n")
    coeffs, prec = {}, None
    for b in range(N):
        total = None
        for j, L in enumerate(values):
            term = galois_shift(L, -p * j * b % m)
            total = term if total is None else total + term
        c = total.scale(Fraction(1, N))
        if not c.is_scalar():
            raise ArithmeticError(f"coefficient {b} does not lie in Q_p")
        coeffs[b] = Fraction(c.coeffs[0], p**c.shift)
        prec = c.prec if prec is None else min(prec, c.prec)
    return GroupRingElement(Gamma(p, n, q0), coeffs, prec)


def galois_shift(x: PadicCyclo, k: int) -> PadicCyclo:
    """zeta^k * x."""
    from .cyclotomic import reduce_poly
    m = x.m
    raw = [0] * m
    for i, c in enumerate(x.coeffs):
        if c:
            raw[(i + k) % m] += c
    return PadicCyclo(x.p, m, reduce_poly(raw, m, x.p**x.digits), x.shift, x.digits)


def character_value_of(eps: GroupRingElement, j: int, digits: int) -> PadicCyclo:
    """sum_b c_b zeta_{p^n}^{jb}: the scalar by which eps acts on e_chi_j."""
    G = eps.group
    p, n = G.p, G.n
    m = p ** (n + 1)
    from .cyclotomic import reduce_poly
    raw = [0] * m
    den_v = 0
    for c in eps.coeffs.values():
        c = Fraction(c)
        den_v = max(den_v, vp(c.denominator, p) or 0)
    mod = p ** (digits + den_v)
    for b, c in eps.coeffs.items():
        c = Fraction(c) * p**den_v
        num = c.numerator * pow(c.denominator, -1, mod)
        raw[(p * j * b) % m] += num
    prec = digits if eps.prec is None else min(digits, eps.prec)
    return PadicCyclo(p, m, reduce_poly(raw, m, mod), den_v, prec + den_v)
