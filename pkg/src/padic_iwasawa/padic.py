"""Precision-tracked arithmetic in Z_p and Q_p.

A :class:`PadicScalar` is an element of Z_p known modulo p^N.  Mixed
precision arithmetic takes the minimum precision, so the loss of digits
is always visible.  Division by p is never silent: it produces a
:class:`PadicFraction`.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache


class PrecisionError(ArithmeticError):
    """Raised when a result cannot be certified at the available precision."""


class Tri(Enum):
    """Three-valued comparison outcome."""

    EQUAL = "equal"
    UNEQUAL = "unequal"
    UNDECIDABLE = "undecidable"


def vp(x: int, p: int) -> int | None:
    """Exact p-adic valuation of a nonzero integer (``None`` for zero)."""
    if x == 0:
        return None
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def vp_bounded(x: int, p: int, cap: int) -> int:
    """Valuation of ``x`` known modulo p^cap; returns ``cap`` for zero."""
    if x == 0:
        return cap
    v = 0
    while v < cap and x % p == 0:
        x //= p
        v += 1
    return v


@lru_cache(maxsize=4096)
def teichmuller_int(a: int, p: int, N: int) -> int:
    """Integer in [0, p^N) representing the Teichmuller lift of ``a``."""
    if a % p == 0:
        raise ValueError(f"{a} is divisible by {p}: no Teichmuller lift")
    mod = p**N
    x = a % mod
    # x -> x^p gains one correct digit per step
    for _ in range(N + 1):
        y = pow(x, p, mod)
        if y == x:
            return x
        x = y
    return x


@dataclass(frozen=True)
class PadicScalar:
    """An element of Z_p known modulo p^prec."""

    p: int
    residue: int
    prec: int

    def __post_init__(self):
        if self.p < 3 or self.p % 2 == 0:
            raise ValueError("only odd primes are supported")
        if self.prec < 0:
            raise ValueError("negative precision")
        object.__setattr__(self, "residue", self.residue % self.p**self.prec)

    @classmethod
    def from_int(cls, p: int, x: int, prec: int) -> "PadicScalar":
        return cls(p, x, prec)

    @property
    def modulus(self) -> int:
        return self.p**self.prec

    @property
    def unit_valuation(self) -> int | None:
        """Valuation if it is determined (< prec), else ``None`` (at least prec)."""
        v = vp_bounded(self.residue, self.p, self.prec)
        return v if v < self.prec else None

    def valuation_lower_bound(self) -> int:
        return vp_bounded(self.residue, self.p, self.prec)

    def is_unit(self) -> bool:
        return self.prec > 0 and self.residue % self.p != 0

    def _check(self, other) -> "PadicScalar":
        if isinstance(other, int):
            return PadicScalar(self.p, other, self.prec)
        if not isinstance(other, PadicScalar) or other.p != self.p:
            raise TypeError("incompatible p-adic operands")
        return other

    def __add__(self, other):
        other = self._check(other)
        return PadicScalar(self.p, self.residue + other.residue, min(self.prec, other.prec))

    __radd__ = __add__

    def __neg__(self):
        return PadicScalar(self.p, -self.residue, self.prec)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        # error terms: p^prec_a * b and p^prec_b * a
        prec = min(self.prec + other.valuation_lower_bound(),
                   other.prec + self.valuation_lower_bound())
        return PadicScalar(self.p, self.residue * other.residue, prec)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return invert(self) ** (-k)
        result = PadicScalar(self.p, 1, self.prec)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def with_prec(self, prec: int) -> "PadicScalar":
        if prec > self.prec:
            raise PrecisionError("cannot raise precision")
        return PadicScalar(self.p, self.residue, prec)

    def compare(self, other) -> Tri:
        other = self._check(other)
        prec = min(self.prec, other.prec)
        if (self.residue - other.residue) % self.p**prec:
            return Tri.UNEQUAL
        return Tri.EQUAL if prec > 0 else Tri.UNDECIDABLE

    def __eq__(self, other):
        if isinstance(other, (int, PadicScalar)):
            return self.compare(other) is Tri.EQUAL
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.residue, self.prec))

    def divide_by_p(self, k: int = 1) -> "PadicFraction":
        return PadicFraction(self, k)

    def lift(self) -> int:
        return self.residue

    def __repr__(self):
        return f"{self.residue} + O({self.p}^{self.prec})"


@dataclass(frozen=True)
class PadicFraction:
    """The element ``numerator / p^k`` of Q_p."""

    numerator: PadicScalar
    k: int = 0

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("denominator exponent must be non-negative")
        num, k = self.numerator, self.k
        # canonical: strip common powers of p while k > 0
        while k > 0 and num.prec > 0 and num.residue % num.p == 0:
            num = PadicScalar(num.p, num.residue // num.p, num.prec - 1)
            k -= 1
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "k", k)

    @property
    def p(self) -> int:
        return self.numerator.p

    @property
    def absolute_prec(self) -> int:
        """The value is known modulo p^absolute_prec."""
        return self.numerator.prec - self.k

    @property
    def valuation(self) -> int | None:
        v = self.numerator.unit_valuation
        return None if v is None else v - self.k

    def _align(self, other: "PadicFraction"):
        k = max(self.k, other.k)
        a = self.numerator * self.p ** (k - self.k)
        b = other.numerator * self.p ** (k - other.k)
        # scaling by p^j makes j more digits known
        a = PadicScalar(self.p, a.residue, self.numerator.prec + k - self.k)
        b = PadicScalar(self.p, b.residue, other.numerator.prec + k - other.k)
        return a, b, k

    def _coerce(self, other):
        if isinstance(other, PadicFraction):
            return other
        if isinstance(other, PadicScalar):
            return PadicFraction(other, 0)
        if isinstance(other, int):
            return PadicFraction(PadicScalar(self.p, other, self.numerator.prec + self.k), 0)
        raise TypeError("incompatible operand")

    def __add__(self, other):
        other = self._coerce(other)
        a, b, k = self._align(other)
        return PadicFraction(a + b, k)

    __radd__ = __add__

    def __neg__(self):
        return PadicFraction(-self.numerator, self.k)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        other = self._coerce(other)
        return PadicFraction(self.numerator * other.numerator, self.k + other.k)

    __rmul__ = __mul__

    def compare(self, other) -> Tri:
        other = self._coerce(other)
        a, b, _ = self._align(other)
        return a.compare(b)

    def __repr__(self):
        if self.k == 0:
            return repr(self.numerator)
        return f"({self.numerator}) / {self.p}^{self.k}"


def teichmuller(a: int, p: int, N: int) -> PadicScalar:
    """The (p-1)-th root of unity congruent to ``a`` mod p, correct mod p^N."""
    if N < 1:
        raise ValueError("precision must be positive")
    if a % p == 0:
        raise ValueError(f"{a} is not coprime to {p}")
    return PadicScalar(p, teichmuller_int(a, p, N), N)


def invert(x: PadicScalar) -> PadicScalar:
    if not x.is_unit():
        raise ZeroDivisionError("not invertible at this precision")
    return PadicScalar(x.p, pow(x.residue, -1, x.modulus), x.prec)


def log_terms_needed(p: int, start_val: int, N: int) -> int:
    """Smallest K such that v_p(y^k / k) >= N for all k > K when v_p(y) >= start_val."""
    k = 1
    last_bad = 0
    # k*start_val - log_p(k) is eventually increasing; scan until safely past
    while True:
        if k * start_val - _floor_log(k, p) < N:
            last_bad = k
        elif k > 2 * last_bad + p:
            return last_bad
        k += 1


def _floor_log(k: int, p: int) -> int:
    e = 0
    while k >= p:
        k //= p
        e += 1
    return e


def log1p_unit(u: PadicScalar, N: int | None = None) -> PadicScalar:
    """p-adic logarithm of a principal unit of Z_p, correct mod p^N."""
    p = u.p
    if u.prec < 1 or u.residue % p != 1:
        raise ValueError("log1p_unit requires u = 1 mod p")
    if N is None:
        N = u.prec
    N = min(N, u.prec)
    work = N + _floor_log(max(N, 1) * 2 + p, p) + 2
    mod = p**work
    y = (u.residue - 1) % mod
    K = log_terms_needed(p, 1, N)
    top = _floor_log(K, p)
    # accumulate sum of (-1)^(k+1) y^k p^(top - v(k)) / k' ; value = acc / p^top
    acc = 0
    big = p ** (work + top)
    yk = 1
    for k in range(1, K + 1):
        yk = yk * y % big
        v = vp(k, p)
        unit = k // p**v
        term = yk * p ** (top - v) * pow(unit, -1, big)
        acc = acc + term if k % 2 else acc - term
    acc %= big
    # acc is divisible by p^top up to the known digits
    out = PadicFraction(PadicScalar(p, acc, N + top), top)
    if out.k:
        raise PrecisionError("logarithm of a principal unit is not integral")
    return out.numerator.with_prec(N)
