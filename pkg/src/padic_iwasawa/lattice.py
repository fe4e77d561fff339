"""Lattice comparisons over Z_p (at finite precision) and over Z (exact).

Over Z_p a lattice is given by generator rows of rationals approximated mod
p^prec.  Everything goes through full-pivot elimination with pivots of minimal
valuation; the pivot valuations are the elementary divisors (Smith form) of the
generator matrix.  A pivot with valuation within ``slack`` of the working
precision makes the answer undecidable instead of silently wrong.

Over Z, rows are put in Hermite normal form with extended-gcd row operations.
"""
from __future__ import annotations

import math
from fractions import Fraction

from .padic import PrecisionError, vp, vp_bounded

SLACK = 8


def default_precision(p: int, n: int) -> int:
    """Working precision dominating twice the largest expected index exponent."""
    return 2 * (n * p**n + n + 1) + 16


def _frac_val(c: Fraction, p: int):
    if c == 0:
        return None
    return (vp(c.numerator, p) or 0) - (vp(c.denominator, p) or 0)


class PadicLattice:
    """Z_p-span of rows.  Entries are rationals known modulo p^prec."""

    def __init__(self, p: int, rows, prec: int, slack: int = SLACK):
        self.p = p
        self.rows = [[Fraction(c) for c in r] for r in rows]
        self.prec = prec
        self.slack = slack
        self.dim = len(self.rows[0]) if self.rows else 0
        self._smith = None

    @classmethod
    def from_elements(cls, elems, slack: int = SLACK) -> "PadicLattice":
        """Lattice spanned by PadicCyclo elements (coordinates in the power basis)."""
        p = elems[0].p
        prec = min(e.prec for e in elems)
        rows = [[Fraction(c, p**e.shift) for c in e.coeffs] for e in elems]
        return cls(p, rows, prec, slack)

    @classmethod
    def standard(cls, p: int, dim: int, prec: int, scale=1) -> "PadicLattice":
        return cls(p, [[Fraction(scale) if i == j else 0 for j in range(dim)] for i in range(dim)],
                   prec)

    # integer matrix at working precision ------------------------------
    def _scaled(self, shift: int | None = None):
        p = self.p
        if shift is None:
            shift = 0
            for r in self.rows:
                for c in r:
                    if c:
                        shift = max(shift, vp(c.denominator, p) or 0)
        P = self.prec + shift
        mod = p**P
        out = []
        for r in self.rows:
            row = []
            for c in r:
                c = c * p**shift
                row.append(c.numerator * pow(c.denominator, -1, mod) % mod if c else 0)
            out.append(row)
        return out, shift, P

    def smith(self):
        """Sorted elementary divisor valuations of the generator matrix."""
        if self._smith is None:
            A, shift, P = self._scaled()
            vals = _smith_vals(A, self.p, P, self.slack)
            self._smith = sorted(v - shift for v in vals)
        return self._smith

    @property
    def rank(self) -> int:
        return len(self.smith())

    def volume(self) -> int:
        return sum(self.smith())

    def __add__(self, other: "PadicLattice") -> "PadicLattice":
        if other.dim != self.dim or other.p != self.p:
            raise ValueError("lattices live in different spaces")
        return PadicLattice(self.p, self.rows + other.rows, min(self.prec, other.prec),
                            max(self.slack, other.slack))

    def scale(self, q) -> "PadicLattice":
        q = Fraction(q)
        v = _frac_val(q, self.p) or 0
        return PadicLattice(self.p, [[c * q for c in r] for r in self.rows], self.prec + v,
                            self.slack)

    def contains(self, other: "PadicLattice") -> str:
        """'equal' (other is contained in self), 'unequal' or 'undecidable'."""
        try:
            s1 = self.smith()
            s12 = (self + other).smith()
        except PrecisionError:
            return "undecidable"
        if len(s12) != len(s1) or sum(s12) != sum(s1):
            return "unequal"
        return "equal"

    def equals(self, other: "PadicLattice") -> str:
        a = self.contains(other)
        b = other.contains(self)
        if "unequal" in (a, b):
            return "unequal"
        if "undecidable" in (a, b):
            return "undecidable"
        return "equal"

    def index(self, sub: "PadicLattice") -> int:
        """log_p [self : sub]; sub must be contained in self with the same rank."""
        s1, s2 = self.smith(), sub.smith()
        if len(s1) != len(s2):
            raise ValueError(f"rank mismatch {len(s1)} vs {len(s2)}")
        status = self.contains(sub)
        if status == "undecidable":
            raise PrecisionError("containment undecidable at this precision")
        if status != "equal":
            raise ValueError("sublattice is not contained in the lattice")
        return sum(s2) - sum(s1)

    def hnf(self):
        """Echelon form with pivots p^v and entries above pivots reduced (canonical at precision)."""
        A, shift, P = self._scaled()
        p = self.p
        mod = p**P
        rows = [r[:] for r in A]
        out, piv_row = [], 0
        for col in range(self.dim):
            best, bv = None, P
            for i in range(piv_row, len(rows)):
                v = vp_bounded(rows[i][col], p, P)
                if v < bv:
                    best, bv = i, v
            if best is None:
                continue
            if bv >= P - self.slack:
                raise PrecisionError(f"pivot valuation {bv - shift} too close to precision")
            rows[piv_row], rows[best] = rows[best], rows[piv_row]
            pr = rows[piv_row]
            u = pow(pr[col] // p**bv, -1, mod)
            pr[:] = [c * u % mod for c in pr]
            for i in range(len(rows)):
                if i != piv_row and rows[i][col]:
                    # rows below are cleared, rows above reduced into [0, p^bv)
                    f = rows[i][col] // p**bv
                    rows[i] = [(a - f * b) % mod for a, b in zip(rows[i], pr)]
            piv_row += 1
        for r in rows[:piv_row]:
            out.append([Fraction(c, p**shift) for c in r])
        return out

    def solve(self, target, target_prec: int | None = None):
        """Coordinates c (rationals) with sum c_i rows_i = target, and their precision."""
        p = self.p
        k = len(self.rows)
        mat = [[self.rows[i][j] for i in range(k)] + [Fraction(target[j])] for j in range(self.dim)]
        # rational elimination on the approximations; pivots chosen of minimal valuation
        piv_cols, row = [], 0
        for col in range(k):
            best, bv = None, None
            for i in range(row, len(mat)):
                v = _frac_val(mat[i][col], p)
                if v is not None and (bv is None or v < bv):
                    best, bv = i, v
            if best is None:
                continue
            mat[row], mat[best] = mat[best], mat[row]
            inv = 1 / mat[row][col]
            mat[row] = [x * inv for x in mat[row]]
            for i in range(len(mat)):
                if i != row and mat[i][col]:
                    f = mat[i][col]
                    mat[i] = [a - f * b for a, b in zip(mat[i], mat[row])]
            piv_cols.append(col)
            row += 1
        if len(piv_cols) < k:
            raise ValueError("generators are not independent")
        resid = [mat[i][k] for i in range(row, len(mat))]
        smax = max(self.smith(), default=0)
        sol = [Fraction(0)] * k
        for i, col in enumerate(piv_cols):
            sol[col] = mat[i][k]
        vmin = min((v for v in (_frac_val(c, p) for c in sol) if v is not None), default=0)
        known = self.prec if target_prec is None else min(self.prec, target_prec)
        prec = known - smax + min(0, vmin)
        for r in resid:
            v = _frac_val(r, p)
            if v is not None and v < prec:
                raise ValueError("target is not in the span")
        return sol, prec

    def kernel(self, functional) -> "PadicLattice":
        """Sublattice of elements killed by a linear form, given by its values on the rows."""
        p = self.p
        f = [Fraction(c) for c in functional]
        nz = [(i, _frac_val(c, p)) for i, c in enumerate(f) if c]
        if not nz:
            return self
        k = min(nz, key=lambda t: t[1])[0]
        rows = []
        for j, r in enumerate(self.rows):
            if j == k:
                continue
            ratio = f[j] / f[k]
            rows.append([a - ratio * b for a, b in zip(r, self.rows[k])])
        return PadicLattice(p, rows, self.prec, self.slack)


def _smith_vals(A, p, P, slack):
    rows = [r[:] for r in A]
    mod = p**P
    vals = []
    while rows and rows[0]:
        best, bv = None, P
        for i, r in enumerate(rows):
            for j, c in enumerate(r):
                if c:
                    v = vp_bounded(c, p, P)
                    if v < bv:
                        best, bv = (i, j), v
                        if v == 0:
                            break
            if bv == 0:
                break
        if best is None:
            break
        if bv >= P - slack:
            raise PrecisionError(f"pivot valuation {bv} within slack of precision {P}")
        vals.append(bv)
        i, j = best
        pr = rows.pop(i)
        pk = p**bv
        u = pow(pr[j] // pk, -1, mod)
        new = []
        for r in rows:
            c = r[j]
            if c:
                f = (c // pk) * u % mod
                r = [(a - f * b) % mod for a, b in zip(r, pr)]
            new.append(r[:j] + r[j + 1:])
        rows = new
    return vals


# ---------------------------------------------------------------------------
# exact lattices over Z


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hnf_int(rows):
    """Row Hermite normal form of an integer matrix (zero rows dropped)."""
    A = [list(r) for r in rows if any(r)]
    if not A:
        return []
    ncols = len(A[0])
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(A)):
            if A[i][c]:
                piv = i
                break
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        for i in range(r + 1, len(A)):
            if A[i][c]:
                a, b = A[r][c], A[i][c]
                g, x, y = _xgcd(a, b)
                ag, bg = a // g, b // g
                ri, rr = A[i], A[r]
                A[r] = [x * s + y * t for s, t in zip(rr, ri)]
                A[i] = [-bg * s + ag * t for s, t in zip(rr, ri)]
        if A[r][c] < 0:
            A[r] = [-v for v in A[r]]
        pv = A[r][c]
        for i in range(r):
            q = A[i][c] // pv
            if q:
                A[i] = [s - q * t for s, t in zip(A[i], A[r])]
        r += 1
        if r == len(A):
            break
    return [row for row in A[:r] if any(row)]


class IntLattice:
    """Z-span of rational rows, stored as integer rows over a common denominator."""

    def __init__(self, rows, den: int | None = None):
        rows = [[Fraction(c) for c in r] for r in rows]
        self.dim = len(rows[0]) if rows else 0
        if den is None:
            den = math.lcm(1, *(c.denominator for r in rows for c in r))
        self.den = den
        self.basis = hnf_int([[int(c * den) for c in r] for r in rows])

    @property
    def rank(self) -> int:
        return len(self.basis)

    def rows(self):
        return [[Fraction(c, self.den) for c in r] for r in self.basis]

    def _common(self, other: "IntLattice"):
        D = math.lcm(self.den, other.den)
        a = [[c * (D // self.den) for c in r] for r in self.basis]
        b = [[c * (D // other.den) for c in r] for r in other.basis]
        return a, b, D

    def __add__(self, other: "IntLattice") -> "IntLattice":
        a, b, D = self._common(other)
        return IntLattice([[Fraction(c, D) for c in r] for r in a + b], D)

    def canonical(self):
        """Canonical form: HNF rows as rationals (independent of the chosen denominator)."""
        return tuple(tuple(Fraction(c, self.den) for c in r) for r in self.basis)

    def __eq__(self, other):
        if not isinstance(other, IntLattice):
            return NotImplemented
        return self.canonical() == other.canonical()

    def equals(self, other) -> str:
        return "equal" if self == other else "unequal"

    def contains(self, other: "IntLattice") -> bool:
        return (self + other) == self

    def scale(self, q) -> "IntLattice":
        q = Fraction(q)
        return IntLattice([[c * q for c in r] for r in self.rows()])

    def coordinates(self, other: "IntLattice"):
        """Matrix expressing other's basis in self's basis (rational)."""
        from .cyclotomic import solve_rational
        mine = self.rows()
        out = []
        for r in other.rows():
            sol = solve_rational(mine, r)
            if sol is None:
                raise ValueError("lattices span different subspaces")
            out.append(sol)
        return out

    def index(self, sub: "IntLattice") -> int:
        """[self : sub] for sub contained in self, both of the same rank."""
        if sub.rank != self.rank:
            raise ValueError(f"rank mismatch {self.rank} vs {sub.rank}")
        if not self.contains(sub):
            raise ValueError("sublattice is not contained in the lattice")
        C = self.coordinates(sub)
        return abs(int(_det(C)))

    def intersect(self, other: "IntLattice") -> "IntLattice":
        a, b, D = self._common(other)
        r = self.dim
        stacked = [row + row for row in a] + [row + [0] * r for row in b]
        H = hnf_int(stacked)
        inter = [row[r:] for row in H if not any(row[:r])]
        if not inter:
            return _empty(r, D)
        return IntLattice([[Fraction(c, D) for c in row] for row in inter], D)


def _empty(dim, den):
    lat = IntLattice.__new__(IntLattice)
    lat.dim, lat.den, lat.basis = dim, den, []
    return lat


def _det(M):
    M = [[Fraction(c) for c in r] for r in M]
    n = len(M)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det *= M[c][c]
        for i in range(c + 1, n):
            if M[i][c]:
                f = M[i][c] / M[c][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return det
