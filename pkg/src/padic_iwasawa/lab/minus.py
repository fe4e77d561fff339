"""The odd part: 1/pi_n against T_n locally, and the global index of C_n in E_n^-."""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from ..characters import h_minus, teichmuller_character
from ..cyclotomic import (CycloElement, DomainError, embed_root, euler_phi, galois_apply,
                          one_over_pi, special_element)
from ..group_ring import (Gamma, GroupRingElement, UnitGroup, idempotent_conductor_level,
                          stickelberger_eps, stickelberger_eps_twisted)
from ..lattice import IntLattice, default_precision
from .common import (VACUOUS, combine, log_image, padic, span, status_of, theta_projector)


def _odd_ks(p: int) -> list:
    return [k for k in range(p - 1) if k % 2 == 1]


def _minus_one_k(p: int) -> int:
    return (p - 2) % (p - 1)


# ---------------------------------------------------------------------------
# local statements over Z_p


def verify_minus_integrality(p: int, n: int, N: int | None = None, **_):
    """e_chi(1/pi_n) lies in Z_p[zeta] for odd chi != omega^-1; the excluded case is recorded."""
    digits = N or default_precision(p, n)
    x = padic(one_over_pi(p, n), p, digits)
    witness, statuses = {}, []
    for k in _odd_ks(p):
        v = theta_projector(k, p, n, digits).act(x).valuation()
        if k == _minus_one_k(p):
            witness[f"omega^{k} (excluded)"] = {"valuation": v, "integral": v >= 0}
            continue
        witness[f"omega^{k}"] = {"valuation": v}
        statuses.append(status_of(v >= 0))
    if not statuses:
        return VACUOUS, witness, ["only odd character is omega^-1"]
    return combine(statuses), witness, []


def twisted_eps(p: int, n: int, k: int, digits: int) -> GroupRingElement:
    """eps_n(chi) = p^-(n+1) sum a chi(a) gamma_n(a) for chi = omega^k."""
    return stickelberger_eps_twisted(teichmuller_character(p) ** k, p, n, digits)


def omega_inverse_eps(p: int, n: int, digits: int) -> GroupRingElement:
    """(1 - (1+p) gamma0) eps_n(omega^-1): the shadow of g at level n."""
    G = Gamma(p, n)
    factor = GroupRingElement.identity(G) - GroupRingElement.basis(G, 1 % G.order) * (1 + p)
    return factor * twisted_eps(p, n, _minus_one_k(p), digits)


def verify_minus_identity(p: int, n: int, N: int | None = None, **_):
    """e_chi(1/pi_n) = eps_n(chi) e_chi T_n; for omega^-1 with the (1 - (1+p) gamma0) factor."""
    digits = N or default_precision(p, n)
    x = padic(one_over_pi(p, n), p, digits)
    T = padic(special_element("leopoldt_T", p, n), p, digits)
    G = Gamma(p, n)
    factor = GroupRingElement.identity(G) - GroupRingElement.basis(G, 1 % G.order) * (1 + p)
    witness, statuses = {}, []
    for k in _odd_ks(p):
        e = theta_projector(k, p, n, digits)
        ex, eT = e.act(x), e.act(T)
        if k == _minus_one_k(p):
            eps = omega_inverse_eps(p, n, digits)
            ok = factor.act(ex).compare(eps.act(eT))
            witness[f"omega^{k} (twisted)"] = {"identity": ok,
                                               "eps integral": eps.is_integral()}
            statuses.append(status_of(ok))
            statuses.append(status_of(eps.is_integral()))
        else:
            eps = twisted_eps(p, n, k, digits)
            ok = ex.compare(eps.act(eT))
            witness[f"omega^{k}"] = ok
            statuses.append(status_of(ok))
    return combine(statuses), witness, []


def minus_projector(p: int, n: int):
    """(1 - j)/2 on K_n as a group ring element over (Z/p^{n+1})^x."""
    m = p ** (n + 1)
    U = UnitGroup(m)
    return GroupRingElement(U, {1: Fraction(1, 2), m - 1: Fraction(-1, 2)})


def log_nu(p: int, n: int, digits: int):
    """sum_i p^{i-n} e_i (1/pi - 1/conj(pi) - 2(1+p) gamma0 e_{omega^-1}(1/pi))."""
    m = p ** (n + 1)
    x = padic(one_over_pi(p, n), p, digits)
    theta = x - galois_apply(m - 1, x)
    tw = theta_projector(_minus_one_k(p), p, n, digits).act(x)
    inner = theta - galois_apply(1 + p, tw).scale(2 * (1 + p))
    total = None
    for i in range(n + 1):
        term = idempotent_conductor_level(i, p, n).act(inner).scale(Fraction(p) ** (i - n))
        total = term if total is None else total + term
    return total


def verify_nu_membership(p: int, n: int, N: int | None = None, **_):
    """log_p nu_n lies in the minus part of log_p U_n (finite level only).

    The witness splits the element into its omega-component and the rest, and also
    tests the variant whose omega-component is multiplied by (gamma0 - 1 - p).
    """
    digits = N or default_precision(p, n)
    target = log_nu(p, n, digits)
    img = log_image(p, n, "U", N=digits)
    minus = minus_projector(p, n)
    lat = span([minus.act(v) for v in _lattice_vectors(img.lattice, p, n, digits)])
    w = theta_projector(1, p, n, digits).act(target)
    rest = target - w
    w_twisted = galois_apply(1 + p, w) - w.scale(1 + p)
    inside = lat.contains(span([target]))
    odd = target.compare(-galois_apply(p ** (n + 1) - 1, target))
    witness = {"in minus log-image": inside, "odd under j": odd,
               "non-omega components inside": lat.contains(span([rest])),
               "omega component inside": lat.contains(span([w])) if not w.is_zero() else "zero",
               "with (gamma0 - 1 - p) on the omega component": lat.contains(
                   span([rest + w_twisted]))}
    notes = ["uniqueness modulo roots of unity is a statement about the tower; not checked"]
    return combine([status_of(inside), status_of(odd)]), witness, notes


def _lattice_vectors(lat, p, n, digits):
    from .local import _lattice_elements
    return _lattice_elements(lat, p, n)


# ---------------------------------------------------------------------------
# global statements over Z[G_n], G_n = (Z/p^{n+1})^x


class MinusData:
    """Exact lattices of the Stickelberger-type construction at level n."""

    def __init__(self, p: int, n: int):
        self.p, self.n = p, n
        self.m = m = p ** (n + 1)
        self.G = [a for a in range(1, m) if a % p]
        self.idx = {a: i for i, a in enumerate(self.G)}
        self.order = len(self.G)
        self.eps = stickelberger_eps(p, n)

    # group ring elements as coefficient vectors
    def vec(self, x: GroupRingElement):
        out = [Fraction(0)] * self.order
        for a, c in x.coeffs.items():
            out[self.idx[a % self.m]] += Fraction(c)
        return out

    def elt(self, a, c=1) -> GroupRingElement:
        return GroupRingElement(UnitGroup(self.m), {a: Fraction(c)})

    def translates(self, x: GroupRingElement):
        return [self.elt(g) * x for g in self.G]

    def j(self) -> GroupRingElement:
        return self.elt(self.m - 1)

    @property
    def full(self) -> IntLattice:
        return IntLattice([[Fraction(int(i == k)) for k in range(self.order)]
                           for i in range(self.order)])

    @property
    def minus(self) -> IntLattice:
        """Z[G]^- = {x : jx = -x}."""
        # (e_a - e_{-a})/2 spans the eigenspace over Q; cut it down to Z[G]
        rows = [[Fraction(int(i == k) - int(self.G[k] == self.m - self.G[i]), 2)
                 for k in range(self.order)] for i in range(self.order)]
        return IntLattice(rows).intersect(self.full)

    def one_minus_j_full(self) -> IntLattice:
        one = self.elt(1)
        return IntLattice([self.vec(g * (one - self.j())) for g in self.translates(one)])

    def I(self) -> IntLattice:
        """Z[G](sigma_c - c*) plus p^{n+1}."""
        rows = []
        for c in self.G:
            cs = pow(c, -1, self.m)
            gen = self.elt(c) - self.elt(1, cs)
            rows += [self.vec(t) for t in self.translates(gen)]
        rows += [[Fraction(self.m * int(i == k)) for k in range(self.order)]
                 for i in range(self.order)]
        return IntLattice(rows)

    def times_eps(self, L: IntLattice) -> IntLattice:
        rows = [self.vec(self.from_vec(r) * self.eps) for r in L.rows()]
        return IntLattice(rows)

    def from_vec(self, v) -> GroupRingElement:
        return GroupRingElement(UnitGroup(self.m), {a: c for a, c in zip(self.G, v) if c})

    def script_I(self) -> IntLattice:
        """Z[G] eps cap Z[G]."""
        span_eps = IntLattice([self.vec(t) for t in self.translates(self.eps)])
        return span_eps.intersect(self.full)

    def times(self, L: IntLattice, x: GroupRingElement) -> IntLattice:
        return IntLattice([self.vec(self.from_vec(r) * x) for r in L.rows()])

    # field side: coordinates of elements of Q(zeta_m) in the power basis
    def field_vec(self, x: CycloElement):
        return [Fraction(c, x.den) for c in x.coeffs] + [Fraction(0)] * 0

    def act_field(self, v, x: CycloElement) -> CycloElement:
        total = CycloElement.zero(self.m)
        for a, c in zip(self.G, v):
            if c:
                total = total + galois_apply(a, x) * c
        return total


@lru_cache(maxsize=None)
def minus_data(p: int, n: int) -> MinusData:
    return MinusData(p, n)


def _pad(v, dim):
    return list(v) + [Fraction(0)] * (dim - len(v))


def stickelberger_index_parts(p: int, n: int) -> dict:
    """All exact lattices and indices of the global statement at level n."""
    D = minus_data(p, n)
    m, dim = D.m, euler_phi(D.m)
    I = D.I()
    sI = D.script_I()
    I_eps = D.times_eps(I)
    minus = D.minus
    sI_minus = sI.intersect(minus)
    one_minus_j_sI = D.times(sI, D.elt(1) - D.j())
    # field side
    T = special_element("leopoldt_T", p, n)
    inv_pi = one_over_pi(p, n)
    theta = inv_pi - galois_apply(m - 1, inv_pi)
    jm1_T = galois_apply(m - 1, T) - T
    E_minus = IntLattice([_pad(D.field_vec(galois_apply(a, jm1_T)), dim) for a in D.G])
    C = IntLattice([_pad(D.field_vec(D.act_field(r, theta)), dim) for r in I.rows()])
    return {"D": D, "I": I, "script_I": sI, "I_eps": I_eps, "minus": minus,
            "script_I_minus": sI_minus, "one_minus_j_script_I": one_minus_j_sI,
            "E_minus": E_minus, "C": C}


def _size_guard(p: int, n: int, cap: int = 200):
    if (p - 1) * p**n > cap:
        raise DomainError(f"|G_n| = {(p - 1) * p**n} exceeds the size cap {cap}")


def verify_stickelberger_ideal(p: int, n: int, **_):
    """script I = Z[G] eps cap Z[G] equals I eps."""
    _size_guard(p, n)
    parts = stickelberger_index_parts(p, n)
    ok = parts["script_I"] == parts["I_eps"]
    return status_of(ok), {"rank": parts["script_I"].rank, "equal": ok}, []


def verify_minus_index_prop(p: int, n: int, **_):
    """[Z[G]^- : script I^-] = h^-."""
    _size_guard(p, n)
    parts = stickelberger_index_parts(p, n)
    idx = parts["minus"].index(parts["script_I_minus"])
    h = h_minus(p, n)
    return status_of(idx == h), {"index": idx, "h_minus": h}, []


def verify_minus_2_power(p: int, n: int, **_):
    """[script I^- : (1-j) script I] = 2^{|G|/2 - 1}; also Z[G]^- = (j-1) Z[G]."""
    _size_guard(p, n)
    parts = stickelberger_index_parts(p, n)
    D = parts["D"]
    idx = parts["script_I_minus"].index(parts["one_minus_j_script_I"])
    expected = 2 ** (D.order // 2 - 1)
    minus_ok = parts["minus"] == D.one_minus_j_full()
    witness = {"index": idx, "expected": expected, "Z[G]^- = (j-1)Z[G]": minus_ok}
    return combine([status_of(idx == expected), status_of(minus_ok)]), witness, []


def verify_main_index_theorem(p: int, n: int, **_):
    """[E_n^- : C_n] = 2^{|G|/2 - 1} h^-, exactly; sub-checks as separate fields."""
    _size_guard(p, n)
    parts = stickelberger_index_parts(p, n)
    D = parts["D"]
    E, C = parts["E_minus"], parts["C"]
    try:
        idx = E.index(C)
    except ValueError as exc:
        return status_of(False), {"error": str(exc), "rank E^-": E.rank, "rank C": C.rank}, []
    h = h_minus(p, n)
    expected = 2 ** (D.order // 2 - 1) * h
    sub_I = parts["script_I"] == parts["I_eps"]
    sub_prop = parts["minus"].index(parts["script_I_minus"]) == h
    sub_two = parts["script_I_minus"].index(parts["one_minus_j_script_I"]) == expected // h
    witness = {"index": idx, "expected": expected, "h_minus": h, "|G_n|": D.order,
               "script I = I eps": sub_I, "[Z[G]^- : script I^-] = h^-": sub_prop,
               "[script I^- : (1-j) script I] = 2^(|G|/2-1)": sub_two}
    statuses = [status_of(idx == expected), status_of(sub_I), status_of(sub_prop),
                status_of(sub_two)]
    return combine(statuses), witness, []


def verify_restriction_defect(p: int, n: int, **_):
    """eps_{n+1} restricted to G_n is eps_n + (p-1)/2 N_n; (j-1) eps is compatible."""
    big = stickelberger_eps(p, n + 1)
    small = stickelberger_eps(p, n)
    U = UnitGroup(p ** (n + 1))
    # the norm element runs over units only
    N = GroupRingElement(U, {a: Fraction(1) for a in U.elements()})
    res = big.restrict(U)
    defect = res.compare(small + N * Fraction(p - 1, 2))
    Ub = UnitGroup(p ** (n + 2))
    jb = GroupRingElement(Ub, {1: Fraction(-1), p ** (n + 2) - 1: Fraction(1)})
    js = GroupRingElement(U, {1: Fraction(-1), p ** (n + 1) - 1: Fraction(1)})
    compat = (jb * big).restrict(U).compare(js * small)
    witness = {"defect": defect, "(j-1) compatible": compat}
    return combine([status_of(defect), status_of(compat)]), witness, []


def verify_minus_local(p: int, n: int, N: int | None = None, **_):
    """Integrality and the identity for e_chi(1/pi_n), chi odd, in one report."""
    s1, w1, n1 = verify_minus_integrality(p, n, N)
    s2, w2, n2 = verify_minus_identity(p, n, N)
    statuses = [s for s in (s1, s2) if s != VACUOUS]
    status = combine(statuses) if statuses else VACUOUS
    return status, {"integrality": w1, "identity": w2}, n1 + n2


verify_stickelberger_index = verify_main_index_theorem
