"""Checks on the local unit group U_n of Q_p(zeta_{p^{n+1}}), one component at a time."""
from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache
from math import comb

from ..characters import gamma_character, lp_at_one, teichmuller_character
from ..cyclotomic import DomainError, field_log, galois_apply, pi_valuation
from ..group_ring import (Gamma, GroupRingElement, element_from_l_values, ell_operator,
                          idempotent_conductor_level)
from ..lattice import PadicLattice, default_precision
from ..padic import PrecisionError, teichmuller_int, vp
from .common import (FALSIFIED, UNDECIDABLE, VACUOUS, VERIFIED, combine, gamma_act,
                     gamma_orbit, gamma_span, group_ring_act, log_image, log_one_minus_zeta,
                     one, power_basis, project, span, special, status_of, theta_projector,
                     trace_delta, zeta_power, expected_log_index)


def _digits(p, n, N):
    return N or default_precision(p, n)


def _admissible(p, theta, keep):
    ks = range(p - 1) if theta is None else [theta % (p - 1)]
    return [k for k in ks if keep(k)]


@lru_cache(maxsize=None)
def epsilon_theta(p: int, n: int, k: int, digits: int) -> GroupRingElement:
    """eps_n(theta), theta = omega^k even, from e_chi eps = L_p(1, theta chi) e_chi."""
    theta = teichmuller_character(p) ** k
    vals = [lp_at_one(theta * gamma_character(p, n, j), p, n, digits).value for j in range(p**n)]
    return element_from_l_values(vals, p, n)


def _lattice_index(big, small):
    """log_p index or a status string when undecidable / not contained."""
    try:
        return big.index(small)
    except PrecisionError:
        return UNDECIDABLE
    except ValueError:
        return FALSIFIED


# ---------------------------------------------------------------------------
# components theta != 1, omega


def verify_theorem_main(p: int, n: int, theta: int | None = None, N: int | None = None):
    """e_theta log U_n = Z_p[Gamma_n] e_theta T_n for each theta = omega^k != 1, omega."""
    digits = _digits(p, n, N)
    ks = _admissible(p, theta, lambda k: k not in (0, 1))
    if not ks:
        return VACUOUS, {"reason": "no character other than 1 and omega"}, []
    T = special("script_T", p, n, digits)
    witness, statuses = {}, []
    for k in ks:
        e = theta_projector(k, p, n, digits)
        L_log = log_image(p, n, "U", ("theta", k), digits).lattice
        L_T = gamma_span(e.act(T), n)
        a, b = L_log.contains(L_T), L_T.contains(L_log)
        witness[f"omega^{k}"] = {"log contains orbit": a, "orbit contains log": b,
                                 "smith": L_log.smith()}
        statuses += [status_of(a), status_of(b)]
    return combine(statuses), witness, []


def verify_iwasawa_corollary(p: int, n: int, theta: int | None = None, N: int | None = None):
    digits = _digits(p, n, N)
    if theta is not None and (theta % 2 or theta % (p - 1) == 0):
        raise DomainError("needs an even nontrivial theta")
    ks = _admissible(p, theta, lambda k: k % 2 == 0 and k != 0)
    if not ks:
        return VACUOUS, {"reason": "no even nontrivial theta"}, []
    T = special("script_T", p, n, digits)
    witness, statuses = {}, []
    for k in ks:
        e = theta_projector(k, p, n, digits)
        eT = e.act(T)
        lz = e.act(log_one_minus_zeta(p, n, digits))
        L_U = log_image(p, n, "U", ("theta", k), digits).lattice
        L_C = log_image(p, n, "C", ("theta", k), digits).lattice
        a = L_C.equals(gamma_span(lz, n))
        # (b) u_n with u_n e_theta T = e_theta log(1 - zeta)
        basis = span(gamma_orbit(eT, n))
        target = [Fraction(c, p**lz.shift) for c in lz.coeffs]
        sol, sprec = basis.solve(target, lz.prec)
        eps = epsilon_theta(p, n, k, digits)
        gaps = []
        for b in range(p**n):
            diff = sol[b] + Fraction(eps.coefficient(b) or 0)
            gaps.append(sprec if diff == 0 else min(vp(diff.numerator, p) - (vp(diff.denominator, p) or 0), sprec))
        b_ok = min(gaps) >= 10 and sprec >= 10
        # (c) index against |Z_p[Gamma]/eps|
        try:
            idx = L_U.index(L_C)
        except (PrecisionError, ValueError) as exc:
            idx = str(exc)
        det_val = _multiplication_volume(eps, p, n, digits)
        c_ok = idx == det_val
        witness[f"omega^{k}"] = {"log C equals orbit of log(1-zeta)": a,
                                 "u_n + eps_n valuation": min(gaps), "index": idx,
                                 "v_p det(eps)": det_val}
        statuses += [status_of(a), status_of(b_ok), status_of(c_ok)]
    return combine(statuses), witness, []


def _multiplication_volume(eps: GroupRingElement, p: int, n: int, digits: int) -> int:
    """v_p det of x -> eps x on Z_p[Gamma_n]."""
    N = p**n
    rows = [[Fraction(eps.coefficient((c - b) % N) or 0) for c in range(N)] for b in range(N)]
    prec = eps.prec if eps.prec is not None else digits
    return PadicLattice(p, rows, prec).volume()


# ---------------------------------------------------------------------------
# indices


def group_ring_lattice(p: int, n: int, digits: int, maximal: bool = False) -> PadicLattice:
    """Z_p[Gamma_n] or its maximal order, in coordinates on the group basis."""
    N = p**n
    gens = []
    for b in range(N):
        g = GroupRingElement.basis(Gamma(p, n), b)
        if not maximal:
            gens.append(g)
            continue
        for i in range(n + 1):
            gens.append(idempotent_conductor_level(i, p, n) * g)
    rows = [[Fraction(x.coefficient(c) or 0) for c in range(N)] for x in gens]
    return PadicLattice(p, rows, digits)


def verify_leopoldt_index(p: int, n: int, theta: int | None = None, N: int | None = None):
    """[Lambda_n : Z_p[Gamma_n]] and [p^-n e_theta O_n : Z_p[Gamma_n] e_theta T_n]."""
    digits = _digits(p, n, N)
    witness, statuses = {}, []
    lam = group_ring_lattice(p, n, digits, True).index(group_ring_lattice(p, n, digits))
    want = (p**n - 1) // (p - 1)
    witness["maximal order index"] = {"found": lam, "expected": want}
    statuses.append(status_of(lam == want))
    T = special("script_T", p, n, digits)
    ambient = power_basis(p, n, digits, Fraction(1, p**n))
    ks = range(p - 1) if theta is None else [theta % (p - 1)]
    for k in ks:
        e = theta_projector(k, p, n, digits)
        got = _lattice_index(span(project(ambient, e)), gamma_span(e.act(T), n))
        witness[f"omega^{k}"] = {"found": got, "expected": n * p**n}
        statuses.append(status_of(got == n * p**n) if isinstance(got, int) else got)
    return combine(statuses), witness, []


def verify_log_index(p: int, n: int, theta: int | None = None, N: int | None = None):
    """[p^-n e_theta O_n : e_theta log U_n] for the three classes of theta."""
    digits = _digits(p, n, N)
    ambient = power_basis(p, n, digits, Fraction(1, p**n))
    witness, statuses = {}, []
    ks = range(p - 1) if theta is None else [theta % (p - 1)]
    for k in ks:
        e = theta_projector(k, p, n, digits)
        L = log_image(p, n, "U", ("theta", k), digits, cross_check=False).lattice
        got = _lattice_index(span(project(ambient, e)), L)
        want = expected_log_index(p, n, k)
        witness[f"omega^{k}"] = {"found": got, "expected": want}
        statuses.append(status_of(got == want) if isinstance(got, int) else got)
    # built-in self-test: log V = p O_n
    V = log_image(p, n, "V", None, digits, cross_check=False).lattice
    v_ok = V.equals(span(power_basis(p, n, digits, p)))
    witness["log V = p O_n"] = v_ok
    statuses.append(status_of(v_ok))
    return combine(statuses), witness, []


def verify_ell_corollary(p: int, n: int, theta: int | None = None, N: int | None = None):
    """l_n log U_n in the theta part is Z_p[Gamma_n] e_theta T_n, plus l_n script_T = T."""
    digits = _digits(p, n, N)
    ell = ell_operator(p, n)
    T = special("script_T", p, n, digits)
    Tl = special("leopoldt_T", p, n, digits)
    statuses = [status_of(group_ring_act(ell, T).compare(Tl))]
    witness = {"l_n script_T = T_n": statuses[0]}
    ks = _admissible(p, theta, lambda k: k not in (0, 1))
    for k in ks:
        e = theta_projector(k, p, n, digits)
        img = log_image(p, n, "U", ("theta", k), digits)
        gens = [group_ring_act(ell, x) for x in _lattice_elements(img.lattice, p, n)]
        ok = span(gens).equals(gamma_span(e.act(Tl), n))
        witness[f"omega^{k}"] = ok
        statuses.append(status_of(ok))
    return combine(statuses), witness, []


def _lattice_elements(L: PadicLattice, p: int, n: int):
    from ..cyclotomic import PadicCyclo
    m = p ** (n + 1)
    out = []
    for r in L.hnf():
        den = max((vp(c.denominator, p) or 0) for c in r)
        digits = L.prec + den
        mod = p**digits
        coeffs = [(c * p**den).numerator * pow((c * p**den).denominator, -1, mod) % mod for c in r]
        out.append(PadicCyclo(p, m, coeffs, den, digits))
    return out


# ---------------------------------------------------------------------------
# the Teichmuller component


def teich_poly(p: int, x: int, mod: int) -> int:
    """sum_{k=1}^{p-1} (-1)^k (C(p,k)/p) omega(k) x^k mod ``mod``."""
    digits = vp(mod, p)
    total = 0
    for k in range(1, p):
        w = teichmuller_int(k, p, digits)
        total += (-1) ** k * (comb(p, k) // p) * w * pow(x, k, mod)
    return total % mod


def find_alpha(p: int) -> list:
    """Teichmuller representatives alpha != +-1 with P(alpha) not divisible by p^2."""
    if p < 5:
        raise DomainError("needs p >= 5")
    mod = p * p
    out = []
    for a in range(2, p - 1):
        alpha = teichmuller_int(a, p, 2)
        if teich_poly(p, alpha, mod) % mod:
            out.append(a)
    return out


def verify_alpha_exists(p: int, N: int | None = None, **_):
    alphas = find_alpha(p)
    minus_one = teich_poly(p, p * p - 1, p * p)
    witness = {"alpha residues": alphas, "P(-1) mod p^2": minus_one}
    return combine([status_of(bool(alphas)), status_of(minus_one == 0)]), witness, []


def verify_teich_generator(p: int, N: int | None = None, **_):
    """e_omega log(alpha - zeta_p) generates e_omega log U_0 iff P(alpha) != 0 mod p^2."""
    if p < 5:
        raise DomainError("needs p >= 5")
    digits = _digits(p, 0, N)
    e = theta_projector(1, p, 0, digits)
    target = log_image(p, 0, "U", ("theta", 1), digits).lattice
    witness, statuses = {}, []
    for a in range(2, p):
        alpha = teichmuller_int(a, p, digits)
        x = field_log(one(p, 0, digits).scale(alpha) - zeta_power(p, 0, 1, digits))
        gen = span([e.act(x)]).equals(target) == "equal"
        crit = teich_poly(p, teichmuller_int(a, p, 2), p * p) != 0
        witness[f"omega({a})"] = {"generates": gen, "criterion": crit}
        statuses.append(status_of(gen == crit))
    return combine(statuses), witness, []


def verify_teich_congruence(p: int, N: int | None = None, samples: int = 50, seed: int = 0, **_):
    """log(1 + x) = ((1 + x)^p - 1)/p mod p pi^2 for random x in pi^2 Z_p[zeta_p]."""
    digits = _digits(p, 0, N)
    rng = random.Random(seed * 1000 + p)
    pi = zeta_power(p, 0, 1, digits) - one(p, 0, digits)
    pi2 = pi * pi
    u = one(p, 0, digits)
    need = (p - 1) + 2
    worst = None
    for _ in range(samples):
        y = sum((b.scale(rng.randrange(p**4)) for b in power_basis(p, 0, digits)), u * 0)
        x = pi2 * y
        lhs = field_log(u + x)
        rhs = ((u + x) ** p - u).scale(Fraction(1, p))
        diff = lhs - rhs
        v = pi_valuation(diff) if not diff.is_zero() else (p - 1) * diff.prec
        worst = v if worst is None else min(worst, v)
    return status_of(worst >= need), {"min pi-valuation of difference": worst,
                                      "required": need, "samples": samples}, []


def verify_teichmuller_theorem(p: int, n: int, N: int | None = None, **_):
    """e_omega log U_n = Z_p[Gamma_n](gamma0 - 1 - p) e_omega T_n, with both indices."""
    if p < 5:
        raise DomainError("needs p >= 5")
    digits = _digits(p, n, N)
    e = theta_projector(1, p, n, digits)
    eT = e.act(special("script_T", p, n, digits))
    gen = gamma_act(eT, 1, n) - eT.scale(1 + p)
    L_log = log_image(p, n, "U", ("theta", 1), digits).lattice
    L_gen = gamma_span(gen, n)
    eq = L_log.equals(L_gen)
    rel = _lattice_index(gamma_span(eT, n), L_gen)
    ambient = span(project(power_basis(p, n, digits, Fraction(1, p**n)), e))
    amb = _lattice_index(ambient, L_gen)
    witness = {"equality": eq, "relative index": rel, "relative expected": n + 1,
               "ambient index": amb, "ambient expected": n * p**n + n + 1}
    notes = ["the relative index [Z_p[G] e T : Z_p[G](gamma0-1-p) e T] is p^(n+1); "
             "p^(n p^n + n + 1) is the index inside p^-n e_omega O_n"]
    statuses = [status_of(eq), status_of(rel == n + 1), status_of(amb == n * p**n + n + 1)]
    return combine(statuses), witness, notes


# ---------------------------------------------------------------------------
# the trivial component


def verify_trivial_char(p: int, n: int, N: int | None = None, part: str = "all", **_):
    """Trivial component: log C, the lemma index and the two-generator description."""
    digits = _digits(p, n, N)
    TD = trace_delta(p, n)
    tT = TD.act(special("tilde_T", p, n, digits))
    pz = TD.act(zeta_power(p, n, p**n, digits).scale(p))  # T_Delta p zeta_p
    witness, statuses = {}, []
    if part in ("all", "prop"):
        lz = TD.act(log_one_minus_zeta(p, n, digits))
        lhs = gamma_act(lz, 1, n) - lz
        eta = eta_n(p, n, digits)
        ident = lhs.compare(group_ring_act(eta, tT))
        witness["eta_n integral"] = eta.is_integral()
        witness["literal form without eta_n"] = lhs.compare(-tT)
        statuses.append(status_of(eta.is_integral()))
        L_C = log_image(p, n, "C", "T_Delta", digits).lattice
        want = gamma_span(tT, n) if n else span([tT])
        eq = L_C.equals(want) if n else status_of(all(c == 0 for r in L_C.rows for c in r))
        witness["T log((1-zeta)^(gamma0-1)) = eta_n T tilde_T"] = ident
        witness["T log C = Z_p[G] T tilde_T"] = eq
        statuses += [status_of(ident), status_of(eq) if eq in ("equal", "unequal", "undecidable") else eq]
    if part in ("all", "index"):
        ambient = span(project(power_basis(p, n, digits, Fraction(1, p**n)), TD))
        sub = gamma_span(pz + tT, n)
        got = _lattice_index(ambient, sub)
        want = n * p**n + n + 1
        witness["lemma index"] = {"found": got, "expected": want}
        witness["constant part"] = "[p^-n Z_p : p Z_p] = p^(n+1)"
        statuses.append(status_of(got == want) if isinstance(got, int) else got)
    if part in ("all", "theorem"):
        L_U = log_image(p, n, "U", "T_Delta", digits).lattice
        M = gamma_span(pz, n) + (gamma_span(tT, n) if n else span([pz]))
        eq = L_U.equals(M)
        inter = _lattice_index(M, gamma_span(pz + tT, n))
        witness["T log U = <T tilde_T, p>"] = eq
        witness["[M : Z_p[G] T(p zeta_p + tilde_T)]"] = {"found": inter, "expected": n}
        statuses += [status_of(eq), status_of(inter == n) if isinstance(inter, int) else inter]
    return combine(statuses), witness, []


@lru_cache(maxsize=None)
def eta_n(p: int, n: int, digits: int) -> GroupRingElement:
    """e_chi eta = (1 - chi(gamma0)) L_p(1, chi) e_chi; the trivial part is (1 - 1/p) log_p(1 + p)."""
    from ..cyclotomic import PadicCyclo, reduce_poly
    m = p ** (n + 1)
    u = one(p, n, digits)
    vals = [field_log(u.scale(1 + p)).scale(Fraction(p - 1, p))]
    for j in range(1, p**n):
        L = lp_at_one(gamma_character(p, n, j), p, n, digits).value
        raw = [0] * m
        raw[p * j % m] = 1
        z = PadicCyclo(p, m, reduce_poly(raw, m), 0, digits)
        vals.append((u - z) * L)
    return element_from_l_values(vals, p, n)


def verify_norm_one(p: int, n: int, N: int | None = None, **_):
    """T_Delta log U'_n = T_Delta log C_n, U' the units of norm one."""
    digits = _digits(p, n, N)
    TD = trace_delta(p, n)
    L_U = log_image(p, n, "U", None, digits).lattice
    # norm one <=> trace of the log vanishes (1 + p Z_p has no torsion for odd p)
    m = p ** (n + 1)
    tr = [_trace(b) for b in power_basis(p, n, digits)]
    func = [sum(c * t for c, t in zip(r, tr)) for r in L_U.rows]
    K = L_U.kernel(func)
    elems = [TD.act(x) for x in _lattice_elements(K, p, n)] if K.rows else []
    L_C = log_image(p, n, "C", "T_Delta", digits).lattice
    lhs = span(elems) if elems else None
    if lhs is None:
        ok = all(c == 0 for r in L_C.rows for c in r)
    else:
        ok = lhs.equals(L_C)
    return status_of(ok), {"T log U' = T log C": ok}, []


def _trace(x) -> Fraction:
    """Tr_{K_n/Q_p} of a p-adic element: sum of conjugates, read off the constant term."""
    m = x.m
    total = None
    for a in range(1, m):
        if a % x.p:
            y = galois_apply(a, x)
            total = y if total is None else total + y
    c, s = total.constant_term()
    if not total.is_scalar():
        raise ArithmeticError("trace is not rational")
    return Fraction(c, x.p**s)
