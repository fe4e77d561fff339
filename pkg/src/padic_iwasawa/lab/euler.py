"""Identities relating L_p(1, theta chi) to logarithms of 1 - zeta_{q_n}^delta, q_n = p^{n+1} d.

Global elements of Q(zeta_{q_n}) are pushed into Q_p(zeta_{p^{n+1}}) by
zeta_{q_n} -> alpha zeta_{p^{n+1}}; delta in (Z/pd)^x acts through its CRT lift.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from ..characters import (DirichletCharacter, enumerate_characters, gamma_character,
                          gauss_sum_padic, lp_at_one)
from ..cyclotomic import (CycloElement, DomainError, PadicCyclo, Tower, alpha_padic,
                          embed_padic, embed_root, field_log, galois_apply, reduce_poly,
                          special_element)
from ..group_ring import element_from_l_values
from ..lattice import default_precision
from ..padic import teichmuller_int, vp
from .common import (VACUOUS, combine, gamma_act, gamma_orbit, one, span, special,
                     status_of, theta_projector, zeta_power)


class GlobalContext:
    def __init__(self, p: int, d: int, n: int, digits: int):
        if (p - 1) % d:
            raise DomainError("d must divide p - 1")
        self.p, self.d, self.n, self.digits = p, d, n, digits
        self.tower = Tower(p, d, n)
        self.m = p ** (n + 1)
        self.q0 = p * d
        self.deltas = [x for x in range(1, p * d) if math.gcd(x, p * d) == 1]

    def emb(self, x: CycloElement) -> PadicCyclo:
        return embed_padic(x, self.p, self.tower, self.digits)

    def sigma(self, delta: int, x: CycloElement) -> CycloElement:
        return galois_apply(self.tower.delta_label(delta), x)

    def scalar(self, chi: DirichletCharacter, a: int) -> int:
        """chi(a) as an integer of Z_p (chi of order dividing p - 1)."""
        v = chi.padic_value(a, self.p, self.n, self.digits)
        if v is None:
            return 0
        s, zx = v
        if zx % self.m:
            raise DomainError("character value is not in Z_p")
        return s

    def one(self) -> PadicCyclo:
        return one(self.p, self.n, self.digits)

    @lru_cache(maxsize=None)
    def log_one_minus(self, level: int, delta: int) -> PadicCyclo:
        """log_p(1 - zeta_{q_level}^delta) in K_n."""
        z = self.sigma(delta, self.tower.zeta_q(level))
        return field_log(self.emb(CycloElement.one(self.tower.m) - z))

    def theta_sum(self, theta, level: int) -> PadicCyclo:
        """sum_delta conj(theta)(delta) log_p(1 - zeta_{q_level}^delta)."""
        tb = theta.conjugate()
        total = None
        for delta in self.deltas:
            c = self.scalar(tb, delta)
            if c:
                term = self.log_one_minus(level, delta).scale(c)
                total = term if total is None else total + term
        return total

    def gamma_char(self, j: int) -> DirichletCharacter:
        return gamma_character(self.p, self.n, j, self.d)

    def epsilon(self, theta):
        """eps_n(theta) in Q_p[Gamma_n], gamma0 = sigma_{1 + pd}."""
        vals = [lp_at_one(theta * self.gamma_char(j), self.p, self.n, self.digits).value
                for j in range(self.p**self.n)]
        return element_from_l_values(vals, self.p, self.n, self.q0)

    def e_chi(self, j: int, v: PadicCyclo) -> PadicCyclo:
        """e_{chi_j} v = p^-n sum_b conj(chi_j)(gamma0^b) gamma0^b v."""
        p, n, m = self.p, self.n, self.m
        total = None
        for b in range(p**n):
            w = gamma_act(v, b, n, self.q0)
            raw = [0] * m
            raw[(-p * j * b) % m] = 1
            z = PadicCyclo(p, m, reduce_poly(raw, m), 0, self.digits)
            term = w * z
            total = term if total is None else total + term
        return total.scale(Fraction(1, p**n))


def conductor_class(theta: DirichletCharacter, p: int, d: int) -> str | None:
    f = theta.conductor
    if f == p * d:
        return "pd"
    if f == d and d > 1:
        return "d"
    return None


def admissible_thetas(p: int, d: int) -> list:
    """Even characters of (Z/pd)^x with conductor pd or d and values in Z_p."""
    out = []
    for chi in enumerate_characters(p * d):
        if (p - 1) % chi.order:
            continue
        if chi.is_even() and not chi.is_trivial() and conductor_class(chi, p, d):
            out.append(chi)
    return out


def _select(p, d, theta):
    thetas = admissible_thetas(p, d)
    if theta is not None:
        thetas = [t for t in thetas if t.key == theta.key]
    return thetas


def _label(theta) -> str:
    return f"mod {theta.modulus}: [" + ", ".join(str(x) for x in theta.images) + "]"


# ---------------------------------------------------------------------------


def verify_norm_relation(p: int, d: int, n: int, i: int | None = None, **_):
    """N_{K_n/K_i}(zeta_{q_n}^{F^{i-n}} - 1) = zeta_{q_i} - 1, exactly."""
    from ..cyclotomic import relative_norm
    tower = Tower(p, d, n)
    F = tower.frobenius()
    levels = range(n + 1) if i is None else [i]
    witness, statuses = {}, []
    for lvl in levels:
        Fk = pow(pow(F, -1, tower.m), n - lvl, tower.m)
        x = galois_apply(Fk, tower.zeta_q(n)) - 1
        lhs = relative_norm(x, p, d, n, lvl)
        rhs = tower.zeta_q_in_level(lvl) - 1
        ok = lhs == rhs.embed(lhs.m) if lhs.m != rhs.m else lhs == rhs
        witness[f"i={lvl}"] = ok
        statuses.append(status_of(ok))
    return combine(statuses), witness, []


def verify_gauss_l_lemma(p: int, d: int, n: int, theta=None, N: int | None = None, **_):
    digits = N or default_precision(p, n)
    ctx = GlobalContext(p, d, n, digits)
    thetas = _select(p, d, theta)
    if not thetas:
        return VACUOUS, {"reason": "no even theta of conductor pd or d"}, []
    witness, statuses = {}, []
    for th in thetas:
        S = ctx.theta_sum(th, n)
        cls = conductor_class(th, p, d)
        for j in range(p**n):
            if cls == "d" and j == 0:
                continue
            psi = (th * ctx.gamma_char(j)).primitive()
            k = (vp(psi.conductor, p) or 0) - 1
            tau = gauss_sum_padic(psi.conjugate(), p, n, digits + 2 * n + 8)
            L = lp_at_one(psi, p, n, digits).value
            theta_F = ctx.scalar(th, pow(ctx.tower.frobenius(), n - max(k, 0), ctx.tower.m))
            lhs = (tau * L).scale(Fraction(theta_F, p**n))
            rhs = -ctx.e_chi(j, S)
            ok = lhs.compare(rhs)
            witness[f"{_label(th)} chi_{j}"] = ok
            statuses.append(status_of(ok))
    return combine(statuses), witness, []


def dotted_T(ctx: GlobalContext, case: str, reading: str = "frobenius") -> CycloElement:
    return special_element("dotted_T", ctx.p, ctx.n, ctx.d, case, reading)


def _euler_sides(ctx: GlobalContext, th, reading="frobenius"):
    p = ctx.p
    case = conductor_class(th, p, ctx.d)
    T = dotted_T(ctx, case, reading)
    tb = th.conjugate()
    twisted = None
    for delta in ctx.deltas:
        c = ctx.scalar(tb, delta)
        if c:
            term = ctx.emb(ctx.sigma(delta, T)).scale(c)
            twisted = term if twisted is None else twisted + term
    eps = ctx.epsilon(th)
    lhs = eps.act(twisted)
    S = ctx.theta_sum(th, ctx.n)
    if case == "pd":
        E = Fraction(1)
    else:
        E = 1 - Fraction(ctx.scalar(th, ctx.tower.frobenius() % (p * ctx.d)), p)
    return lhs, -S.scale(E), case


def verify_pd_identity(p: int, d: int, n: int, theta=None, N: int | None = None, **_):
    digits = N or default_precision(p, n)
    ctx = GlobalContext(p, d, n, digits)
    thetas = [t for t in _select(p, d, theta) if conductor_class(t, p, d) == "pd"]
    if not thetas:
        return VACUOUS, {"reason": "no even theta of conductor pd"}, []
    witness, statuses = {}, []
    for th in thetas:
        lhs, rhs, _ = _euler_sides(ctx, th)
        ok = lhs.compare(rhs)
        witness[_label(th)] = ok
        statuses.append(status_of(ok))
    return combine(statuses), witness, []


def verify_euler_factor_theorem(p: int, d: int, n: int, theta=None, N: int | None = None,
                                reading: str = "frobenius", **_):
    digits = N or default_precision(p, n)
    ctx = GlobalContext(p, d, n, digits)
    thetas = _select(p, d, theta)
    if not thetas:
        return VACUOUS, {"reason": "no even theta of conductor pd or d"}, []
    witness, statuses = {}, []
    for th in thetas:
        lhs, rhs, case = _euler_sides(ctx, th, reading)
        ok = lhs.compare(rhs)
        witness[_label(th)] = {"conductor": case, "result": ok,
                               "agreement": lhs.difference_valuation(rhs), "N": digits}
        statuses.append(status_of(ok))
    return combine(statuses), witness, []


def verify_d_identities(p: int, d: int, n: int, theta=None, N: int | None = None, **_):
    """f_theta = d: the log sum at level 0, the Gauss sum, and the L-value at level 0.

    The L-value sub-check is tau(conj theta) L_p(1, theta) = -(1 - theta(F)/p)
    sum_y conj(theta)(y) log_p(1 - alpha^y).  The level-n form through e_chi0 is
    reported too; its right side vanishes identically once theta(F) = 1.
    """
    digits = N or default_precision(p, n)
    ctx = GlobalContext(p, d, n, digits)
    thetas = [t for t in _select(p, d, theta) if conductor_class(t, p, d) == "d"]
    if not thetas:
        return VACUOUS, {"reason": "no even theta of conductor d"}, []
    witness, statuses = {}, []
    F = ctx.tower.frobenius()
    A = alpha_padic(p, d, digits)
    for th in thetas:
        th_d = th.primitive()
        thF = ctx.scalar(th, F % (p * d))
        ylog = None
        for y in range(1, d):
            if math.gcd(y, d) == 1:
                c = ctx.scalar(th_d.conjugate(), y)
                t = field_log(ctx.one().scale(1 - pow(A, y, p**digits))).scale(c)
                ylog = t if ylog is None else ylog + t
        a = ctx.theta_sum(th, 0).compare(ylog.scale(thF - 1))
        b = _exact_gauss_identity(th, p, d)
        tau = gauss_sum_padic(th_d.conjugate(), p, n, digits + 2 * n + 8)
        tL = tau * lp_at_one(th, p, n, digits).value
        euler = 1 - Fraction(thF, p)
        c = tL.compare(-ylog.scale(euler))
        level_n = tL.scale(Fraction(1, p**n)).compare(
            -ctx.e_chi(0, ctx.theta_sum(th, n)).scale(euler))
        witness[_label(th)] = {"log sum": a, "gauss sum": b, "L-value": c,
                               "L-value through e_chi0 at level n": level_n,
                               "theta(F)": thF}
        statuses += [status_of(a), status_of(b), status_of(c)]
    notes = ["with d | p - 1, theta(F) = 1 and the e_chi0 form of the L-value relation degenerates"]
    return combine(statuses), witness, notes


def _exact_gauss_identity(th: DirichletCharacter, p: int, d: int) -> bool:
    """tau(conj theta) = - sum_delta conj(theta)(delta) zeta_{pd}^delta in Q(zeta_M), zeta_d = alpha."""
    tb = th.conjugate()
    M = math.lcm(p * d, tb.order)
    A0 = Tower(p, d, 0).A % (p * d)
    step = M // (p * d)
    tau = CycloElement.zero(M)
    rhs = CycloElement.zero(M)
    tbd = tb.primitive()
    for y in range(1, d):
        if math.gcd(y, d) == 1:
            tau = tau + tbd.value(y, M) * embed_root(M, A0 * y * step)
    for delta in range(1, p * d):
        if math.gcd(delta, p * d) == 1:
            rhs = rhs - tb.value(delta, M) * embed_root(M, delta * step)
    return tau == rhs


# ---------------------------------------------------------------------------
# theta = theta1 theta2 with theta1 on (Z/p)^x and theta2 of conductor d


def split_thetas(p: int, d: int, exclude=(0, 1)):
    """Pairs (k, theta2): theta1 = omega^k outside ``exclude``, theta2 primitive mod d, product even."""
    from ..characters import teichmuller_character
    out = []
    for t2 in enumerate_characters(d) if d > 1 else [DirichletCharacter.trivial(1)]:
        if d > 1 and (t2.conductor != d or (p - 1) % t2.order):
            continue
        for k in range(p - 1):
            if k in exclude:
                continue
            t1 = teichmuller_character(p) ** k
            th = t1 * t2 if d > 1 else t1
            if th.is_even():
                out.append((k, t2, th))
    return out


def _log_alpha_minus_zeta(p, n, digits, a: int) -> PadicCyclo:
    return field_log(one(p, n, digits).scale(a) - zeta_power(p, n, 1, digits))


def _theta2_log_sum(p, n, digits, t2, d, k) -> PadicCyclo:
    """sum_y conj(theta2)(y) e_theta1 log(alpha^y - zeta)."""
    A = alpha_padic(p, d, digits)
    e = theta_projector(k, p, n, digits)
    total = None
    for y in range(1, d + 1):
        if math.gcd(y, d) != 1:
            continue
        v = t2.conjugate().padic_value(y, p, n, digits) if d > 1 else (1, 0)
        term = _log_alpha_minus_zeta(p, n, digits, pow(A, y, p**digits)).scale(v[0])
        total = term if total is None else total + term
    return e.act(total)


def verify_script_T_lemma(p: int, d: int, n: int, N: int | None = None,
                          reading: str = "literal", **_):
    """tau(conj theta2) eps_n(theta) e_theta1 T_n = - sum_y conj(theta2)(y) e_theta1 log(alpha^y - zeta).

    reading "literal" checks the display as written; "signed" multiplies the right
    side by theta2(-1), which is what log(1 - alpha^y zeta) = log(alpha^-y - zeta)
    gives.  Both outcomes are always recorded in the witness.
    """
    if reading not in ("literal", "signed"):
        raise DomainError("reading is 'literal' or 'signed'")
    digits = N or default_precision(p, n)
    ctx = GlobalContext(p, d, n, digits)
    cases = split_thetas(p, d)
    if not cases:
        return VACUOUS, {"reason": "no admissible theta1 theta2"}, []
    T = special("script_T", p, n, digits)
    A = alpha_padic(p, d, digits)
    witness, statuses = {}, []
    for k, t2, th in cases:
        tau = sum(t2.conjugate().padic_value(y, p, n, digits)[0] * pow(A, y, p**digits)
                  for y in range(1, d + 1) if math.gcd(y, d) == 1) if d > 1 else 1
        eT = theta_projector(k, p, n, digits).act(T)
        lhs = ctx.epsilon(th).act(eT).scale(tau)
        rhs = -_theta2_log_sum(p, n, digits, t2, d, k)
        sign = t2.parity if d > 1 else 1
        literal = lhs.compare(rhs)
        signed = lhs.compare(rhs.scale(sign))
        witness[f"omega^{k} x {_label(t2)}"] = {"theta2(-1)": sign, "literal": literal,
                                                "signed": signed}
        statuses.append(status_of(literal if reading == "literal" else signed))
    notes = []
    if any(w["literal"] != "equal" and w["signed"] == "equal" for w in witness.values()):
        notes.append("literal form fails for odd theta2; the theta2(-1)-signed form holds")
    return combine(statuses), witness, notes


def verify_unprimitive_x(p: int, d: int, d2: int, n: int = 0, N: int | None = None, **_):
    """S_d = x(theta) S_{d2} for theta2 of conductor d2 | d, with d / d2 prime.

    x(theta) = theta1(l) sigma_<l> - [l does not divide d2] conj(theta2)(l), where
    sigma_<l> in Gamma_n sends zeta to zeta^(l / omega(l)); it is trivial when n = 0.
    """
    from ..characters import teichmuller_character
    if d % d2 or (p - 1) % d:
        raise DomainError("need d2 | d | p - 1")
    l = d // d2
    if l < 2 or any(l % r == 0 for r in range(2, l)):
        raise DomainError("d / d2 must be prime")
    digits = N or default_precision(p, n)
    m = p ** (n + 1)
    witness, statuses = {}, []
    for t2 in enumerate_characters(d2):
        if t2.conductor != d2:
            continue
        t2d = t2.induce(d)
        for k in range(p - 1):
            S_d = _theta2_log_sum(p, n, digits, t2d, d, k)
            S_2 = _theta2_log_sum(p, n, digits, t2, d2, k)
            theta1_l = teichmuller_int(l, p, digits) ** k
            w = teichmuller_int(l, p, n + 1)
            gam = l * pow(w, -1, m) % m
            x_S = galois_apply(gam, S_2).scale(theta1_l)
            if d2 % l:
                x_S = x_S - S_2.scale(t2.conjugate().padic_value(l, p, n, digits)[0])
            ok = S_d.compare(x_S)
            witness[f"omega^{k} x {_label(t2)}"] = ok
            statuses.append(status_of(ok))
    notes = ["x(theta) carries the Gamma_n factor sigma_<l>, trivial at n = 0"]
    return combine(statuses), witness, notes


def verify_u_n_exists(p: int, d: int, n: int, N: int | None = None, **_):
    """u_n e_theta1 T_n = e_theta1 log(alpha - zeta) has a solution u_n in Z_p[Gamma_n]."""
    digits = N or default_precision(p, n)
    ks = [k for k in range(p - 1) if k not in (0, 1)]
    if not ks:
        return VACUOUS, {"reason": "no theta1 other than 1 and omega"}, []
    A = alpha_padic(p, d, digits)
    T = special("script_T", p, n, digits)
    target_full = _log_alpha_minus_zeta(p, n, digits, A) if d > 1 else \
        field_log(one(p, n, digits) - zeta_power(p, n, 1, digits))
    witness, statuses = {}, []
    for k in ks:
        e = theta_projector(k, p, n, digits)
        eT = e.act(T)
        tgt = e.act(target_full)
        basis = span(gamma_orbit(eT, n))
        try:
            sol, prec = basis.solve([Fraction(c, p**tgt.shift) for c in tgt.coeffs], tgt.prec)
        except ValueError:
            witness[f"omega^{k}"] = "not in the Q_p[Gamma_n]-span"
            statuses.append(status_of(False))
            continue
        vals = [(vp(c.numerator, p) or 0) - (vp(c.denominator, p) or 0) for c in sol if c]
        integral = all(v >= 0 for v in vals) or prec <= 0
        witness[f"omega^{k}"] = {"min coefficient valuation": min(vals, default=None),
                                 "precision": prec}
        statuses.append(status_of(integral) if prec > 0 else "undecidable-at-precision")
    return combine(statuses), witness, []


def _bernoulli_1_valuation(chi: DirichletCharacter, p: int, digits: int = 30) -> int | None:
    """v_p(B_{1,chi}) for chi with values in Z_p; None if B_{1,chi} = 0 to the precision."""
    prim = chi.primitive()
    f = prim.conductor
    mod = p**digits
    s = 0
    for a in range(1, f + 1):
        v = prim.padic_value(a, p, 0, digits)
        if v is not None:
            s += a * v[0]
    s %= mod
    if s == 0:
        return None
    return vp(s, p) - (vp(f, p) or 0)


def _bernoulli_1_norm_is_unit(chi: DirichletCharacter, p: int) -> bool:
    """B_{1,chi} is a unit at every prime above p (its norm to Q is prime to p)."""
    from ..characters import bernoulli_B
    b = bernoulli_B(1, chi.primitive())
    M = b.m
    norm = CycloElement.one(M)
    for a in range(1, M):
        if math.gcd(a, M) == 1:
            norm = norm * b.galois(a)
    q = norm.rational_value()
    return q != 0 and not (vp(q.numerator, p) or vp(q.denominator, p))


def verify_bernoulli_prime_to_p(p: int, theta1: int | None = None, **_):
    """For theta1 = omega^k, k != 0, 1: some theta2 of conductor dividing p - 1 makes
    theta1 theta2 even with B_{1, theta1 theta2 omega^-1} a p-adic unit."""
    from ..characters import teichmuller_character
    if p < 5:
        return VACUOUS, {"reason": "no theta1 other than 1 and omega"}, []
    ks = [theta1 % (p - 1)] if theta1 is not None else list(range(2, p - 1))
    if any(k in (0, 1) for k in ks):
        raise DomainError("theta1 must differ from 1 and omega")
    omega = teichmuller_character(p)
    divisors = [e for e in range(1, p) if (p - 1) % e == 0]
    witness, statuses = {}, []
    for k in ks:
        found = None
        for d2 in divisors:
            for t2 in enumerate_characters(d2):
                if t2.conductor != d2:
                    continue
                t1 = omega ** k
                th = t1 * t2 if d2 > 1 else t1
                if not th.is_even():
                    continue
                chi = th * (omega ** (p - 2)) if d2 > 1 else omega ** ((k - 1) % (p - 1))
                if (p - 1) % chi.order == 0:
                    unit, how = _bernoulli_1_valuation(chi, p) == 0, "valuation in Z_p"
                else:
                    unit, how = _bernoulli_1_norm_is_unit(chi, p), "norm to Q"
                if unit:
                    found = (d2, _label(t2), how)
                    break
            if found:
                break
        witness[f"omega^{k}"] = {"theta2 conductor": found[0], "theta2": found[1],
                                      "unit test": found[2]} if found \
            else "no theta2 found"
        statuses.append(status_of(found is not None))
    return combine(statuses), witness, []
