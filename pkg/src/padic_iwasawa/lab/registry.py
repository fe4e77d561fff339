"""Check registry, parameter grids and the dispatcher."""
from __future__ import annotations

import inspect
from dataclasses import dataclass
from fractions import Fraction

from ..characters import DirichletCharacter
from ..lattice import default_precision
from . import euler, local, minus
from .common import UNDECIDABLE, Timer, VerificationReport


@dataclass(frozen=True)
class Check:
    id: str
    func: object
    anchor: str
    grid: str  # 'pdn', 'pn', 'p', 'pn-exact', 'special'


def _trivial(part):
    def run(p: int, n: int, N: int | None = None, **_):
        return local.verify_trivial_char(p, n, N=N, part=part)
    run.__name__ = f"verify_trivial_{part}"
    return run


CHECKS = [
    Check("norm-relation-1", euler.verify_norm_relation,
          r"N_{K_n/K_i}(\zeta_{q_n}^{F^{i-n}}-1) = \zeta_{q_i}-1", "pdn"),
    Check("gauss-l-lemma", euler.verify_gauss_l_lemma,
          r"\frac{1}{p^n} \theta(F^{n-k}) \tau(\overline{\theta \chi}) L_p(1,\theta\chi)", "pdn"),
    Check("pd-identity", euler.verify_pd_identity,
          r"\dot{\mathscr T}_n= \sum_{i=0}^n F^{n-i} p^{i-n} \zeta_{q_i}", "pdn"),
    Check("d-identities", euler.verify_d_identities,
          r"f_\theta = d: \tau(\overline\theta) = -\sum_\delta \overline\theta(\delta)\zeta_{q_0}^\delta",
          "pdn"),
    Check("euler-factor-theorem", euler.verify_euler_factor_theorem,
          r"\sum_\delta \overline\theta(\delta)\epsilon_n(\theta)(\dot{\mathscr T}_n^\delta) = -E(\theta)\sum_\delta \overline\theta(\delta)\log_p(1-\zeta_{q_n}^\delta)",
          "pdn"),
    Check("script-T-lemma", euler.verify_script_T_lemma,
          r"\tau(\overline \theta_2) \epsilon_n(\theta) e_{\theta_1} \mathscr T_n", "pdn"),
    Check("unprimitive-x", euler.verify_unprimitive_x,
          r"x(\theta) \in \mathbb{Z}_p[\theta]", "special"),
    Check("u-n-exists", euler.verify_u_n_exists,
          r"u_n e_{\theta_1} \mathscr T_n", "pdn"),
    Check("bernoulli-prime-to-p", euler.verify_bernoulli_prime_to_p,
          r"v_p(B_{1,\theta_1\theta_2\omega^{-1}}) = 0", "p"),
    Check("main-theorem", local.verify_theorem_main,
          r"e_\theta \log_p U_n = \mathbb Z_p[\Gamma_n] e_\theta \mathscr T_n", "pn"),
    Check("iwasawa-corollary", local.verify_iwasawa_corollary,
          r"e_\theta U_n/\overline C_n \simeq \mathbb Z_p[\Gamma_n]/\epsilon_n(\theta)", "pn"),
    Check("leopoldt-index", local.verify_leopoldt_index, r"=p^{np^n}", "pn"),
    Check("log-index", local.verify_log_index, r"p^{np^n+n+1}", "pn"),
    Check("ell-corollary", local.verify_ell_corollary, r"e_\theta \mathscr L_n U_n", "pn"),
    Check("teich-generator", local.verify_teich_generator,
          r"\log_p(1+\alpha p) \text{ generates } e_\omega \log_p U_0", "p"),
    Check("teich-congruence", local.verify_teich_congruence,
          r"\log_p(1+x) \equiv \frac{(1+x)^p-1}{p}", "p"),
    Check("alpha-exists", local.verify_alpha_exists,
          r"\exists \alpha: e_\omega \log_p(1+\alpha p) \not\equiv 0", "p"),
    Check("teich-theorem", local.verify_teichmuller_theorem,
          r"(\gamma_0-1-p) e_\omega \mathscr T_n", "pn"),
    Check("trivial-prop", _trivial("prop"),
          r"T_\Delta \log_p \overline C_n = \mathbb Z_p[\Gamma_n] T_\Delta \tilde{\mathscr T}_n", "pn"),
    Check("trivial-index", _trivial("index"), r"p^{np^n+n+1}", "pn"),
    Check("trivial-theorem", _trivial("theorem"),
          r"T_\Delta \log_p U_n = \langle T_\Delta \tilde{\mathscr T}_n, p \rangle", "pn"),
    Check("norm-one-corollary", local.verify_norm_one, r"N_{K_n/\mathbb Q_p}(u)=1", "pn"),
    Check("minus-integrality", minus.verify_minus_integrality,
          r"e_\chi \frac{1}{\pi_n} \in \mathbb Z_p[\zeta_{p^{n+1}}]", "pn"),
    Check("minus-identity", minus.verify_minus_identity,
          r"e_\chi \frac{1}{\pi_n}=\epsilon_n(\chi) e_\chi T_n", "pn"),
    Check("nu-membership", minus.verify_nu_membership,
          r"\log_p \nu_n \in \log_p U_n^-", "pn"),
    Check("stickelberger-ideal", minus.verify_stickelberger_ideal, r"\mathscr{I}=I \epsilon_n",
          "pn-exact"),
    Check("minus-index-prop", minus.verify_minus_index_prop,
          r"[\mathbb Z[G_n]^- : \mathscr I^-] = h_{p^{n+1}}^-", "pn-exact"),
    Check("minus-2-power", minus.verify_minus_2_power,
          r"[\mathscr I^- : (1-j)\mathscr I] = 2^{\frac{|G_n|}{2}-1}", "pn-exact"),
    Check("main-index-theorem", minus.verify_main_index_theorem,
          r"[\mathcal{E}_n^-:\mathcal C_n] = 2^{\frac{|G_n|}{2}-1}\cdot h_{p^{n+1}}^-", "pn-exact"),
    Check("restriction-defect", minus.verify_restriction_defect,
          r"\epsilon_n+(p-1)/2 N_n", "pn-exact"),
]

REGISTRY = {c.id: c for c in CHECKS}

# checks whose theta parameter is an exponent k of omega^k
_OMEGA_THETA = {"main-theorem", "iwasawa-corollary", "leopoldt-index", "log-index",
                "ell-corollary", "bernoulli-prime-to-p"}


def parse_theta(text: str | None, check_id: str):
    """'k' (omega^k) for local checks; 'modulus:r1,r2,...' (Q/Z generator images) otherwise."""
    if text is None:
        return None
    text = str(text)
    if check_id in _OMEGA_THETA:
        return int(text)
    if ":" not in text:
        raise ValueError("theta must be 'modulus:image,...' for this check")
    mod, imgs = text.split(":", 1)
    images = [Fraction(s) for s in imgs.split(",") if s.strip()]
    return DirichletCharacter(int(mod), images)


# ---------------------------------------------------------------------------
# grids


def _pdn(ps, ds, ns):
    return [{"p": p, "d": d, "n": n} for p in ps for d in ds if (p - 1) % d == 0 for n in ns]


def grid(check_id: str, name: str = "default") -> list:
    c = REGISTRY[check_id]
    ext = name == "extended"
    if c.grid == "pdn":
        pts = _pdn((3, 5, 7), (1, 2, 4), (0, 1))
        if check_id in ("euler-factor-theorem", "d-identities", "gauss-l-lemma"):
            pts += [{"p": 11, "d": 5, "n": 0}, {"p": 11, "d": 5, "n": 1},
                    {"p": 13, "d": 12, "n": 0}]
        if check_id == "norm-relation-1":
            pts = _pdn((3, 5, 7), (1, 2), (0, 1, 2))
        if ext:
            pts += _pdn((3, 5), (1, 2, 4), (2,))
        return pts
    if c.grid == "p":
        if check_id == "alpha-exists":
            return [{"p": p} for p in _primes(5, 97)] if ext else [{"p": 5}, {"p": 7}]
        if check_id == "bernoulli-prime-to-p":
            return [{"p": p} for p in (5, 7, 11, 13)]
        return [{"p": 5}, {"p": 7}]
    if c.grid == "special":
        pts = [{"p": 7, "d": 6, "d2": 3, "n": 0}, {"p": 7, "d": 6, "d2": 3, "n": 1},
               {"p": 13, "d": 12, "d2": 4, "n": 0}, {"p": 17, "d": 8, "d2": 4, "n": 0},
               {"p": 19, "d": 9, "d2": 3, "n": 0}]
        return pts
    if c.grid == "pn-exact":
        pts = [{"p": p, "n": n} for p, n in ((3, 0), (3, 1), (5, 0), (7, 0))]
        if ext:
            pts += [{"p": 23, "n": 0}, {"p": 5, "n": 1}]
        return pts
    # pn
    if check_id == "nu-membership":
        pts = [{"p": 5, "n": 0}]
        return pts + ([{"p": 3, "n": 1}, {"p": 7, "n": 0}] if ext else [])
    ps = (5, 7) if check_id == "teich-theorem" else (3, 5, 7)
    if check_id in ("trivial-prop", "trivial-index", "trivial-theorem", "log-index",
                    "leopoldt-index", "norm-one-corollary"):
        ps = (3, 5)
    pts = [{"p": p, "n": n} for p in ps for n in (0, 1)]
    if ext:
        pts += [{"p": p, "n": 2} for p in (3, 5)
                if check_id != "iwasawa-corollary" and p in ps]
    return pts


def _primes(lo, hi):
    return [q for q in range(lo, hi + 1) if all(q % r for r in range(2, int(q**0.5) + 1))]


# ---------------------------------------------------------------------------
# dispatch


def _call(func, params: dict, N: int | None):
    sig = inspect.signature(func)
    accepts_any = any(p.kind == p.VAR_KEYWORD for p in sig.parameters.values())
    kwargs = {k: v for k, v in params.items() if accepts_any or k in sig.parameters}
    if N is not None and (accepts_any or "N" in sig.parameters):
        kwargs["N"] = N
    return func(**kwargs)


def _base_precision(params: dict) -> int | None:
    if "p" in params:
        return default_precision(params["p"], params.get("n", 0))
    return None


def run_check(check_id: str, params: dict, precision: int | None = None, retries: int = 1,
              cache=None) -> VerificationReport:
    """Run one check; undecidable results are retried once at doubled precision."""
    if check_id not in REGISTRY:
        raise KeyError(f"unknown check {check_id!r}")
    check = REGISTRY[check_id]
    params = dict(params)
    if "theta" in params and params["theta"] is not None and isinstance(params["theta"], str):
        params["theta"] = parse_theta(params["theta"], check_id)
    N = precision
    with Timer() as t:
        status, witness, notes = _call(check.func, params, N)
        attempts = 0
        while status == UNDECIDABLE and attempts < retries:
            N = 2 * (N or _base_precision(params) or 20)
            status, witness, notes = _call(check.func, params, N)
            attempts += 1
    shown = {k: (_theta_text(v) if k == "theta" else v) for k, v in params.items()}
    report = VerificationReport(check_id, shown, status, witness,
                                N or _base_precision(params), t.elapsed, list(notes))
    if cache is not None:
        from ..cache import make_key
        cache.put(make_key("report:" + check_id, shown), report.to_record(), report.precision)
    return report


def _theta_text(theta):
    if isinstance(theta, DirichletCharacter):
        return f"{theta.modulus}:" + ",".join(str(r) for r in theta.images)
    return theta


def anchor_map() -> list:
    return [(c.id, c.anchor) for c in CHECKS]
