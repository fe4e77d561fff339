"""Shared plumbing for the checks: reports, lattices of local units, projections."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from ..cyclotomic import (PadicCyclo, CycloElement, embed_root, euler_phi, field_log,
                          special_element, galois_apply)
from ..group_ring import Gamma, GroupRingElement, idempotent_delta
from ..lattice import PadicLattice, default_precision
from ..padic import PrecisionError

VERIFIED = "verified"
FALSIFIED = "falsified"
UNDECIDABLE = "undecidable-at-precision"
VACUOUS = "vacuous"


@dataclass
class VerificationReport:
    check_id: str
    params: dict
    status: str
    witness: dict = field(default_factory=dict)
    precision: int | None = None
    wall_time: float = 0.0
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status in (VERIFIED, VACUOUS)

    def to_record(self) -> dict:
        # integers and rationals travel as decimal strings
        return {
            "check": self.check_id,
            "params": _stringify(self.params),
            "status": self.status,
            "witness": _stringify(self.witness),
            "precision": None if self.precision is None else str(self.precision),
            "notes": list(self.notes),
        }


def _stringify(obj):
    if isinstance(obj, dict):
        return {str(k): _stringify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_stringify(v) for v in obj]
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, (int, Fraction)):
        return str(obj)
    return str(obj)


def combine(statuses) -> str:
    statuses = list(statuses)
    if FALSIFIED in statuses:
        return FALSIFIED
    if UNDECIDABLE in statuses:
        return UNDECIDABLE
    return VERIFIED


def status_of(flag: str | bool) -> str:
    """Map a lattice answer ('equal'/'unequal'/'undecidable') or a bool to a status."""
    if flag is True or flag == "equal":
        return VERIFIED
    if flag == "undecidable":
        return UNDECIDABLE
    return FALSIFIED


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


# ---------------------------------------------------------------------------
# elements of K_n = Q_p(zeta_{p^{n+1}})


def padic(x: CycloElement, p: int, digits: int) -> PadicCyclo:
    return PadicCyclo.from_exact(p, x, digits)


def zeta_power(p: int, n: int, k: int, digits: int) -> PadicCyclo:
    return padic(embed_root(p ** (n + 1), k), p, digits)


def one(p: int, n: int, digits: int) -> PadicCyclo:
    return PadicCyclo.scalar(p, p ** (n + 1), 1, digits)


def power_basis(p: int, n: int, digits: int, scale=1) -> list:
    """Z_p-basis zeta^i (0 <= i < phi) of O_n, optionally scaled."""
    m = p ** (n + 1)
    return [zeta_power(p, n, i, digits).scale(scale) for i in range(euler_phi(m))]


def special(kind: str, p: int, n: int, digits: int) -> PadicCyclo:
    return padic(special_element(kind, p, n), p, digits)


def gamma_act(x: PadicCyclo, b: int, n: int, q0: int | None = None) -> PadicCyclo:
    """gamma0^b x, gamma0 = sigma_{1+q0} (q0 = p by default)."""
    p, m = x.p, x.m
    return galois_apply(pow(1 + (q0 or p), b, m), x)


def gamma_orbit(x: PadicCyclo, n: int, q0: int | None = None) -> list:
    return [gamma_act(x, b, n, q0) for b in range(x.p**n)]


def theta_projector(k: int, p: int, n: int, digits: int) -> GroupRingElement:
    """e_theta for theta = omega^k."""
    return idempotent_delta(k % (p - 1), p, n, digits)


def trace_delta(p: int, n: int) -> GroupRingElement:
    """T_Delta = sum over Delta."""
    from ..group_ring import norm_delta
    return norm_delta(p, n)


def project(elems, proj) -> list:
    if proj is None:
        return list(elems)
    return [proj.act(x) for x in elems]


def span(elems, slack: int | None = None) -> PadicLattice:
    if slack is None:
        return PadicLattice.from_elements(list(elems))
    return PadicLattice.from_elements(list(elems), slack)


def gamma_span(x: PadicCyclo, n: int, q0: int | None = None) -> PadicLattice:
    """Z_p[Gamma_n] x."""
    return span(gamma_orbit(x, n, q0))


def group_ring_act(eps: GroupRingElement, x: PadicCyclo) -> PadicCyclo:
    """Action of an element of Q_p[Gamma_n] on x (gamma0 = sigma_{1+q0})."""
    return eps.act(x)


def is_trivial_or_omega(k: int, p: int) -> bool:
    return k % (p - 1) in (0, 1 % (p - 1))


# ---------------------------------------------------------------------------
# log images


@dataclass
class LogImageLattice:
    p: int
    n: int
    source: str
    projector: object
    lattice: PadicLattice
    recipe: dict


def _pi(p: int, n: int, digits: int) -> PadicCyclo:
    return zeta_power(p, n, 1, digits) - one(p, n, digits)


@lru_cache(maxsize=None)
def _unit_logs(p: int, n: int, digits: int, top: int):
    """logs of 1 + pi^i (2 <= i <= top) and of 1 + p zeta^j (all j)."""
    pi = _pi(p, n, digits)
    u = one(p, n, digits)
    out = []
    power = pi * pi
    for _ in range(2, top + 1):
        out.append(field_log(u + power))
        power = power * pi
    return tuple(out) + _v_logs(p, n, digits)


@lru_cache(maxsize=None)
def _v_logs(p: int, n: int, digits: int):
    u = one(p, n, digits)
    return tuple(field_log(u + b) for b in power_basis(p, n, digits, p))


@lru_cache(maxsize=None)
def _cyclotomic_logs(p: int, n: int, digits: int):
    """log of (1 - zeta^a) / (1 - zeta) for a prime to p: generators of log C_n."""
    m = p ** (n + 1)
    base = field_log(one(p, n, digits) - zeta_power(p, n, 1, digits))
    return tuple(galois_apply(a, base) - base for a in range(2, m) if a % p)


@lru_cache(maxsize=None)
def log_one_minus_zeta(p: int, n: int, digits: int) -> PadicCyclo:
    return field_log(one(p, n, digits) - zeta_power(p, n, 1, digits))


def projector_for(tag, p: int, n: int, digits: int):
    """Projector tags: None, ('theta', k) or 'T_Delta'."""
    if tag is None:
        return None
    if tag == "T_Delta":
        return trace_delta(p, n)
    kind, k = tag
    if kind != "theta":
        raise ValueError(f"unknown projector {tag!r}")
    return theta_projector(k, p, n, digits)


def expected_log_index(p: int, n: int, k: int) -> int:
    """Exponent of [p^-n e_theta O_n : e_theta log U_n], theta = omega^k."""
    k %= p - 1
    base = n * p**n
    if k == 0:
        return base + 1
    if k == 1 % (p - 1):
        return base + n + 1
    return base


def log_image(p: int, n: int, source: str = "U", projector=None, N: int | None = None,
              cross_check: bool = True) -> LogImageLattice:
    """Z_p-lattice log(source), optionally projected.

    source: 'U' (principal units), 'C' (closure of the cyclotomic units) or 'V' (1 + p O_n).
    Generators for U: 1 + pi^i (2 <= i < e) and 1 + p zeta^j; the first family
    covers each graded piece U^(i)/U^(i+1) = F_p, the second generates V = U^(e).
    """
    digits = N or default_precision(p, n)
    e = (p - 1) * p**n
    proj = projector_for(projector, p, n, digits)
    if source == "V":
        gens = list(_v_logs(p, n, digits))
        recipe = {"generators": "log(1 + p zeta^j)", "count": len(gens)}
    elif source == "C":
        gens = list(_cyclotomic_logs(p, n, digits))
        recipe = {"generators": "log((1 - zeta^a)/(1 - zeta))", "count": len(gens)}
    elif source == "U":
        gens = list(_unit_logs(p, n, digits, e - 1))
        recipe = {"generators": "log(1 + pi^i), 2<=i<e; log(1 + p zeta^j)", "count": len(gens)}
    else:
        raise ValueError(f"unknown source {source!r}")
    lat = span(project(gens, proj))
    out = LogImageLattice(p, n, source, projector, lat, recipe)
    if cross_check:
        _cross_check(out, p, n, digits, proj)
    return out


def _cross_check(img: LogImageLattice, p: int, n: int, digits: int, proj):
    if img.source == "V":
        target = span(project(power_basis(p, n, digits, p), proj))
        if target.equals(img.lattice) != "equal":
            raise ArithmeticError("log V differs from p O_n")
        return
    if img.source != "U":
        return
    tag = img.projector
    ambient = span(project(power_basis(p, n, digits, Fraction(1, p**n)), proj))
    if proj is None:
        expected = sum(expected_log_index(p, n, k) for k in range(p - 1))
    elif tag == "T_Delta":
        expected = expected_log_index(p, n, 0)
    else:
        expected = expected_log_index(p, n, tag[1])
    got = ambient.index(img.lattice)
    if got != expected:
        raise ArithmeticError(f"log-image index {got} != {expected}: generator recipe insufficient")
