"""Command-line interface: run checks, compute single objects, manage the cache.

Exit codes: 0 all verified (or vacuous), 1 something falsified, 2 something
undecidable at the working precision, 64 usage error.
"""
from __future__ import annotations

import argparse
import inspect
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from .cache import Cache, CacheError, make_key
from .characters import (DirichletCharacter, bernoulli_B, enumerate_characters, h_minus,
                         lp_at_one, teichmuller_character)
from .cyclotomic import CycloElement, DomainError, PadicCyclo
from .lattice import SLACK, default_precision
from .padic import PrecisionError

EXIT_OK, EXIT_FALSIFIED, EXIT_UNDECIDABLE, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad arguments; 2 is taken by "undecidable"
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# formatting


def padic_expansion(num: int, shift: int, p: int, prec: int, terms: int | None = None) -> str:
    """p^-shift * num as a digit expansion known mod p^prec."""
    if prec <= -shift:
        return f"O({p}^{prec})"
    digits = []
    x = num % p ** (prec + shift)
    e = -shift
    while x and e < prec:
        x, r = divmod(x, p)
        if r:
            digits.append(_term(r, p, e))
        e += 1
    body = " + ".join(digits[:terms] if terms else digits) or "0"
    return f"{body} + O({p}^{prec})"


def _term(r: int, p: int, e: int) -> str:
    if e == 0:
        return str(r)
    power = f"{p}" if e == 1 else f"{p}^{e}"
    return power if r == 1 else f"{r}*{power}"


def format_cyclo(x: CycloElement) -> list:
    if x.is_rational():
        return [str(x.rational_value())]
    return [f"z^{i}: {c}" for i, c in enumerate(x.coeffs) if c] + [f"(z = zeta_{x.m})"]


def format_padic(x: PadicCyclo) -> list:
    out = []
    for i, c in enumerate(x.coeffs):
        if c % x.p ** x.digits:
            out.append(f"z^{i}: {padic_expansion(c, x.shift, x.p, x.prec)}")
    return (out or [f"0 + O({x.p}^{x.prec})"]) + [f"(z = zeta_{x.m})"]


# ---------------------------------------------------------------------------
# character selectors


def parse_character(text: str, p: int | None = None) -> DirichletCharacter:
    """Selectors: quadratic-mod-M, trivial-mod-M, omega^k (needs p), M:r1,r2,..."""
    text = text.strip()
    if text.startswith("trivial-mod-"):
        return DirichletCharacter.trivial(int(text[len("trivial-mod-"):]))
    if text.startswith("quadratic-mod-"):
        m = int(text[len("quadratic-mod-"):])
        quad = [c for c in enumerate_characters(m) if c.order == 2]
        prim = [c for c in quad if c.conductor == m]
        pick = prim or quad
        if len(pick) != 1:
            raise UsageError(f"{len(pick)} quadratic characters match {text!r}; "
                             "give generator images instead")
        return pick[0]
    if text.startswith("omega"):
        if p is None:
            raise UsageError("omega^k needs --p")
        k = int(text.split("^", 1)[1]) if "^" in text else 1
        return teichmuller_character(p) ** k
    if ":" in text:
        mod, imgs = text.split(":", 1)
        return DirichletCharacter(int(mod), [Fraction(s) for s in imgs.split(",") if s.strip()])
    raise UsageError(f"unrecognized character {text!r}")


def _omega_exponent(text: str | None, p: int) -> int:
    if text is None:
        raise UsageError("--theta is required")
    if text in ("quad", "quadratic"):
        return (p - 1) // 2
    if text.startswith("omega^"):
        text = text[len("omega^"):]
    return int(text) % (p - 1)


# ---------------------------------------------------------------------------
# compute


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--{name} is required")


def compute_hminus(args) -> dict:
    _need(args, "p", "n")
    return {"value": str(h_minus(args.p, args.n))}


def compute_bernoulli(args) -> dict:
    _need(args, "k", "chi")
    chi = parse_character(args.chi, args.p)
    b = bernoulli_B(args.k, chi)
    return {"character": str(chi.key), "lines": format_cyclo(b)}


def compute_lvalue(args) -> dict:
    _need(args, "p", "chi")
    n = args.n or 0
    chi = parse_character(args.chi, args.p)
    digits = args.precision or 20
    rec = lp_at_one(chi, args.p, n, digits)
    return {"character": str(rec.character), "precision": str(digits),
            "lines": format_padic(rec.value)}


def compute_eps(args) -> dict:
    from .group_ring import stickelberger_eps, stickelberger_eps_twisted
    _need(args, "p", "n")
    if args.theta is None:
        eps = stickelberger_eps(args.p, args.n)
        lines = [f"sigma_{a}: {c}" for a, c in sorted(eps.coeffs.items())]
        return {"group": f"(Z/{args.p ** (args.n + 1)})^x", "lines": lines}
    k = _omega_exponent(args.theta, args.p)
    digits = args.precision or 20
    eps = stickelberger_eps_twisted(teichmuller_character(args.p) ** k, args.p, args.n, digits)
    lines = []
    for b, c in sorted(eps.coeffs.items()):
        c = Fraction(c)
        lines.append(f"gamma0^{b}: "
                     + _fraction_expansion(c, args.p, eps.prec if eps.prec is not None else digits))
    return {"group": f"Gamma_{args.n}", "character": f"omega^{k}", "lines": lines}


def _fraction_expansion(c: Fraction, p: int, prec: int) -> str:
    shift = 0
    den = c.denominator
    while den % p == 0:
        den //= p
        shift += 1
    mod = p ** (prec + shift)
    num = c.numerator * pow(den, -1, mod) % mod
    return padic_expansion(num, shift, p, prec)


_INDEX_SIDES = ("leopoldt", "scriptT-orbit", "logU", "logC")


def _index_lattice(name: str, p: int, n: int, k: int, digits: int):
    from .lab.common import (gamma_span, log_image, power_basis, project, span, special,
                             theta_projector)
    e = theta_projector(k, p, n, digits)
    if name == "leopoldt":
        return span(project(power_basis(p, n, digits, Fraction(1, p**n)), e))
    if name == "scriptT-orbit":
        return gamma_span(e.act(special("script_T", p, n, digits)), n)
    if name == "logU":
        return log_image(p, n, "U", ("theta", k), digits, cross_check=False).lattice
    if name == "logC":
        return log_image(p, n, "C", ("theta", k), digits, cross_check=False).lattice
    raise UsageError(f"unknown lattice {name!r}; choose from {', '.join(_INDEX_SIDES)}")


def compute_index(args) -> dict:
    _need(args, "p", "n", "lhs", "rhs")
    k = _omega_exponent(args.theta, args.p)
    digits = args.precision or default_precision(args.p, args.n)
    big = _index_lattice(args.lhs, args.p, args.n, k, digits)
    small = _index_lattice(args.rhs, args.p, args.n, k, digits)
    try:
        e = big.index(small)
    except ValueError as exc:
        raise UsageError(f"{args.rhs} is not contained in {args.lhs}") from exc
    return {"theta": f"omega^{k}", "exponent": str(e), "lines": [f"{args.p}^{e}"]}


COMPUTE = {"hminus": compute_hminus, "bernoulli": compute_bernoulli, "lvalue": compute_lvalue,
           "eps": compute_eps, "index": compute_index}
_COMPUTE_KEYS = ("p", "n", "k", "chi", "theta", "lhs", "rhs", "precision")


def cmd_compute(args, out) -> int:
    params = {k: getattr(args, k) for k in _COMPUTE_KEYS if getattr(args, k) is not None}
    cache = None if args.no_cache else Cache(args.cache_dir)
    key = make_key("compute:" + args.kind, params)
    payload = None
    if cache is not None:
        try:
            payload = cache.get(key)
        except CacheError as exc:
            print(f"warning: ignoring cached record: {exc}", file=sys.stderr)
    if payload is None:
        payload = COMPUTE[args.kind](args)
        if cache is not None:
            cache.put(key, payload, params.get("precision"))
    if args.format == "records":
        print(json.dumps({"kind": args.kind, "params": {k: str(v) for k, v in params.items()},
                          "result": payload}, sort_keys=True), file=out)
    elif "lines" in payload:
        for line in payload["lines"]:
            print(line, file=out)
    else:
        print(payload["value"], file=out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify


def _points(args, check_id: str) -> list:
    from .lab.registry import REGISTRY, grid
    explicit = {k: getattr(args, k) for k in ("p", "d", "n", "d2", "theta")
                if getattr(args, k) is not None}
    if not explicit:
        return grid(check_id, args.grid)
    if "p" not in explicit:
        raise UsageError("explicit parameters need --p")
    wanted = inspect.signature(REGISTRY[check_id].func).parameters
    if not any(par.kind == par.VAR_KEYWORD for par in wanted.values()):
        extra = [k for k in explicit if k not in wanted]
        if extra:
            raise UsageError(f"{check_id} takes no parameter {', '.join(extra)}")
    point = dict(explicit)
    if "n" in wanted and "n" not in point:
        point["n"] = 0
    if "d" in wanted and "d" not in point and wanted["d"].default is inspect.Parameter.empty:
        point["d"] = 1
    return [point]


def _check_precision(args, jobs):
    if args.precision is None:
        return
    worst = max((j[1].get("p", 2), j[1].get("n", 0)) for j in jobs)
    p, n = worst
    floor = n * p**n + n + 1 + SLACK + 1
    if args.precision < floor:
        raise UsageError(f"--precision {args.precision} is below the minimum {floor} "
                         f"needed for p={p}, n={n}")


def _run_one(job):
    from .lab.registry import run_check
    check_id, params, precision = job
    try:
        report = run_check(check_id, params, precision)
    except (DomainError, PrecisionError) as exc:
        return {"check": check_id, "params": {k: str(v) for k, v in params.items()},
                "status": "error", "error": f"{type(exc).__name__}: {exc}"}, 0.0
    return report.to_record(), report.wall_time


def _exit_status(statuses) -> int:
    if "falsified" in statuses:
        return EXIT_FALSIFIED
    if "undecidable-at-precision" in statuses:
        return EXIT_UNDECIDABLE
    if "error" in statuses:
        return EXIT_USAGE
    return EXIT_OK


def cmd_verify(args, out) -> int:
    from .lab.registry import REGISTRY, CHECKS
    if args.all:
        ids = [c.id for c in CHECKS]
    elif args.check:
        ids = args.check
    else:
        raise UsageError("give --check ID or --all")
    for cid in ids:
        if cid not in REGISTRY:
            raise UsageError(f"unknown check {cid!r} (see list-checks)")
    jobs = [(cid, pt, args.precision) for cid in ids for pt in _points(args, cid)]
    _check_precision(args, jobs)
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_run_one, jobs))
    else:
        results = map(_run_one, jobs)
    cache = None if args.no_cache else Cache(args.cache_dir)
    statuses = []
    if args.format == "table":
        print(f"{'check':24} {'params':34} {'status':26} time", file=out)
    # single writer: reports and cache records are emitted here, in job order
    for (cid, pt, _), (record, wall) in zip(jobs, results):
        statuses.append(record["status"])
        if cache is not None and record["status"] != "error":
            cache.put(make_key("report:" + cid, record["params"]), record, record["precision"])
        if args.format == "records":
            print(json.dumps(record, sort_keys=True), file=out)
        else:
            shown = " ".join(f"{k}={v}" for k, v in record["params"].items())
            status = record["status"] if "error" not in record else f"error ({record['error']})"
            print(f"{cid:24} {shown:34} {status:26} {wall:.1f}s", file=out)
    if args.format == "table":
        counts = {s: statuses.count(s) for s in sorted(set(statuses))}
        print(f"{len(statuses)} reports: " + ", ".join(f"{v} {k}" for k, v in counts.items()),
              file=out)
    return _exit_status(statuses)


# ---------------------------------------------------------------------------
# cache, list-checks


def cmd_cache(args, out) -> int:
    cache = Cache(args.cache_dir)
    if args.action == "list":
        for name, key, state in cache.list():
            print(f"{name}  {state}  {key or ''}", file=out)
        return EXIT_OK
    if args.action == "prune":
        removed = cache.prune(bad_only=not args.everything)
        print(f"removed {removed} records", file=out)
        return EXIT_OK
    count, problems = cache.verify()
    print(f"{count} records", file=out)
    for msg in problems:
        print(f"bad: {msg}", file=out)
    if problems and args.prune:
        print(f"removed {cache.prune(bad_only=True)} records", file=out)
    elif not problems:
        print("all digests valid", file=out)
    return EXIT_FALSIFIED if problems else EXIT_OK


def cmd_list(args, out) -> int:
    from .lab.registry import CHECKS, anchor_map, grid
    if args.anchor_map:
        for cid, anchor in anchor_map():
            print(f"{cid:24} {anchor}", file=out)
        return EXIT_OK
    for c in CHECKS:
        print(f"{c.id:24} {len(grid(c.id, 'default')):3d} default points   "
              f"{len(grid(c.id, 'extended')):3d} extended", file=out)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="padic-iwasawa", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--p", type=int)
        sp.add_argument("--n", type=int)
        sp.add_argument("--theta")
        sp.add_argument("--precision", type=int)
        sp.add_argument("--format", choices=("table", "records"), default="table")
        sp.add_argument("--cache-dir", help="defaults to $PADIC_IWASAWA_CACHE")
        sp.add_argument("--no-cache", action="store_true")

    v = sub.add_parser("verify", help="run checks")
    common(v)
    v.add_argument("--d", type=int)
    v.add_argument("--d2", type=int)
    v.add_argument("--check", action="append")
    v.add_argument("--all", action="store_true")
    v.add_argument("--grid", choices=("default", "extended"), default="default")
    v.add_argument("--default-grid", dest="grid", action="store_const", const="default")
    v.add_argument("--extended-grid", dest="grid", action="store_const", const="extended")
    v.add_argument("--jobs", type=int, default=1)

    c = sub.add_parser("compute", help="compute a single object")
    c.add_argument("kind", choices=sorted(COMPUTE))
    common(c)
    c.add_argument("--k", type=int)
    c.add_argument("--chi")
    c.add_argument("--lhs", choices=_INDEX_SIDES)
    c.add_argument("--rhs", choices=_INDEX_SIDES)

    k = sub.add_parser("cache", help="inspect the on-disk cache")
    k.add_argument("action", choices=("list", "prune", "verify"))
    k.add_argument("--cache-dir")
    k.add_argument("--prune", action="store_true", help="with verify: delete bad records")
    k.add_argument("--everything", action="store_true", help="with prune: delete all records")

    ls = sub.add_parser("list-checks", help="list registered checks")
    ls.add_argument("--anchor-map", action="store_true",
                    help="print each check id with the formula it verifies")
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {"verify": cmd_verify, "compute": cmd_compute, "cache": cmd_cache,
               "list-checks": cmd_list}[args.command]
    try:
        return handler(args, out)
    except (UsageError, DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
