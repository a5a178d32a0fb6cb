"""Command-line front end: expand, verify, classnum, enumerate, moments.

Exit codes: 0 success (every requested identity passes), 1 some identity
failed or errored, 2 usage error.  Output is deterministic for identical
inputs; timings are printed only with ``--timing``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from . import classnum, combinat, durfee, special, verify
from .coeffring import I, ONE
from .errors import QDurfeeError, UnknownIdentity
from .qlaurent import Monomial, QSeries, format_series

DEFAULT_ORDER = Fraction(10)
ORDER_ENV = "DURFEE_ORDER"
EXPRESSIONS = (
    "no",
    "no-bilateral",
    "sym-moment",
    "ord-moment",
    "marked",
    "eta",
    "theta",
    "mu",
    "rank",
    "rank-star",
    "class-series",
)


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# parameter grammar
# ---------------------------------------------------------------------------

_UNITS = {"1": ONE, "-1": -ONE, "i": I, "-i": -I}
_EXP = r"-?\d+(?:/\d+)?"
_QPOW = re.compile(rf"^(?:(?P<unit>1|-1|i|-i)\*|(?P<neg>-))?q(?:\^(?:\{{(?P<b>{_EXP})\}}|(?P<e>{_EXP})))?$")


def parse_param(text: str, name: str = "parameter"):
    """Parse ``0 | 1 | -1 | i | -i | 1/q | [unit*]q^{p/r} | sym``.

    Returns ``durfee.ZERO``, ``durfee.SYMBOLIC`` or a Monomial unit * q^e.
    """
    tok = text.strip()
    if tok == "sym":
        return durfee.SYMBOLIC
    if tok == "0":
        return durfee.ZERO
    if tok in _UNITS:
        return Monomial(_UNITS[tok], 0)
    if tok == "1/q":
        return Monomial(ONE, -1)
    m = _QPOW.match(tok)
    if not m:
        raise UsageError(f"cannot parse {name} value {text!r}")
    unit = _UNITS[m["unit"]] if m["unit"] else (-ONE if m["neg"] else ONE)
    e = m["b"] or m["e"] or "1"
    return Monomial(unit, Fraction(e))


def param_to_arg(value, name: str) -> special.ArgSpec:
    """Read a parsed parameter as e^{2 pi i u} and return the argument u."""
    if value is durfee.SYMBOLIC:
        return special.ArgSpec.symbolic()
    if value is durfee.ZERO:
        raise UsageError(f"{name} cannot be 0")
    return special.ArgSpec.from_unit(value.coeff.scalar_value(), 0, value.exp)


def parse_order(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"cannot parse order {text!r}") from None


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------


def read_config(path: str) -> Dict[str, str]:
    """key = value lines; '#' starts a comment; values may be quoted."""
    out: Dict[str, str] = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path!r}: {exc.strerror}") from None
    for num, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line or (line.startswith("[") and line.endswith("]")):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{num}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key] = value.strip("\"'")
    return out


def resolve_settings(args) -> None:
    """Fill args.order / args.lattice / args.format: flag, then env, then config."""
    cfg = read_config(args.config) if args.config else {}
    if args.order is None:
        env = os.environ.get(ORDER_ENV)
        if env:
            args.order = env
        elif "order" in cfg:
            args.order = cfg["order"]
    args.order = parse_order(args.order) if args.order is not None else None
    if getattr(args, "lattice", "n/a") is None:
        args.lattice = int(cfg["lattice"]) if "lattice" in cfg else None
    if getattr(args, "format", "n/a") is None:
        args.format = cfg.get("format", "text" if args.command in ("verify", "classnum", "enumerate") else "json")


# ---------------------------------------------------------------------------
# series output
# ---------------------------------------------------------------------------


def series_to_json(f: QSeries) -> str:
    return json.dumps(f.to_dict(), indent=2)


def series_from_json(text: str) -> QSeries:
    return QSeries.from_dict(json.loads(text))


def series_to_csv(f: QSeries) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["exp", "coeff"])
    for e, p in f.items():
        w.writerow([str(e), str(p)])
    return buf.getvalue()


def emit_series(f: QSeries, fmt: str, lattice: Optional[int], out) -> None:
    if lattice:
        if lattice % f.den == 0:
            f = f.rescale(lattice)
        else:
            g = f.reduce_lattice()
            if lattice % g.den:
                raise UsageError(f"series needs lattice denominator {g.den}, not {lattice}")
            f = g.rescale(lattice)
    if fmt == "json":
        out.write(series_to_json(f) + "\n")
    elif fmt == "csv":
        out.write(series_to_csv(f))
    else:
        out.write(format_series(f) + "\n")


def _rows(rows: List[Sequence], fmt: str, header: Sequence[str], out) -> None:
    if fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(header)
        w.writerows([[str(x) for x in r] for r in rows])
    elif fmt == "json":
        out.write(json.dumps([dict(zip(header, map(str, r))) for r in rows], indent=2) + "\n")
    else:
        for r in rows:
            out.write(", ".join(str(x) for x in r) + "\n")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def build_expression(args) -> QSeries:
    order = args.order if args.order is not None else DEFAULT_ORDER
    a = parse_param(args.a, "--a")
    b = parse_param(args.b, "--b")
    expr = args.expr
    if expr in ("no", "no-bilateral"):
        p = durfee.ParamChoice(a, b, parse_param(args.z, "--z"))
        if expr == "no":
            return durfee.no_series(p, order)
        return durfee.no_bilateral(p, order, args.variant)
    if expr == "sym-moment":
        return durfee.sym_moment_series(args.k, a, b, order)
    if expr == "ord-moment":
        return durfee.ord_moment_series(args.k, a, b, order)
    if expr == "marked":
        xs = [parse_param(x, "--x") for x in (args.x or [])]
        if not xs:
            xs = [durfee.SYMBOLIC] * args.k
        if len(xs) != args.k:
            raise UsageError(f"marked needs {args.k} --x values, got {len(xs)}")
        return durfee.marked_multisum(args.k, xs, a, b, order)
    if expr == "eta":
        return special.eta_series(args.m, order)
    if expr == "theta":
        return special.theta_series(param_to_arg(parse_param(args.u, "--u"), "--u"), args.m, order)
    if expr == "mu":
        u = param_to_arg(parse_param(args.u, "--u"), "--u")
        v = param_to_arg(parse_param(args.v, "--v"), "--v")
        return special.mu_series(u, v, args.m, order)
    if expr in ("rank", "rank-star"):
        starred = expr == "rank-star"
        # R*(z; q) has no series expansion for symbolic z; R*(zq; q^2) does
        c = Fraction(args.zshift) if args.zshift is not None else Fraction(int(starred))
        p = args.qpower if args.qpower is not None else 1 + starred
        return special.dyson_rank(order, starred=starred, z_shift=c, q_power=p)
    if expr == "class-series":
        n_max = -(-order.numerator // order.denominator) - 1
        if args.kind == "H":
            vals = {n: classnum.hurwitz(n) for n in range(0, n_max + 1)}
        else:
            vals = {n: classnum.kronecker_f(n) for n in range(1, n_max + 1)}
        return QSeries.from_terms(vals, order=order)
    raise UsageError(f"unknown expression {expr!r}")


def cmd_expand(args, out) -> int:
    emit_series(build_expression(args), args.format, args.lattice, out)
    return 0


def cmd_moments(args, out) -> int:
    order = args.order if args.order is not None else DEFAULT_ORDER
    a = parse_param(args.a, "--a")
    b = parse_param(args.b, "--b")
    if args.kind == "sym":
        f = durfee.sym_moment_series(args.k, a, b, order)
    else:
        f = durfee.ord_moment_series(args.k, a, b, order)
    emit_series(f, args.format, args.lattice, out)
    return 0


def cmd_classnum(args, out) -> int:
    if args.max < 1:
        raise UsageError("--max must be positive")
    table = classnum.hurwitz_table(args.max) if args.kind == "H" else classnum.kronecker_table(args.max)
    _rows(table, args.format, ("n", args.kind), out)
    return 0


def cmd_enumerate(args, out) -> int:
    if args.n < 1:
        raise UsageError("--n must be positive")
    if args.marks:
        counts = combinat.enumerate_marked(args.marks, args.n)
        header = ("r", "s") + tuple(f"m{i}" for i in range(1, args.marks + 1)) + ("count",)
    else:
        counts = combinat.enumerate_symbols(args.n)
        header = ("r", "s", "m", "count")
    rows = [key + (c,) for key, c in sorted(counts.items())]
    _rows(rows, args.format, header, out)
    return 0


def cmd_verify(args, out) -> int:
    ids = args.id or verify.identity_ids(args.suite)
    for i in ids:
        verify.get_identity(i)
    if args.jobs > 1 and len(ids) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            reports = list(ex.map(verify.run_identity, ids, [args.order] * len(ids)))
    else:
        reports = [verify.run_identity(i, args.order) for i in ids]
    if args.format == "json":
        docs = []
        for r in reports:
            d = r.to_dict()
            if not args.timing:
                d.pop("elapsed")
            docs.append(d)
        passed = sum(r.passed for r in reports)
        out.write(json.dumps({"passed": passed, "total": len(reports), "reports": docs}, indent=2) + "\n")
    else:
        for r in reports:
            line = r.summary()
            if not args.timing:
                line = line.replace(f", {r.elapsed:.2f}s)", ")")
            out.write(line + "\n")
        out.write(f"{sum(r.passed for r in reports)}/{len(reports)} passed\n")
    return 0 if all(r.passed for r in reports) else 1


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _common(p: argparse.ArgumentParser, fmt=("json", "csv", "text"), lattice=True) -> None:
    p.add_argument("--order", help="truncation order (rational); default from DURFEE_ORDER or config")
    p.add_argument("--format", choices=fmt, default=None)
    p.add_argument("--config", help="key = value file setting order, lattice, format")
    if lattice:
        p.add_argument("--lattice", type=int, default=None, help="output lattice denominator")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qdurfee", description="Exact q-series for generalized odd Durfee symbols.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", help="expand a named series")
    p.add_argument("expr", choices=EXPRESSIONS)
    p.add_argument("--a", default="sym")
    p.add_argument("--b", default="sym")
    p.add_argument("--z", default="sym")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--m", type=int, default=1, help="tau scale for eta, theta and mu")
    p.add_argument("--x", action="append", help="marking value (repeat k times)")
    p.add_argument("--u", default="sym", help="e^{2 pi i u} for theta and mu")
    p.add_argument("--v", default="-1", help="e^{2 pi i v} for mu")
    p.add_argument("--variant", choices=("two_pole", "one_pole"), default="two_pole")
    p.add_argument("--zshift", default=None, help="c in R(z q^c; q^p); default 0 (rank), 1 (rank-star)")
    p.add_argument("--qpower", type=int, default=None, help="p in R(z q^c; q^p); default 1 (rank), 2 (rank-star)")
    p.add_argument("--kind", choices=("H", "F"), default="H", help="class-series kind")
    _common(p)

    p = sub.add_parser("verify", help="check registered identities")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--suite", default="all", choices=("all",) + verify.SUITES)
    g.add_argument("--id", action="append", help="identity id (repeatable)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="include elapsed times")
    _common(p, ("text", "json"), lattice=False)

    p = sub.add_parser("classnum", help="class number table")
    p.add_argument("--kind", choices=("H", "F"), default="H")
    p.add_argument("--max", type=int, required=True)
    _common(p, ("text", "csv", "json"), lattice=False)

    p = sub.add_parser("enumerate", help="count symbols of weight n by statistics")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--marks", type=int, default=0, help="k for k-marked symbols")
    _common(p, ("text", "csv", "json"), lattice=False)

    p = sub.add_parser("moments", help="rank moment generating function")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--a", default="sym")
    p.add_argument("--b", default="sym")
    p.add_argument("--kind", choices=("sym", "ord"), default="sym")
    _common(p)
    return parser


COMMANDS = {
    "expand": cmd_expand,
    "verify": cmd_verify,
    "classnum": cmd_classnum,
    "enumerate": cmd_enumerate,
    "moments": cmd_moments,
}


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        resolve_settings(args)
        return COMMANDS[args.command](args, out)
    except (UsageError, UnknownIdentity, ValueError, QDurfeeError) as exc:
        print(f"qdurfee {args.command}: {exc}", file=sys.stderr)
        return 2


def main_entry() -> None:
    sys.exit(main())
