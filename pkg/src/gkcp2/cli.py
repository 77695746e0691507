"""Command line interface: parameter tables, grid export and residual checks.

Exit codes: 0 success, 1 a check failed, 2 usage error, 3 parameter outside
the admissible domain, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import checks, elliptic as ell, gkp, gks
from .errors import ConvergenceError, DomainError, GkError, PoleError
from .flow import PolarPoint, y_array

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_DOMAIN, EXIT_NUMERIC = 0, 1, 2, 3, 4
FIELD_KINDS = [k.value for k in gks.Kind]
DEFAULT_RANGE = (0.005, 0.032)


class UsageError(GkError):
    pass


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def _json_clean(obj, errors: list[str], path: str = ""):
    """Replace non-finite floats by None and log them in ``errors``."""
    if isinstance(obj, dict):
        return {k: _json_clean(v, errors, f"{path}.{k}" if path else k) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_clean(v, errors, f"{path}[{i}]") for i, v in enumerate(obj)]
    if isinstance(obj, (float, np.floating)):
        if not math.isfinite(obj):
            errors.append(f"non-finite value at {path}")
            return None
        return float(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def dump_json(doc: dict) -> str:
    errors = list(doc.pop("errors", []))
    clean = _json_clean(doc, errors)
    clean["errors"] = errors
    return json.dumps(clean, indent=2, allow_nan=False) + "\n"


def dump_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _require_c3(c3: float | None) -> float:
    if c3 is None:
        raise UsageError("--c3 is required")
    ell.invariants_from_c3(c3)
    return c3


def _parse_tols(items: list[str]) -> dict[str, float]:
    tols = {}
    for item in items or []:
        name, sep, val = item.partition("=")
        if not sep:
            raise UsageError(f"--tol expects NAME=VAL, got {item!r}")
        try:
            v = float(val)
        except ValueError as exc:
            raise UsageError(f"bad tolerance {val!r}") from exc
        if not v > 0.0:
            raise UsageError("tolerances must be positive")
        tols[name] = v
    return tols


# -- commands -----------------------------------------------------------------


def params_table(c3: float) -> dict:
    lat = ell.lattice(c3)
    return {
        "c3": c3,
        "g2": lat.g2,
        "g3": lat.g3,
        "discriminant": lat.discriminant,
        "j_invariant": lat.j_invariant,
        "e1": lat.e1,
        "e2": lat.e2,
        "e3": lat.e3,
        "omega1": lat.omega1,
        "omega2_imag": lat.omega2.imag,
        "eta1": lat.eta1,
        "eta2_imag": lat.eta2.imag,
        "tilde_eta1": lat.tilde_eta1,
        "tilde_eta2_imag": lat.tilde_eta2.imag,
        "legendre_residual": lat.legendre_residual(),
    }


def cmd_params(args) -> int:
    table = params_table(_require_c3(args.c3))
    if args.format == "json":
        _emit(dump_json(table), args.out)
    else:
        _emit(dump_csv(list(table), [list(table.values())]), args.out)
    return EXIT_OK


def cmd_contour(args) -> int:
    c3 = _require_c3(args.c3)
    n = args.n
    if n < 2:
        raise UsageError("--n must be at least 2")
    s = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
    y = y_array(c3, s)
    rows = [[float(si), *map(float, yi)] for si, yi in zip(s, y)]
    if args.format == "json":
        _emit(dump_json({"c3": c3, "points": [dict(zip(("s", "y1", "y2", "y3"), r)) for r in rows]}), args.out)
    else:
        _emit(dump_csv(["s", "y1", "y2", "y3"], rows), args.out)
    return EXIT_OK


def field_matrix(kind: str, c3: float, s: float, dt: float) -> np.ndarray:
    kind = gks.Kind(kind)
    p = PolarPoint(c3, s)
    if kind is gks.Kind.I_MINUS:
        return gks.I_minus(p).m
    if kind is gks.Kind.I_PLUS:
        return gks.I_plus(p, dt).m
    if kind is gks.Kind.Q:
        return gks.Q_polar(p).m
    if kind is gks.Kind.F:
        return gks.F_two_form(p, dt).m
    if kind is gks.Kind.G:
        return gks.metric(p, dt).m
    re, im = gks.sigma_pm(p, dt)
    return re.m if kind is gks.Kind.SIGMA_PLUS_RE else im.m


def cmd_field(args) -> int:
    if args.grid_c3 < 2 or args.grid_s < 2:
        raise UsageError("grid sizes must be at least 2")
    lo, hi = args.c3_range
    ell.invariants_from_c3(lo)
    ell.invariants_from_c3(hi)
    c3s = np.linspace(lo, hi, args.grid_c3)
    ss = np.linspace(0.0, 2.0 * math.pi, args.grid_s, endpoint=False)
    names = [f"m{i}{j}" for i in range(4) for j in range(4)]
    symmetric = args.kind == gks.Kind.G.value
    header = ["c3", "s", "dt"] + names + (["min_eig"] if symmetric else [])
    rows = []
    for c3 in c3s:
        for s in ss:
            m = field_matrix(args.kind, float(c3), float(s), args.dt)
            row = [float(c3), float(s), float(args.dt)] + [float(v) for v in m.ravel()]
            if symmetric:
                row.append(float(np.linalg.eigvalsh(m)[0]))
            rows.append(row)
    if args.format == "json":
        doc = {"kind": args.kind, "dt": args.dt, "order": "theta1,theta2,c3,s", "samples": [dict(zip(header, r)) for r in rows]}
        _emit(dump_json(doc), args.out)
    else:
        _emit(dump_csv(header, rows), args.out)
    return EXIT_OK


def cmd_check(args) -> int:
    tols = _parse_tols(args.tol)
    reports = checks.run(args.suite, seed=args.seed)
    for rep in reports:
        rep.apply_overrides(tols)
    ok = all(r.passed for r in reports)
    if args.format == "json":
        doc = {
            "suite": args.suite,
            "seed": args.seed,
            "passed": ok,
            "reports": [
                {
                    "suite": r.suite,
                    "passed": r.passed,
                    "items": [
                        {"id": i.id, "anchor": i.anchor, "residual": i.residual, "tolerance": i.tolerance, "passed": i.passed}
                        for i in r.items
                    ],
                }
                for r in reports
            ],
        }
        _emit(dump_json(doc), args.out)
    elif args.format == "csv":
        rows = [[r.suite, i.id, i.anchor, i.residual, i.tolerance, i.passed] for r in reports for i in r.items]
        _emit(dump_csv(["suite", "id", "anchor", "residual", "tolerance", "passed"], rows), args.out)
    else:
        _emit("\n".join(line for r in reports for line in r.lines()) + "\n", args.out)
    return EXIT_OK if ok else EXIT_CHECK


def cmd_gkp(args) -> int:
    c3 = _require_c3(args.c3)
    if args.dt < 0.0:
        raise DomainError("--dt must be non-negative")
    p = PolarPoint(c3, args.s)
    v = gkp.potential(p, args.dt)
    doc = {
        "c3": c3,
        "s": p.s,
        "dt": args.dt,
        "K": v.K,
        "fubini_study_part": v.fubini_study_part,
        "correction_part": v.correction_part,
        "quad_order_used": v.quad_order,
    }
    if args.slope:
        slope = gkp.slope_at_zero(p)
        doc["slope_at_zero"] = slope
        doc["slope_expected"] = 0.25 * math.log(c3)
        doc["slope_residual"] = abs(slope - 0.25 * math.log(c3))
    if args.format == "csv":
        _emit(dump_csv(list(doc), [list(doc.values())]), args.out)
    else:
        _emit(dump_json(doc), args.out)
    return EXIT_OK


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gkcp2", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, fmt_default="csv", fmts=("csv", "json")):
        p.add_argument("--format", choices=fmts, default=fmt_default)
        p.add_argument("--out", default=None, help="write to PATH instead of stdout")
        p.add_argument("--seed", type=int, default=checks.DEFAULT_SEED)

    p = sub.add_parser("params", help="lattice data for one c3")
    p.add_argument("--c3", type=float)
    common(p)
    p.set_defaults(fn=cmd_params)

    p = sub.add_parser("contour", help="points (s, y1, y2, y3) on one flow contour")
    p.add_argument("--c3", type=float)
    p.add_argument("--n", type=int, default=64)
    common(p)
    p.set_defaults(fn=cmd_contour)

    p = sub.add_parser("field", help="4x4 tensor samples over a (c3, s) grid")
    p.add_argument("--kind", choices=FIELD_KINDS, required=True)
    p.add_argument("--dt", type=float, default=0.0)
    p.add_argument("--grid-c3", type=int, default=8)
    p.add_argument("--grid-s", type=int, default=8)
    p.add_argument("--c3-range", type=float, nargs=2, default=DEFAULT_RANGE, metavar=("LO", "HI"))
    common(p)
    p.set_defaults(fn=cmd_field)

    p = sub.add_parser("check", help="run residual suites")
    p.add_argument("--suite", choices=["all", *checks.SUITES], default="all")
    p.add_argument("--tol", action="append", metavar="NAME=VAL", help="override the tolerance of check NAME")
    common(p, "text", ("text", "csv", "json"))
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("gkp", help="generalised Kähler potential at one point")
    p.add_argument("--c3", type=float)
    p.add_argument("--s", type=float, default=0.0)
    p.add_argument("--dt", type=float, default=0.0)
    p.add_argument("--slope", action="store_true", help="also compare dK/dt at 0 with log(c3)/4")
    common(p, "json")
    p.set_defaults(fn=cmd_gkp)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, PoleError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ConvergenceError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    main_entry()
