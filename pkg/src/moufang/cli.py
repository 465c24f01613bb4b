"""Command-line driver.

Subcommands:

  verify      run residual families over sampled points, write a report
  tensors     dump every tensor at one point as a JSON document
  calibrate   sweep the sign conventions over a loop list
  table       emit the basis multiplication table of the dim-4/8 algebra

Exit codes: 0 success/pass, 1 identity or calibration failure, 2 usage or
domain error.  Diagnostics go to stderr; report data goes to --out or stdout.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

import moufang
from moufang.errors import CalibrationError, DomainError, LoopSpecError
from moufang.loops import basis_table, builtin
from moufang.report import build_verify_report, render_csv, render_json
from moufang.suites import (
    DEFAULT_TOLERANCE,
    FAMILY_NAMES,
    SamplePlan,
    TensorCache,
    calibrate_conventions,
    run_suite,
)
from moufang.tensors import DEFAULT_CONVENTIONS

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="moufang",
        description="Numerical verification of the differential identities of local analytic Moufang loops.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="evaluate identity families over sampled points")
    p.add_argument("--loop", required=True, help="loop spec, e.g. octonion or broken:eps=0.01")
    p.add_argument("--families", default="all", help=f"csv of families or 'all' ({','.join(FAMILY_NAMES)})")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--radius", type=float, default=0.2)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--tol", type=float, default=DEFAULT_TOLERANCE)
    p.add_argument("--out", default=None, help="report file (stdout when omitted)")
    p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("tensors", help="dump u, v, w, C and the secondary tensors at a point")
    p.add_argument("--loop", required=True)
    p.add_argument("--point", required=True, help="comma-separated chart coordinates")
    p.add_argument("--out", default=None)

    p = sub.add_parser("calibrate", help="sweep the sign conventions over a loop list")
    p.add_argument("--loops", required=True, help="csv of loop specs")
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--radius", type=float, default=0.2)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--tol", type=float, default=DEFAULT_TOLERANCE)
    p.add_argument("--out", default=None)

    p = sub.add_parser("table", help="emit the basis multiplication table")
    p.add_argument("--dim", type=int, choices=(4, 8), default=8)
    p.add_argument("--out", default=None)

    return parser


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _parse_families(arg: str):
    if arg.strip().lower() == "all":
        return None
    names = [x.strip().upper() for x in arg.split(",") if x.strip()]
    bad = [x for x in names if x not in FAMILY_NAMES]
    if bad:
        raise LoopSpecError(f"unknown families: {', '.join(bad)}")
    return names


def _cmd_verify(ns) -> int:
    families = _parse_families(ns.families)
    plan = SamplePlan(loop_spec=builtin(ns.loop).spec, seed=ns.seed, count=ns.samples, radius=ns.radius)
    results = run_suite(plan, families=families, tolerance=ns.tol, conventions=DEFAULT_CONVENTIONS)
    report = build_verify_report(
        loop_spec=plan.loop_spec,
        seed=ns.seed,
        samples=ns.samples,
        radius=ns.radius,
        tolerance=ns.tol,
        conventions=DEFAULT_CONVENTIONS,
        results=results,
        version=moufang.__version__,
    )
    for r in results:
        verdict = "pass" if r.passed else "FAIL"
        print(f"{r.family:<14} max {r.max:.3e}  mean {r.mean:.3e}  {verdict}", file=sys.stderr)
    _emit(render_json(report) if ns.format == "json" else render_csv(report), ns.out)
    return EXIT_PASS if report["pass"] else EXIT_FAIL


def _cmd_tensors(ns) -> int:
    loop = builtin(ns.loop)
    try:
        point = np.array([float(c) for c in ns.point.split(",")])
    except ValueError:
        raise LoopSpecError(f"malformed point {ns.point!r}") from None
    loop.check_point(point)
    cache = TensorCache(loop)
    aux = cache.aux(point)
    sec = cache.secondary(point)
    c = cache.structure(DEFAULT_CONVENTIONS.bracket_sign)
    doc = {
        "tool": {"name": "moufang", "version": moufang.__version__},
        "loop": loop.spec,
        "point": [float(x) for x in point],
        "conventions": {
            "bracket_sign": DEFAULT_CONVENTIONS.bracket_sign,
            "lemma_sign": DEFAULT_CONVENTIONS.lemma_sign,
        },
        "index_layout": "matrices m[i][j] = m^i_j; tensors t[s][j][k] = t^s_jk (output index first)",
        "u": aux.u.tolist(),
        "v": aux.v.tolist(),
        "w": aux.w.tolist(),
        "C": c.tolist(),
        "u_jk": sec.u_jk.tolist(),
        "v_jk": sec.v_jk.tolist(),
        "w_jk": sec.w_jk.tolist(),
        "y_jk": sec.y_jk.tolist(),
    }
    _emit(json.dumps(doc, indent=2) + "\n", ns.out)
    return EXIT_PASS


def _cmd_calibrate(ns) -> int:
    specs = [x.strip() for x in ns.loops.split(",") if x.strip()]
    if not specs:
        raise LoopSpecError("--loops requires at least one loop spec")
    try:
        result = calibrate_conventions(
            specs, seed=ns.seed, count=ns.samples, radius=ns.radius, tolerance=ns.tol
        )
    except CalibrationError as err:
        doc = {"calibrated": False, "error": str(err), "assignments": err.table}
        _emit(json.dumps(doc, indent=2) + "\n", ns.out)
        print(f"calibration failed: {err}", file=sys.stderr)
        return EXIT_FAIL
    doc = {
        "calibrated": True,
        "ledger": {
            "bracket_sign": result.ledger.bracket_sign,
            "lemma_sign": result.ledger.lemma_sign,
        },
        "assignments": result.table,
    }
    _emit(json.dumps(doc, indent=2) + "\n", ns.out)
    return EXIT_PASS


def _cmd_table(ns) -> int:
    sign, index = basis_table(ns.dim)
    doc = {
        "dim": ns.dim,
        "convention": "e_i e_j = sign[i][j] * e_index[i][j]; component 0 is the real unit",
        "sign": sign.tolist(),
        "index": index.tolist(),
    }
    _emit(json.dumps(doc, indent=2) + "\n", ns.out)
    return EXIT_PASS


_COMMANDS = {
    "verify": _cmd_verify,
    "tensors": _cmd_tensors,
    "calibrate": _cmd_calibrate,
    "table": _cmd_table,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as err:  # argparse has already written the message
        return int(err.code) if err.code else EXIT_PASS
    try:
        return _COMMANDS[ns.command](ns)
    except (LoopSpecError, DomainError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


def entry():  # console-script wrapper
    raise SystemExit(main())
