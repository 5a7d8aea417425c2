"""Command-line entry point: ``toric-mmp``.

Exit codes: 0 success, 1 oracle mismatch or gallery drift, 2 parse or
validation error, 3 theorem violation, 4 step cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import gallery
from ._version import __version__
from .documents import dumps, load_document, serialize_trace
from .errors import (
    NotInSupport,
    NotPrimitive,
    ParseError,
    StepCapExceeded,
    TheoremViolation,
    ValidationError,
    ZeroVector,
)
from .fan import has_convex_support
from .foliation import discrepancy_oracle, foliated_discrepancy
from .mmp import STRATEGIES, run_mmp
from .reports import analysis_report, foliation_report, mmp_report, negative_rays_report, render
from .sampling import random_support_point

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INVALID = 2
EXIT_THEOREM = 3
EXIT_STEP_CAP = 4


def _load(ref: str, need_form: bool = False):
    try:
        path = gallery.resolve(ref)
    except FileNotFoundError as e:
        raise ParseError(str(e), ref) from None
    if not path.is_file():
        raise ParseError("no such file", str(path))
    doc = load_document(path)
    if need_form and doc.form is None:
        raise ParseError("this command needs a 'lambda' field", f"{path}: lambda")
    return doc


def _emit(report: dict, as_json: bool, title: str):
    if as_json:
        sys.stdout.write(dumps(report))
    else:
        print(render(report, title))


def cmd_analyze(args) -> int:
    doc = _load(args.path)
    report = analysis_report(doc.fan)
    if not args.json:
        lines = list(report["summary"])
        for m in report["multiplicities"]:
            if m["multiplicity"] != 1:
                lines.append(f"cone {m['cone']} has multiplicity {m['multiplicity']}")
        for w in report["walls"]:
            rel = " + ".join(f"{b}*u{i}" for i, b in w["relation"].items())
            lines.append(f"wall {w['rays']}: {rel} = 0, class ({', '.join(w['class'])})")
        lines.append(f"K_X = ({', '.join(report['canonical_divisor'])})")
        report = dict(report, summary=lines)
    _emit(report, args.json, f"analyze {args.path}")
    return EXIT_OK


def cmd_foliation_check(args) -> int:
    doc = _load(args.path, need_form=True)
    report = foliation_report(doc.fan, doc.form, doc.boundary_list())
    report["negative_rays"] = negative_rays_report(doc.fan, doc.form)
    if not args.json:
        lines = [f"lambda = {report['lambda']}", f"epsilon = {report['epsilon']}", f"K_F = ({', '.join(report['K_F'])})"]
        lines += report["summary"]
        for fp in report["fixed_points"]:
            lines.append(f"fixed point of {fp['cone']}: {fp['type']}")
        report = dict(report, summary=lines)
    _emit(report, args.json, f"foliation-check {args.path}")
    return EXIT_OK


def cmd_run_mmp(args) -> int:
    doc = _load(args.path, need_form=True)
    if not has_convex_support(doc.fan):
        raise ValidationError(["NonConvexSupport: the support of the fan is not convex"])
    try:
        trace = run_mmp(doc.fan, doc.form, args.strategy, args.step_cap, args.seed)
    except StepCapExceeded as e:
        if args.out and e.trace is not None:
            Path(args.out).write_text(serialize_trace(e.trace), encoding="utf-8")
        raise
    if args.out:
        Path(args.out).write_text(serialize_trace(trace), encoding="utf-8")
    _emit(mmp_report(trace), args.json, f"run-mmp {args.path} (strategy {args.strategy})")
    return EXIT_OK


def _read_points(path: str) -> list:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        data = []
        for n, line in enumerate(text.splitlines(), 1):
            line = line.split("#")[0].strip().strip("()[]")
            if not line:
                continue
            try:
                data.append([int(x) for x in line.replace(",", " ").split()])
            except ValueError:
                raise ParseError(f"cannot read a lattice point from {line!r}", f"{path}:{n}") from None
    if not isinstance(data, list) or not all(isinstance(p, list) for p in data):
        raise ParseError("expected a list of integer vectors", path)
    return data


def cmd_oracle(args) -> int:
    doc = _load(args.path, need_form=True)
    if args.points:
        points = _read_points(args.points)
    else:
        rng = random.Random(args.seed)
        points = [random_support_point(rng, doc.fan) for _ in range(args.random)]
    boundary = doc.boundary_list()
    rows, mismatches = [], 0
    for p in points:
        p = tuple(p)
        try:
            formula = foliated_discrepancy(doc.fan, doc.form, boundary, p)
            oracle = discrepancy_oracle(doc.fan, doc.form, boundary, p)
        except (NotInSupport, NotPrimitive, ZeroVector, ValueError) as e:
            rows.append({"point": list(p), "skipped": f"{type(e).__name__}: {e}"})
            continue
        if formula.is_ray:
            rows.append({"point": list(p), "ray": True, "formula": str(formula.value)})
            continue
        equal = formula.value == oracle.value
        mismatches += not equal
        rows.append({"point": list(p), "formula": str(formula.value), "oracle": str(oracle.value), "equal": equal})
    report = {"points": rows, "mismatches": mismatches, "summary": []}
    for r in rows:
        if "skipped" in r:
            report["summary"].append(f"{tuple(r['point'])}: skipped ({r['skipped']})")
        elif r.get("ray"):
            report["summary"].append(f"{tuple(r['point'])}: existing ray, excluded")
        else:
            verdict = "equal" if r["equal"] else "MISMATCH"
            report["summary"].append(f"{tuple(r['point'])}: formula {r['formula']}, oracle {r['oracle']}, {verdict}")
    report["summary"].append(f"{len(rows)} points, {mismatches} mismatches")
    _emit(report, args.json, f"oracle {args.path}")
    return EXIT_MISMATCH if mismatches else EXIT_OK


def cmd_check_gallery(args) -> int:
    results = gallery.check_gallery()
    bad = 0
    for name, problem in results.items():
        print(f"{name}: {'ok' if problem is None else problem}")
        bad += problem is not None
    print(f"{len(results)} cases, {bad} failing")
    return EXIT_MISMATCH if bad or not results else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="toric-mmp", description="Toric foliations and their minimal model program.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("--check-gallery", action="store_true", help="verify every gallery case against its golden report")
    sub = ap.add_subparsers(dest="command")

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("path", help="fan document, or gallery:NAME")
        p.add_argument("--json", action="store_true", help="print the full report as JSON")
        p.set_defaults(func=func)
        return p

    add("analyze", cmd_analyze, "fan structure, walls and intersection data")
    add("foliation-check", cmd_foliation_check, "K_F, singularities, dicriticality, fixed points")
    p = add("run-mmp", cmd_run_mmp, "run the foliated MMP and write a trace")
    p.add_argument("--strategy", choices=STRATEGIES, default="lex")
    p.add_argument("--step-cap", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", help="write the trace document here")
    p = add("oracle", cmd_oracle, "compare the discrepancy formula with the blow-up oracle")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--points", help="file with lattice points (JSON list or one per line)")
    src.add_argument("--random", type=int, metavar="N", help="sample N random points in the support")
    p.add_argument("--seed", type=int, default=0)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if args.check_gallery:
            return cmd_check_gallery(args)
        if not args.command:
            ap.print_help()
            return EXIT_INVALID
        return args.func(args)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except ValidationError as e:
        print("validation failed:", file=sys.stderr)
        for v in e.violations:
            print(f"  {v}", file=sys.stderr)
        return EXIT_INVALID
    except TheoremViolation as e:
        print(f"theorem violation: {e}", file=sys.stderr)
        for k, v in e.context.items():
            if k != "trace":
                print(f"  {k}: {v}", file=sys.stderr)
        return EXIT_THEOREM
    except StepCapExceeded as e:
        print(f"step cap exceeded: {e}", file=sys.stderr)
        return EXIT_STEP_CAP


if __name__ == "__main__":
    sys.exit(main())
