"""Command line driver.

Every subcommand except ``selftest`` builds a small job and runs it through
the same engine as ``run --job``, so all reports share one format. Exit
codes: 0 when every expectation holds, 1 when one fails or a task errors,
2 for usage, schema or reference problems, 3 for internal errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .acceptance import CRITERIA, acceptance_report, run_criterion
from .jobs import EXIT_FAIL, EXIT_INTERNAL, EXIT_OK, EXIT_USAGE, JobError, exit_code, run_job
from .library import load_library
from .serialize import parse_group_spec, parse_nerve_spec

DEFAULT_SEED = 0
SEED_ENV = "GERBEFORGE_SEED"


class UsageError(Exception):
    pass


def parse_seed(raw: str) -> int:
    try:
        seed = int(raw, 10)
    except ValueError:
        raise UsageError(f"seed must be an unsigned 64-bit integer, got {raw!r}") from None
    if not 0 <= seed < 2 ** 64:
        raise UsageError(f"seed must be an unsigned 64-bit integer, got {raw!r}")
    return seed


def resolve_seed(flag: str | None) -> int:
    """The ``--seed`` flag, else ``$GERBEFORGE_SEED``, else the default."""
    if flag is not None:
        return parse_seed(flag)
    env = os.environ.get(SEED_ENV, "")
    return parse_seed(env) if env else DEFAULT_SEED


# ---- job builders for the single-purpose subcommands ---------------------------------------

def _check_group(spec: str) -> str:
    parse_group_spec(spec)
    return spec


def _check_nerve(spec: str) -> str:
    parse_nerve_spec(spec)
    return spec


def cohomology_job(args) -> dict:
    degrees = [args.degree] if args.degree is not None else [0, 1, 2]
    return {
        "version": 1,
        "name": "cohomology",
        "definitions": [{"name": "S", "kind": "system",
                         "value": {"nerve": _check_nerve(args.nerve), "constant": _check_group(args.group)}}],
        "tasks": [{"name": f"H{p}", "op": "cohomology", "args": {"system": "S", "degree": p}} for p in degrees],
    }


def _generator_pairs_job(args, op: str) -> dict:
    """Definitions for the generators of ``H^1`` of two constant systems and a task per pair."""
    from .cech import CoefficientSystem, cohomology

    nerve = parse_nerve_spec(_check_nerve(args.nerve))
    a, b = parse_group_spec(args.a), parse_group_spec(args.b)
    na = len(cohomology(CoefficientSystem.constant(nerve, a), 1).generators())
    nb = len(cohomology(CoefficientSystem.constant(nerve, b), 1).generators())
    defs = [
        {"name": "SA", "kind": "system", "value": {"nerve": args.nerve, "constant": args.a}},
        {"name": "SB", "kind": "system", "value": {"nerve": args.nerve, "constant": args.b}},
    ]
    defs += [{"name": f"x{i}", "kind": "cochain", "value": {"system": "SA", "degree": 1, "generator": i}}
             for i in range(na)]
    defs += [{"name": f"y{j}", "kind": "cochain", "value": {"system": "SB", "degree": 1, "generator": j}}
             for j in range(nb)]
    keys = ("a", "b") if op == "cup" else ("p", "q")
    tasks = [{"name": f"x{i}_y{j}", "op": op, "args": {keys[0]: f"x{i}", keys[1]: f"y{j}"}}
             for i in range(na) for j in range(nb)]
    if op == "lift":
        for t in tasks:
            t["expect"] = {"equals_cup": True}
    return {"version": 1, "name": op, "definitions": defs, "tasks": tasks}


def fourterm_job(args) -> dict:
    lib = load_library()
    # non-strict complexes have no global d2; they are run only when named
    names = args.name or sorted(load_library(strict_only=True))
    unknown = [n for n in names if n not in lib]
    if unknown:
        raise UsageError(f"unknown complexes {unknown}; available: {sorted(lib)}")
    tasks = []
    for n in names:
        meta = lib[n][1]
        task = {"name": n, "op": "d2", "args": {"complex": {"library": n}}}
        if meta["expect_nonzero"] is not None:
            task["expect"] = {"matches_composite": True, "nonzero": meta["expect_nonzero"]}
        tasks.append(task)
    return {"version": 1, "name": "fourterm", "tasks": tasks}


DK_BATTERY = ["Z/2", "Z/3", "Z/4", "Z/2+Z/2", "Z/5", "Z/6", "Z/7", "Z/8", "Z/2+Z/4", "Z/2+Z/2+Z/2"]


def dk_job(args) -> dict:
    groups = [g for g in DK_BATTERY if parse_group_spec(g).order() <= args.max_order]
    return {
        "version": 1,
        "name": "dk-verify",
        "tasks": [{"name": "battery", "op": "dk_verify", "args": {"groups": groups + ["Z"]},
                   "expect": {"aw_matches": True, "dold_kan": True}}],
    }


def _rational_json(p: int, text: str) -> dict:
    try:
        v = json.loads(text)
    except json.JSONDecodeError:
        raise UsageError(f"cannot read rational function {text!r}; use [c0, c1, ...] or {{\"num\": ..., \"den\": ...}}") from None
    if isinstance(v, list):
        return {"p": p, "num": v}
    if isinstance(v, dict) and "num" in v:
        return {"p": p, "num": v["num"], "den": v.get("den", [1])}
    raise UsageError(f"cannot read rational function {text!r}")


def tame_job(args) -> dict:
    p = args.p
    defs = [
        {"name": "f", "kind": "rational_function", "value": _rational_json(p, args.f)},
        {"name": "g", "kind": "rational_function", "value": _rational_json(p, args.g)},
    ]
    tasks = [{"name": "reciprocity", "op": "reciprocity", "args": {"f": "f", "g": "g"}, "expect": {"holds": True}}]
    if args.place is not None:
        place = "inf" if args.place == "inf" else json.loads(args.place)
        defs.append({"name": "v", "kind": "place", "value": {"p": p, "place": place}})
        tasks.insert(0, {"name": "symbol", "op": "tame", "args": {"place": "v", "f": "f", "g": "g"}})
    return {"version": 1, "name": "tame", "definitions": defs, "tasks": tasks}


# ---- rendering -----------------------------------------------------------------------------

def _scalar_items(d: dict):
    for k in sorted(d):
        v = d[k]
        if isinstance(v, (bool, int, str)) or v is None:
            yield k, v
        elif isinstance(v, dict) and k in ("group", "class", "target_group"):
            yield k, json.dumps(v, sort_keys=True)


def render_job_text(report: dict) -> str:
    lines = [f"job {report['job'] or '-'} (seed {report['seed']})"]
    for e in report["tasks"]:
        status = e["status"].upper()
        lines.append(f"  [{status}] {e['name']} ({e['op']})")
        if "error" in e:
            lines.append(f"      {e['error']}")
        for k, v in _scalar_items(e.get("result", {})):
            lines.append(f"      {k}: {v}")
        for m in e.get("mismatches", []):
            lines.append(f"      expected {m['key']} = {json.dumps(m['expected'])}, got {json.dumps(m['actual'])}")
    s = report["summary"]
    lines.append("summary: " + ", ".join(f"{v} {k}" for k, v in s.items()))
    return "\n".join(lines) + "\n"


def render_selftest_text(report: dict) -> str:
    lines = [f"selftest (seed {report['seed']})"]
    for c in report["criteria"]:
        mark = "PASS" if c["passed"] else "FAIL"
        extra = f" {c['seconds']:.2f}s / {c['limit_seconds']:.0f}s" if "seconds" in c else ""
        lines.append(f"  [{mark}] {c['criterion']}. {c['title']} ({c['cases']} cases){extra}")
        if "error" in c:
            lines.append(f"      {c['error']}")
    lines.append("all criteria pass" if report["passed"] else "some criteria FAIL")
    return "\n".join(lines) + "\n"


def emit(text: str, report_path: str | None):
    if report_path:
        Path(report_path).write_text(text)
    else:
        sys.stdout.write(text)


def dump_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


# ---- commands -------------------------------------------------------------------------------

def _run_and_emit(job: dict, args) -> int:
    # an explicit flag overrides the seed field of the job; the environment does not
    seed = parse_seed(args.seed) if args.seed is not None else None
    report = run_job(job, seed, args.jobs, fallback_seed=resolve_seed(None))
    emit(dump_json(report) if args.format == "json" else render_job_text(report), args.report)
    if args.report:
        sys.stdout.write(render_job_text(report) if args.format == "json" else "")
    return exit_code(report)


def cmd_run(args) -> int:
    try:
        job = json.loads(Path(args.job).read_text())
    except OSError as e:
        raise UsageError(f"cannot read job file: {e}") from None
    except json.JSONDecodeError as e:
        raise JobError(f"job file is not valid JSON: {e}") from None
    return _run_and_emit(job, args)


def _criterion(args_tuple):
    number, seed = args_tuple
    return run_criterion(number, seed)


def cmd_selftest(args) -> int:
    seed = resolve_seed(args.seed)
    numbers = sorted(CRITERIA)
    if args.only:
        try:
            numbers = sorted({int(x) for x in args.only.split(",")})
        except ValueError:
            raise UsageError(f"--only takes criterion numbers, got {args.only!r}") from None
        bad = [n for n in numbers if n not in CRITERIA]
        if bad:
            raise UsageError(f"no criteria {bad}")
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_criterion, [(n, seed) for n in numbers]))
    else:
        results = [run_criterion(n, seed) for n in numbers]
    report = acceptance_report(results, seed, timing=args.timing)
    emit(dump_json(report) if args.format == "json" else render_selftest_text(report), args.report)
    if args.report and args.format == "json":
        sys.stdout.write(render_selftest_text(report))
    return EXIT_OK if report["passed"] else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", help=f"unsigned 64-bit seed (default: ${SEED_ENV} or {DEFAULT_SEED})")
    common.add_argument("--report", help="write the report to this path")
    common.add_argument("--format", choices=["json", "text"], default="text")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for independent tasks")

    ap = argparse.ArgumentParser(prog="gerbeforge", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"gerbeforge {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", parents=[common], help="run a job file")
    p.add_argument("--job", required=True)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("cohomology", parents=[common], help="cohomology of a constant system on a nerve")
    p.add_argument("--nerve", default="circle:3", help="e.g. circle:5, simplex:3, sphere, projective_plane, torus")
    p.add_argument("--group", default="Z", help="e.g. Z/2+Z/4+Z")
    p.add_argument("--degree", type=int, choices=[0, 1, 2])
    p.set_defaults(func=lambda a: _run_and_emit(cohomology_job(a), a))

    for name, op, text in (("cup", "cup", "cup products of the generators of H^1"),
                           ("lift", "lift", "Heisenberg lifting gerbes of pairs of H^1 generators")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--nerve", default="projective_plane")
        p.add_argument("--a", default="Z/2")
        p.add_argument("--b", default="Z/2")
        p.set_defaults(func=lambda a, op=op: _run_and_emit(_generator_pairs_job(a, op), a))

    p = sub.add_parser("fourterm", parents=[common], help="iterated boundary on packaged four-term complexes")
    p.add_argument("--name", action="append", help="library complex (repeatable; default every strict one)")
    p.set_defaults(func=lambda a: _run_and_emit(fourterm_job(a), a))

    p = sub.add_parser("dk-verify", parents=[common], help="Alexander-Whitney and Dold-Kan checks on a battery")
    p.add_argument("--max-order", type=int, default=8)
    p.set_defaults(func=lambda a: _run_and_emit(dk_job(a), a))

    p = sub.add_parser("tame", parents=[common], help="tame symbols and the reciprocity product over F_p(t)")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--f", required=True, help="[c0, c1, ...] or {\"num\": [...], \"den\": [...]}")
    p.add_argument("--g", required=True)
    p.add_argument("--place", help="inf or the coefficient list of a monic irreducible")
    p.set_defaults(func=lambda a: _run_and_emit(tame_job(a), a))

    p = sub.add_parser("selftest", parents=[common], help="run the acceptance battery")
    p.add_argument("--only", help="comma separated criterion numbers")
    p.add_argument("--timing", action="store_true", help="include wall-clock times (breaks byte equality)")
    p.set_defaults(func=cmd_selftest)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        print("gerbeforge: --jobs must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, JobError) as e:
        print(f"gerbeforge: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as e:
        # bad values given on the command line (groups, nerves, polynomials)
        print(f"gerbeforge: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as e:  # pragma: no cover - reported as an internal failure
        print(f"gerbeforge: internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
