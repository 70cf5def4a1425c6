"""Batch command-line driver.

Subcommands: ``build`` (quiver JSON), ``run`` (trajectory JSON), ``verify``
(selected checks, JSON report), ``mutclass`` (Dynkin search / script replay).
Exit codes: 0 all requested checks pass, 1 a verification failed (the report
is still emitted), 2 usage or domain error.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import tempfile
from typing import Dict, List, Optional

from . import mutclass as mc
from .quiver import DomainError, build_rsg_quiver, build_sg_quiver
from .semifield import NUMERIC, TROPICAL
from .seed_engine import scheduled_run
from .ysystem import (
    InsufficientLength,
    VerificationReport,
    check_periodicity,
    check_t_relations,
    check_y_relations,
    dilog_sums,
    quiver_period_report,
    tropical_report,
)

CHECKS = (
    "quiver-period",
    "tropical",
    "y-relations",
    "t-relations",
    "periodicity",
    "dilog",
    "coxeter",
    "all",
)

_APPLICABLE = {
    "tropical": {"quiver-period", "tropical", "periodicity", "coxeter"},
    "numeric": {"quiver-period", "y-relations", "periodicity", "dilog", "coxeter"},
    "symbolic": {"quiver-period", "t-relations", "periodicity", "coxeter"},
}


def _emit(payload: Dict, out: Optional[str]) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if out is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".ycluster-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, out)
    except BaseException:
        os.unlink(tmp)
        raise


def _family_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", choices=("sg", "rsg"), required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", default=None)


def _seed_value(args) -> int:
    env = os.environ.get("YCLUSTER_SEED")
    if env is not None:
        return int(env)
    return args.seed


def _trajectory_payload(traj) -> Dict:
    per_u: List[Dict] = []
    for u in range(traj.u_max):
        step = sorted(traj.schedule.step(u))
        values = {}
        for v in step:
            y = traj.y_at(v, u)
            values[f"({v.ip},{u})"] = y.to_json() if traj.semifield is TROPICAL else y
        per_u.append({"u": u, "mutated": [[v.i, v.ip] for v in step], "y": values})
    return {
        "family": traj.family,
        "m": traj.m,
        "n": traj.n,
        "semifield": traj.semifield.name,
        "schedule": [[[v.i, v.ip] for v in sorted(s)] for s in traj.schedule.steps],
        "permutations": traj.maps.to_json(),
        "points": per_u,
    }


def cmd_build(args) -> int:
    build = build_sg_quiver if args.family == "sg" else build_rsg_quiver
    q = build(args.m, args.n)
    _emit({"family": args.family, "m": args.m, "n": args.n, "quiver": q.to_json()}, args.out)
    return 0


def cmd_run(args) -> int:
    n = args.n
    big_n = args.m * n - args.m + n
    u_max = args.periods * 2 * big_n
    rng = random.Random(_seed_value(args))
    traj = scheduled_run(args.family, args.m, n, args.semifield, u_max, rng=rng)
    _emit(_trajectory_payload(traj), args.out)
    return 0


def cmd_verify(args) -> int:
    family, m, n = args.family, args.m, args.n
    semifield = args.semifield
    selected = set(CHECKS[:-1]) if args.check == "all" else {args.check}
    applicable = _APPLICABLE[semifield]
    skipped = sorted(selected - applicable)
    to_run = sorted(selected & applicable)
    if args.check != "all" and skipped:
        print(
            f"warning: check {args.check} is not applicable to semifield {semifield}",
            file=sys.stderr,
        )

    big_n = m * n - m + n
    maps_need_full = family == "sg" and big_n % 2 == 1
    periods = max(args.periods, 2 if ("periodicity" in to_run and maps_need_full) else 1)
    u_max = periods * 2 * big_n + 4 * (n - 1) + 2

    traj = None
    if {"y-relations", "t-relations", "periodicity", "dilog"} & set(to_run):
        rng = random.Random(_seed_value(args))
        traj = scheduled_run(family, m, n, semifield, u_max, rng=rng)

    reports: List[VerificationReport] = []
    for check in to_run:
        if check == "quiver-period":
            reports.append(quiver_period_report(family, m, n))
        elif check == "tropical":
            reports.append(tropical_report(family, m, n))
        elif check == "coxeter":
            reports.append(mc.coxeter_crosscheck(family, m, n))
        elif check == "y-relations":
            reports.append(check_y_relations(traj, tol=args.tol_rel))
        elif check == "t-relations":
            reports.append(check_t_relations(traj))
        elif check == "periodicity":
            reports.append(check_periodicity(traj, tol=args.tol_rel))
            if semifield == "tropical" and args.fpoly:
                reports.append(_fpoly_report(family, m, n))
        elif check == "dilog":
            reports.append(dilog_sums(traj, tol=args.dilog_tol)[2])

    ok = all(r.passed for r in reports)
    payload = {
        "config": {
            "family": family,
            "m": m,
            "n": n,
            "semifield": semifield,
            "check": args.check,
            "periods": periods,
            "rng_seed": _seed_value(args),
            "tol_rel": args.tol_rel,
        },
        "skipped": skipped,
        "checks": [r.to_json() for r in reports],
        "pass": ok,
    }
    _emit(payload, args.out)
    return 0 if ok else 1


def _fpoly_report(family: str, m: int, n: int) -> VerificationReport:
    """Principal-coefficient F-polynomial periodicity (exact)."""
    import time

    t0 = time.perf_counter()
    big_n = m * n - m + n
    period = 2 * big_n
    traj = scheduled_run(family, m, n, "principal", period + 4 * (n - 1) + 2)
    maps = traj.maps
    half_map = maps.omega if maps.swaps_tips() else (lambda i: i)
    labels = traj.x_labels()
    witnesses = []
    compared = 0
    for (i, u) in labels:
        if (half_map(i), u + period) in labels:
            compared += 1
            f1 = traj.f_polynomial(half_map(i), u + period)
            f0 = traj.f_polynomial(i, u)
            if f0 != f1:
                witnesses.append({"i": i, "u": u})
    return VerificationReport(
        check="f-periodicity",
        family=family,
        m=m,
        n=n,
        passed=compared > 0 and not witnesses,
        counts={"compared": compared},
        witnesses=witnesses,
        elapsed_ms=(time.perf_counter() - t0) * 1000.0,
    )


def cmd_mutclass(args) -> int:
    build = build_sg_quiver if args.family == "sg" else build_rsg_quiver
    q = build(args.m, args.n)
    if args.script:
        with open(args.script) as fh:
            script = mc.ReductionScript.from_json(json.load(fh))
        ok = script.validates_on(q)
        _emit(
            {
                "mode": "replay",
                "script": script.to_json(),
                "pass": ok,
            },
            args.out,
        )
        return 0 if ok else 1
    result = mc.find_dynkin(q, args.node_bound)
    expected = mc.expected_dynkin(args.family, args.m, args.n)
    ok = result.found == expected
    payload = {
        "mode": "search",
        "family": args.family,
        "m": args.m,
        "n": args.n,
        "expected": {"family": expected.family, "rank": expected.rank},
        "result": result.to_json(),
        "pass": ok,
    }
    if args.emit_script and result.found is not None:
        script = mc.ReductionScript.from_search(args.family, args.m, args.n, result)
        with open(args.emit_script, "w") as fh:
            json.dump(script.to_json(), fh, sort_keys=True, indent=2)
            fh.write("\n")
    _emit(payload, args.out)
    return 0 if ok else 1


def make_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="ycluster", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="emit the quiver of a family as JSON")
    _family_args(p)
    p.set_defaults(fn=cmd_build)

    p = sub.add_parser("run", help="run a schedule and emit the trajectory as JSON")
    _family_args(p)
    p.add_argument("--semifield", choices=("tropical", "numeric", "symbolic"), default="numeric")
    p.add_argument("--periods", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("verify", help="run verification checks and emit a JSON report")
    _family_args(p)
    p.add_argument("--semifield", choices=("tropical", "numeric", "symbolic"), default="numeric")
    p.add_argument("--check", choices=CHECKS, default="all")
    p.add_argument("--periods", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol-rel", type=float, default=1e-9, dest="tol_rel")
    p.add_argument("--dilog-tol", type=float, default=1e-8, dest="dilog_tol")
    p.add_argument("--fpoly", action="store_true", help="add the F-polynomial periodicity subcheck (tropical)")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("mutclass", help="Dynkin search by bounded BFS, or script replay")
    _family_args(p)
    p.add_argument("--node-bound", type=int, default=200000, dest="node_bound")
    p.add_argument("--script", default=None, help="replay a reduction script JSON file")
    p.add_argument("--emit-script", default=None, dest="emit_script")
    p.set_defaults(fn=cmd_mutclass)
    return top


def main(argv: Optional[List[str]] = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    if getattr(args, "periods", 1) < 1:
        print("error: --periods must be >= 1", file=sys.stderr)
        return 2
    try:
        return args.fn(args)
    except (DomainError, InsufficientLength, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
