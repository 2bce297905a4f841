"""Command line: ``liaison run | betti | link | verify-all``."""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path
from typing import List, Optional

from .io import ideal_to_text, read_ideal
from .liaison import LinkageError, link, sample_ci
from .resolution import betti_table, deficiency_profile
from .scenarios import ScenarioError, run_scenario, scenario_names


def _write_json_atomic(path: str, data: dict) -> None:
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent or Path("."), prefix=target.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(data, fh, indent=2)
            fh.write("\n")
        os.replace(tmp, target)
    except BaseException:
        os.unlink(tmp)
        raise


def _cmd_run(args) -> int:
    params = {"d": args.d, "e": args.e, "n": args.n, "s": args.s, "seed": args.seed,
              "prime": args.prime, "max_steps": args.max_steps}
    try:
        report = run_scenario(args.scenario, params)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(report.text())
    if args.json:
        _write_json_atomic(args.json, report.to_json())
    return 0 if report.passed else 1


def _cmd_betti(args) -> int:
    ideal = read_ideal(args.file)
    table = betti_table(ideal)
    print(table.display())
    out = {"ring": ideal.ring.header(), **table.to_json()}
    if ideal.dimension() == 2:
        out.update(deficiency_profile(ideal).to_json())
    if args.json:
        _write_json_atomic(args.json, out)
    else:
        print(json.dumps(out))
    return 0


def _cmd_link(args) -> int:
    ideal = read_ideal(args.file)
    degrees = [int(a) for a in args.degrees.split(",") if a.strip()]
    try:
        ci = sample_ci(ideal, degrees, args.seed)
        step = link(ideal, ci, verify_involution=True, seed=args.seed)
    except LinkageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"# CI type {list(ci.degrees)}, seed {args.seed}")
    for f in ci.forms:
        print(f"# ci: {f}")
    print("# residual")
    sys.stdout.write(ideal_to_text(step.residual_ideal))
    print("# Betti table of the residual")
    print(step.betti_after.display())
    if args.json:
        data = {"ring": ideal.ring.header(), "seed": args.seed, **step.to_json()}
        _write_json_atomic(args.json, data)
    return 0 if step.involution else 1


def _cmd_verify_all(args) -> int:
    from .acceptance import CRITERIA, run_criterion

    numbers = args.only or list(CRITERIA)
    ok = True
    for k in numbers:
        res = run_criterion(k)
        print(res.line(), flush=True)
        if args.verbose or not res.passed:
            for note in res.details:
                print(f"      {note}")
        ok &= res.passed
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="liaison", description="Exact liaison computations in four variables.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="build a named scenario and run its checks")
    run.add_argument("scenario", choices=scenario_names())
    run.add_argument("--d", type=int, help="plane curve degree")
    run.add_argument("--e", type=int, help="degree of f (thm34_curve) or entry degree (be_generic)")
    run.add_argument("--n", type=int, help="number of points (twisted_cubic_points)")
    run.add_argument("--s", type=int, help="matrix size (be_generic)")
    run.add_argument("--seed", type=int)
    run.add_argument("--prime", type=int)
    run.add_argument("--max-steps", dest="max_steps", type=int, help="bound on double links")
    run.add_argument("--json", metavar="OUT", help="write the report as JSON")
    run.set_defaults(func=_cmd_run)

    betti = sub.add_parser("betti", help="Betti table of an ideal file")
    betti.add_argument("file")
    betti.add_argument("--json", metavar="OUT")
    betti.set_defaults(func=_cmd_betti)

    lk = sub.add_parser("link", help="link an ideal file by a random complete intersection")
    lk.add_argument("file")
    lk.add_argument("--degrees", required=True, help="comma separated CI degrees, e.g. 2,3,4")
    lk.add_argument("--seed", type=int, default=1)
    lk.add_argument("--json", metavar="OUT")
    lk.set_defaults(func=_cmd_link)

    va = sub.add_parser("verify-all", help="run the acceptance criteria")
    va.add_argument("--only", type=int, nargs="*", help="criterion numbers to run")
    va.add_argument("-v", "--verbose", action="store_true")
    va.set_defaults(func=_cmd_verify_all)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
