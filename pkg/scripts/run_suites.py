"""Run the verifier suites at one or more grid resolutions and print a compact table.

    python3 scripts/run_suites.py                 # all suites at m=256
    python3 scripts/run_suites.py --m 128 256 512 --suite translation noncompact
    python3 scripts/run_suites.py --json out.json --threads 4

Each row shows the number of passing reports, the worst refinement delta and
the wall time.  The exit status is nonzero if any report fails.
"""

import argparse
import json
import sys
import time

from amalgam_lab.cli import SUITES, RunConfig, run_check
from amalgam_lab.funcrep import GridSpec


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--m", type=int, nargs="+", default=[256])
    ap.add_argument("--L", type=int, default=16)
    ap.add_argument("--suite", nargs="+", choices=SUITES, default=list(SUITES))
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--json", help="also dump every report to this file")
    args = ap.parse_args()

    dump = {}
    failed = False
    print(f"{'m':>5} {'suite':12} {'pass':>9} {'max delta':>10} {'seconds':>8}")
    for m in args.m:
        cfg = RunConfig(grid=GridSpec(args.L, m), seed=args.seed)
        for name in args.suite:
            t0 = time.perf_counter()
            reps = run_check([name], cfg, args.threads)[name]
            dt = time.perf_counter() - t0
            ok = sum(r.overall_pass for r in reps)
            delta = max((r.grid_refinement_delta or 0.0) for r in reps)
            failed |= ok != len(reps)
            print(f"{m:5d} {name:12} {ok:4d}/{len(reps):<4d} {delta:10.3g} {dt:8.2f}")
            dump[f"{name}@m={m}"] = [r.to_json() for r in reps]
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(dump, fh, indent=2, default=str)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
