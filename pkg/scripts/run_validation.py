#!/usr/bin/env python3
"""Run the full validation suite and write the JSON report.

Usage:
    python scripts/run_validation.py [--profile quick|full] [--seed N] [--out PATH]

Exit code is 0 when every check passes, 2 otherwise.
"""

import argparse
import json
import sys
import time

from driftflight.validation import SuiteConfig, run_suite


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--profile", choices=("quick", "full"), default="full")
    ap.add_argument("--seed", type=int, default=20260808)
    ap.add_argument("--out", default="validation_report.json")
    args = ap.parse_args()

    t0 = time.perf_counter()
    report = run_suite(SuiteConfig(master_seed=args.seed, profile=args.profile))
    elapsed = time.perf_counter() - t0

    with open(args.out, "w") as fh:
        json.dump(report, fh, sort_keys=True, indent=2)
    n_pass = sum(c["passed"] for c in report["checks"])
    print(f"{n_pass}/{len(report['checks'])} checks passed in {elapsed:.1f}s "
          f"-> {args.out}")
    return 0 if report["passed"] else 2


if __name__ == "__main__":
    sys.exit(main())
