"""Run the property harness and save the report, e.g.

    python3 scripts/run_harness.py --suite all --trials 500 --out results/harness.txt
"""
import argparse
import sys
import time
from pathlib import Path

from qres.harness import SUITES, run_harness


def main():
    parser = argparse.ArgumentParser(description="randomised property harness")
    parser.add_argument("--suite", default="all", choices=SUITES + ("all",))
    parser.add_argument("--trials", type=int, default=500)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", default=None)
    args = parser.parse_args()

    start = time.perf_counter()
    report = run_harness(args.suite, args.trials, args.seed)
    text = report.format() + f"\nwall time {time.perf_counter() - start:.1f} s\n"
    sys.stdout.write(text)
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(text)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
