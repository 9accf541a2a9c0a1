"""Run the worked recurrences through the inverse algorithm and print reports with timings.

Usage: python3 scripts/run_examples.py [--json] [--budget N]
"""
from __future__ import annotations

import argparse
import sys
import time

from classicalop.exprio import parse_recurrence, print_report
from classicalop.inverse import compute_shift, run_algorithm

CASES = [
    ("Jacobi family on [-2, 2]", "(n+3)*p[n+2] - x*(n+2)*p[n+1] + (n+1)*p[n] = 0", [], "continuous"),
    ("same, before the shift", "(n+2)*p[n+2] - x*(n+1)*p[n+1] + n*p[n] = 0", [], "continuous"),
    ("unknown alpha, continuous", "p[n+2] - (x-n-1)*p[n+1] + alpha*(n+1)^2*p[n] = 0", [("alpha", "unknown")], "continuous"),
    ("unknown alpha, discrete", "p[n+2] - (x-n-1)*p[n+1] + alpha*(n+1)^2*p[n] = 0", [("alpha", "unknown")], "discrete"),
    ("alpha = 3/16, discrete", "p[n+2] - (x-n-1)*p[n+1] + 3/16*(n+1)^2*p[n] = 0", [], "discrete"),
    ("probabilists' Hermite", "p[n+2] - x*p[n+1] + (n+1)*p[n] = 0", [], "both"),
    ("pole at n = 0", "(n+1)*p[n+2] - ((n+1)*x - 1)*p[n+1] + (n+1)*p[n] = 0", [], "both"),
]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--json", action="store_true")
    ap.add_argument("--budget", type=int, default=20000)
    args = ap.parse_args(argv)
    fmt = "json" if args.json else "text"
    for title, text, params, mode in CASES:
        rec = parse_recurrence(text, params)
        start = time.perf_counter()
        reports = run_algorithm(rec, mode, budget=args.budget)
        elapsed = time.perf_counter() - start
        print(f"### {title}  [{mode}, N = {compute_shift(rec.specialized()).N}, {len(reports)} report(s), {elapsed:.2f} s]")
        print(rec.to_text())
        print(print_report(reports, fmt))
        print()
    return 0


if __name__ == "__main__":
    sys.exit(main())
