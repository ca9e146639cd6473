#!/usr/bin/env python3
"""Covering-number divergence table.

For a transform bounded away from zero on (0, inf), the image of the
geometric level family has covering number equal to the truncation size at
the fixed scale a/2, while the source covering number at 1/4 never moves.
Prints the table for a configurable function and truncation ladder.

Usage:
    python3 scripts/covering_divergence.py
    python3 scripts/covering_divergence.py --function "step_above(0.25)" --levels 4 8 16 32 64
"""

import argparse

from ultrapreserve.parser import parse_function_spec
from ultrapreserve.witnesses import witness_not_strongly_preserving


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--function", default="step_above(1)")
    ap.add_argument("--levels", type=int, nargs="+", default=[4, 8, 16, 32])
    args = ap.parse_args()

    spec = parse_function_spec(args.function)
    print(f"function: {spec.source}")
    header = f"{'N':>4}  {'eps_before':>10}  {'cov_before':>10}  {'eps_after':>10}  {'cov_after':>10}"
    print(header)
    print("-" * len(header))
    for n in args.levels:
        cert = witness_not_strongly_preserving(spec, n_levels=n)
        if cert is None:
            print(f"{n:>4}  no witness: transform preserves the topology")
            continue
        t = cert.violation
        print(
            f"{n:>4}  {t['eps_before']:>10g}  {t['covering_before']:>10}"
            f"  {t['eps_after']:>10g}  {t['covering_after']:>10}"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
