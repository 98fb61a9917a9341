#!/usr/bin/env python3
"""Run the full discretized-kernel verification suite and write its report.

Every closed form in the library (one-mode entropy reduction, posterior
moments, outcome densities, displacement invariance, the squeezed
marginal, and the Gaussian-maximizer bound on random mixtures) is checked
against direct numerics on a position-space kernel grid.  Prints a
per-case table and writes the JSON report.
"""

import argparse
import json
import sys

sys.path.insert(0, str(__import__("pathlib").Path(__file__).resolve().parents[1] / "src"))

from qhomodyne.oracle import run_verification


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=384, help="kernel grid points")
    parser.add_argument("--nodes", type=int, default=41, help="outcome quadrature nodes")
    parser.add_argument("--seed", type=int, default=20260814)
    parser.add_argument("--mixtures", type=int, default=5,
                        help="random mixtures tested against the Gaussian bound")
    parser.add_argument("--output", default="oracle_report.json")
    args = parser.parse_args()

    report = run_verification(
        n=args.n, x_nodes=args.nodes, seed=args.seed, n_mixtures=args.mixtures
    )
    with open(args.output, "w", encoding="utf-8") as f:
        json.dump(report, f, indent=2)

    print(f"{'case':<22} {'closed form':>14} {'oracle':>14} {'|error|':>10}  ok")
    for case in report["cases"]:
        print(
            f"{case['case_id']:<22} {case['closed_form']:>14.8f} "
            f"{case['oracle_value']:>14.8f} {case['abs_error']:>10.2e}  "
            f"{'yes' if case['converged'] else 'NO'}"
        )
    n_bad = sum(not c["converged"] for c in report["cases"])
    status = "all within tolerance" if report["all_within_tolerance"] else f"{n_bad} case(s) out of tolerance"
    print(f"\n{len(report['cases'])} cases, {status}; report -> {args.output}")
    return 0 if report["all_within_tolerance"] else 1


if __name__ == "__main__":
    raise SystemExit(main())
