#!/usr/bin/env python3
"""Generate the four-curve capacity table (beta = 0, 1, 5, 10) as CSV.

Data-only reproduction of the assisted-capacity plot: for each noise
level the energy-constrained capacity over E in [0.5, 6], plus the
optimizer split (alpha_qq, alpha_pp).  Emits CSV to stdout or --output.
"""

import argparse
import sys

import numpy as np

sys.path.insert(0, str(__import__("pathlib").Path(__file__).resolve().parents[1] / "src"))

from qhomodyne import sweep
from qhomodyne.cli import _rows_to_csv


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--betas", default="0,1,5,10",
                        help="comma-separated noise levels (default: 0,1,5,10)")
    parser.add_argument("--e-min", type=float, default=0.5)
    parser.add_argument("--e-max", type=float, default=6.0)
    parser.add_argument("--steps", type=int, default=56)
    parser.add_argument("--output", help="CSV path (default: stdout)")
    args = parser.parse_args()

    betas = [float(tok) for tok in args.betas.split(",") if tok.strip()]
    e_values = np.linspace(args.e_min, args.e_max, args.steps)
    rows = sweep(e_values, betas)
    text = _rows_to_csv(rows)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as f:
            f.write(text)
        print(f"wrote {len(rows)} rows to {args.output}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
