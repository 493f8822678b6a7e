#!/usr/bin/env python3
"""Show how coset counts vary with the offset l for a fixed n.

The group-law count of an order-n coset depends on the offset only mod n,
and which offsets attain the extremes shifts with the residue class of n.
This prints the whole landscape, optionally verifying one offset against
the geometric engine in exact cyclotomic arithmetic.

Usage:
    python scripts/offset_landscape.py --n 12
    python scripts/offset_landscape.py --n 10 --verify-l 3
"""

import argparse
import sys

from hypersphere_lab.constructions import (
    CosetSpec,
    CurveParams,
    coset_config,
    residue_oracle_scan,
)
from hypersphere_lab.counting import spectrum


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, required=True)
    parser.add_argument("--d", type=int, default=4)
    parser.add_argument(
        "--verify-l", type=int, help="also run the exact engine at this offset"
    )
    args = parser.parse_args()

    scan = residue_oracle_scan(args.n, args.d)
    print(f"offset landscape for n={args.n}, d={args.d}")
    print("  l | ordinary | {}-point".format(args.d + 2))
    for l in range(args.n):
        marks = ""
        if l in scan["argmin_ordinary"]:
            marks += "  <- min ordinary"
        if l in scan["argmax_dplus2"]:
            marks += "  <- max {}-point".format(args.d + 2)
        print(
            " {:2d} | {:8d} | {:7d}{}".format(
                l, scan["ordinary_by_l"][l], scan["dplus2_by_l"][l], marks
            )
        )

    if args.verify_l is not None:
        l = args.verify_l
        print(f"\nverifying l={l} with the exact geometric engine ...")
        ps = coset_config(CosetSpec(CurveParams.default(args.d), args.n, l), validate=False)
        spec = spectrum(ps)
        engine = (spec.ordinary, spec.next_class)
        oracle = (scan["ordinary_by_l"][l], scan["dplus2_by_l"][l])
        print(f"engine {engine}  oracle {oracle}  match={engine == oracle}")
        return 0 if engine == oracle else 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
