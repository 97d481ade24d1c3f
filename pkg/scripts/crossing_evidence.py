"""Welfare and P_J* on both sides of each breakpoint R = x c_w / mu.

Scans inspection costs for which both sides sit in the inspect/join mixing
region and counts how often welfare drops. Nothing here is asserted.

    python scripts/crossing_evidence.py --x 2 3 4 5 6
"""

import numpy as np
from _common import base_params, base_parser, write_csv

from stratq.errors import OutOfRegion
from stratq.welfare import threshold_crossing_report


def main() -> None:
    ap = base_parser(__doc__.splitlines()[0])
    ap.add_argument("--x", type=int, nargs="+", default=[2, 3, 4, 5, 6])
    ap.add_argument("--eps", type=float, default=1e-6)
    ap.add_argument("--n-ci", type=int, default=60)
    ap.add_argument("--ci-max", type=float, default=1.4)
    args = ap.parse_args()
    base = base_params(args)

    table, drops, tested = [], 0, 0
    for x in args.x:
        for C in np.linspace(args.ci_max / args.n_ci, args.ci_max, args.n_ci):
            try:
                (row,) = threshold_crossing_report(base.replace(C_I=float(C)), x, [args.eps])
            except OutOfRegion:
                continue
            tested += 1
            drops += row.sw_jump < 0
            table.append([x, float(C), row.pj_below, row.pj_above, row.sw_below, row.sw_above, row.sw_jump])
    write_csv(args.out_dir / "crossing_evidence.csv",
              ["x", "C_I", "P_J_below", "P_J_above", "SW_below", "SW_above", "SW_jump"], table)
    print(f"  welfare dropped in {drops} of {tested} crossings")


if __name__ == "__main__":
    main()
