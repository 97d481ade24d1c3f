"""Region map over (R, C_I) plus the boundary curves that separate the regions.

    python scripts/region_map_data.py --nr 200 --nci 200

Writes region_map.csv (one row per grid cell) and boundary_curves.csv
(one row per R, blank where a curve is undefined for that scenario).
"""

from collections import Counter

import numpy as np
from _common import base_params, base_parser, write_csv

from stratq.equilibrium import boundary_curves
from stratq.welfare import region_map

CURVES = ["c_i0", "c_i1", "c_b0_hat", "c_b0", "c_j0_s3"]


def main() -> None:
    ap = base_parser(__doc__.splitlines()[0])
    ap.add_argument("--r-min", type=float, default=1.3)
    ap.add_argument("--r-max", type=float, default=5.0)
    ap.add_argument("--ci-max", type=float, default=1.4)
    ap.add_argument("--nr", type=int, default=200)
    ap.add_argument("--nci", type=int, default=200)
    args = ap.parse_args()
    base = base_params(args)

    rows = region_map(base, (args.r_min, args.r_max), (args.ci_max / args.nci, args.ci_max), args.nr, args.nci,
                      with_slopes=False)
    write_csv(args.out_dir / "region_map.csv", ["R", "C_I", "region", "P_I", "P_J", "P_B"],
              [[r.R, r.C_I, r.region, r.P_I, r.P_J, r.P_B] for r in rows])
    for region, n in sorted(Counter(r.region for r in rows).items()):
        print(f"  {region:24s} {n}")

    table = []
    for R in np.linspace(args.r_min, args.r_max, 2000):
        c = boundary_curves(base.replace(R=float(R)), with_c_b0=True)
        table.append([float(R)] + [getattr(c, k) for k in CURVES])
    write_csv(args.out_dir / "boundary_curves.csv", ["R"] + CURVES, table)


if __name__ == "__main__":
    main()
