"""Equilibrium social welfare over (R, C_I), with finite-difference slopes.

    python scripts/welfare_surface_data.py --nr 200 --nci 200

Contour it externally; welfare is zero wherever some arrivals balk and
drops at each R = x c_w / mu inside the inspect/join mixing region.
"""

from _common import base_params, base_parser, write_csv

from stratq.welfare import welfare_contour


def main() -> None:
    ap = base_parser(__doc__.splitlines()[0])
    ap.add_argument("--r-min", type=float, default=1.3)
    ap.add_argument("--r-max", type=float, default=5.0)
    ap.add_argument("--ci-max", type=float, default=1.4)
    ap.add_argument("--nr", type=int, default=200)
    ap.add_argument("--nci", type=int, default=200)
    args = ap.parse_args()

    rows = welfare_contour(base_params(args), (args.r_min, args.r_max), (args.ci_max / args.nci, args.ci_max),
                           args.nr, args.nci)
    write_csv(
        args.out_dir / "welfare_contour.csv",
        ["R", "C_I", "region", "SW", "dSW_dR", "dSW_dCI", "flagged"],
        [[r.R, r.C_I, r.region, r.sw, r.d_sw_d_R, r.d_sw_d_CI, int(r.threshold_adjacent)] for r in rows],
    )
    print(f"  max SW {max(r.sw for r in rows):.6f}, {sum(r.threshold_adjacent for r in rows)} one-sided slopes")


if __name__ == "__main__":
    main()
