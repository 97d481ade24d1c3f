"""Command-line front end.

Exit codes: 0 success, 2 invalid input (message names the constraint),
1 solver failure or a strategy that fails ``verify``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

from .equilibrium import compute_equilibrium, verify_equilibrium
from .errors import InvalidInput, StratqError
from .oracle import simulate
from .params import ModelParams
from .steady_state import Strategy
from .utilities import utility_triple
from .welfare import region_map, threshold_crossing_report, welfare_contour

GRID_HEADER = ["R", "C_I", "region", "P_I", "P_J", "P_B", "SW", "dSW_dR", "dSW_dCI"]


def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    return format(float(v), ".12g")


def _csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def _json(obj) -> str:
    def clean(o):
        if isinstance(o, float) and not math.isfinite(o):
            return None
        if isinstance(o, dict):
            return {k: clean(v) for k, v in o.items()}
        if isinstance(o, (list, tuple)):
            return [clean(v) for v in o]
        return o

    return json.dumps(clean(obj), indent=2) + "\n"


# --- argument handling ---------------------------------------------------------------


def _add_params(p: argparse.ArgumentParser, need_point: bool = True) -> None:
    g = p.add_argument_group("model parameters")
    g.add_argument("--params", help="JSON object or path to a JSON file with lambda, mu, c_w, R, C_I")
    g.add_argument("--lambda", dest="lam", type=float)
    g.add_argument("--mu", type=float)
    g.add_argument("--cw", type=float)
    g.add_argument("--reward", type=float, help="R" + ("" if need_point else " (ignored by sweeps)"))
    g.add_argument("--inspect-cost", type=float, help="C_I" + ("" if need_point else " (ignored by sweeps)"))


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", help="write here instead of stdout")


def _add_strategy(p: argparse.ArgumentParser) -> None:
    p.add_argument("--p-inspect", type=float)
    p.add_argument("--p-join", type=float)


def _read_json_arg(text: str) -> dict:
    text = text.strip()
    if not text.startswith("{"):
        text = Path(text).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"could not parse JSON: {exc}") from None


def _param_dict(args, placeholders: dict | None = None) -> dict:
    d = dict(placeholders or {})
    if args.params:
        src = _read_json_arg(args.params)
        d.update(src.get("params", src))
    flags = {"lambda": args.lam, "mu": args.mu, "c_w": args.cw, "R": args.reward, "C_I": args.inspect_cost}
    d.update({k: v for k, v in flags.items() if v is not None})
    return d


def _params(args, placeholders: dict | None = None) -> ModelParams:
    return ModelParams.from_dict(_param_dict(args, placeholders))


def _strategy(args) -> Strategy | None:
    if args.p_inspect is None and args.p_join is None:
        return None
    if args.p_inspect is None or args.p_join is None:
        raise InvalidInput("give both --p-inspect and --p-join")
    return Strategy(args.p_inspect, args.p_join)


# --- verbs ---------------------------------------------------------------------------


def _cmd_eval(args) -> tuple[str, int]:
    p = _params(args)
    s = _strategy(args)
    if s is None:
        raise InvalidInput("eval needs --p-inspect and --p-join")
    u = utility_triple(p, s)
    out = {
        "params": p.to_dict(),
        "P_I": s.p_inspect,
        "P_J": s.p_join,
        "u_join": u.u_join,
        "u_inspect": u.u_inspect,
        "u_balk": u.u_balk,
        "u_diff": u.u_diff,
    }
    if args.format == "csv":
        keys = ["P_I", "P_J", "u_join", "u_inspect", "u_balk", "u_diff"]
        return _csv(keys, [[out[k] for k in keys]]), 0
    return _json(out), 0


def _cmd_equilibrium(args) -> tuple[str, int]:
    p = _params(args)
    eq = compute_equilibrium(p)
    out = {"params": p.to_dict(), **eq.to_dict()}
    if args.format == "csv":
        keys = ["region", "P_I", "P_J", "P_B", "U_I", "U_J", "SW"]
        return _csv(keys, [[out[k] for k in keys]]), 0
    return _json(out), 0


def _grid(args, fn) -> tuple[str, int]:
    placeholders = {"R": args.r_max, "C_I": args.ci_max}
    base = _params(args, placeholders)
    for name, lo, hi in (("R", args.r_min, args.r_max), ("C_I", args.ci_min, args.ci_max)):
        if not lo <= hi:
            raise InvalidInput(f"need {name} min <= max")
    if args.r_min * base.mu <= base.c_w:
        raise InvalidInput(f"need R*mu > c_w over the whole sweep (r-min={args.r_min})")
    if args.ci_min <= 0:
        raise InvalidInput("need C_I > 0 over the whole sweep")
    rows = fn(base, (args.r_min, args.r_max), (args.ci_min, args.ci_max), args.nr, args.nci)
    if args.format == "csv":
        table = [[r.R, r.C_I, r.region, r.P_I, r.P_J, r.P_B, r.sw, r.d_sw_d_R, r.d_sw_d_CI] for r in rows]
        return _csv(GRID_HEADER, table), 0
    return _json({"params": {k: v for k, v in base.to_dict().items() if k not in ("R", "C_I")},
                  "rows": [r.to_dict() for r in rows]}), 0


def _cmd_region_map(args) -> tuple[str, int]:
    return _grid(args, region_map)


def _cmd_welfare_contour(args) -> tuple[str, int]:
    return _grid(args, welfare_contour)


def _cmd_simulate(args) -> tuple[str, int]:
    p = _params(args)
    s = _strategy(args) or compute_equilibrium(p).strategy
    res = simulate(p, s, horizon=args.horizon, seed=args.seed, n_batches=args.batches)
    out = {"params": p.to_dict(), "P_I": s.p_inspect, "P_J": s.p_join, **res.to_dict()}
    if args.format == "csv":
        keys = ["seed", "horizon", "n_samples", "u_join_hat", "u_join_se", "u_inspect_hat", "u_inspect_se",
                "mean_queue_hat", "mean_queue_se"]
        return _csv(keys, [[out[k] for k in keys]]), 0
    return _json(out), 0


def _cmd_verify(args) -> tuple[str, int]:
    if args.input:
        doc = _read_json_arg(sys.stdin.read() if args.input == "-" else args.input)
        if "params" not in doc or "P_I" not in doc or "P_J" not in doc:
            raise InvalidInput("verify input needs params, P_I and P_J (as written by `equilibrium`)")
        p = ModelParams.from_dict(doc["params"])
        s = Strategy(doc["P_I"], doc["P_J"])
    else:
        p = _params(args)
        s = _strategy(args)
        if s is None:
            raise InvalidInput("verify needs --input or --p-inspect/--p-join")
    rep = verify_equilibrium(p, s, eps=args.eps)
    out = {
        "ok": bool(rep),
        "P_I": s.p_inspect,
        "P_J": s.p_join,
        "U_I": rep.utilities.u_inspect,
        "U_J": rep.utilities.u_join,
        "violations": list(rep.violations),
    }
    return _json(out), 0 if rep else 1


def _cmd_crossing(args) -> tuple[str, int]:
    p = _params(args, {"R": (args.x + 0.5) * (args.cw or 1.0) / (args.mu or 1.0)})
    rows = threshold_crossing_report(p, args.x, args.eps)
    dicts = [r.to_dict() for r in rows]
    if args.format == "csv":
        keys = list(dicts[0]) if dicts else []
        return _csv(keys, [[d[k] for k in keys] for d in dicts]), 0
    return _json({"params": p.to_dict(), "rows": dicts}), 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="stratq", description="Strategic M/M/1 queue with paid inspection.")
    sub = ap.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("eval", help="utilities of each action under a population strategy")
    _add_params(p)
    _add_strategy(p)
    _add_output(p)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("equilibrium", help="unique equilibrium, its region and welfare")
    _add_params(p)
    _add_output(p)
    p.set_defaults(func=_cmd_equilibrium)

    for verb, func, what in (
        ("region-map", _cmd_region_map, "equilibrium regions over an (R, C_I) grid"),
        ("welfare-contour", _cmd_welfare_contour, "welfare and its slopes over an (R, C_I) grid"),
    ):
        p = sub.add_parser(verb, help=what)
        _add_params(p, need_point=False)
        p.add_argument("--r-min", type=float, default=1.3)
        p.add_argument("--r-max", type=float, default=5.0)
        p.add_argument("--ci-min", type=float, default=0.01)
        p.add_argument("--ci-max", type=float, default=1.4)
        p.add_argument("--nr", type=int, default=50)
        p.add_argument("--nci", type=int, default=50)
        _add_output(p)
        p.set_defaults(func=func)

    p = sub.add_parser("simulate", help="discrete-event simulation (equilibrium strategy by default)")
    _add_params(p)
    _add_strategy(p)
    p.add_argument("--horizon", type=int, default=1_000_000, help="number of events")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--batches", type=int, default=50)
    _add_output(p)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("verify", help="check that a strategy is an equilibrium")
    _add_params(p)
    _add_strategy(p)
    p.add_argument("--input", help="JSON written by `equilibrium` (path, inline JSON, or - for stdin)")
    p.add_argument("--eps", type=float, default=1e-8)
    _add_output(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("crossing-report", help="equilibrium just below and above R = x c_w/mu")
    _add_params(p, need_point=False)
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--eps", type=float, nargs="+", default=[1e-3, 1e-4, 1e-5, 1e-6])
    _add_output(p)
    p.set_defaults(func=_cmd_crossing)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text, code = args.func(args)
    except ValueError as exc:
        print(f"stratq: invalid input: {exc}", file=sys.stderr)
        return 2
    except StratqError as exc:
        print(f"stratq: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"stratq: {exc}", file=sys.stderr)
        return 2
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
