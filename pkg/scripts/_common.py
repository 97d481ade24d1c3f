"""Shared bits for the reproduction scripts."""

from __future__ import annotations

import argparse
import csv
from pathlib import Path

from stratq.params import ModelParams


def base_parser(description: str) -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(description=description)
    ap.add_argument("--lambda", dest="lam", type=float, default=0.5)
    ap.add_argument("--mu", type=float, default=0.8)
    ap.add_argument("--cw", type=float, default=1.0)
    ap.add_argument("--out-dir", type=Path, default=Path("out"))
    return ap


def base_params(args, R: float = 2.0, C_I: float = 0.3) -> ModelParams:
    return ModelParams(args.lam, args.mu, args.cw, R, C_I)


def write_csv(path: Path, header: list[str], rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow(["" if v is None else (format(v, ".12g") if isinstance(v, float) else v) for v in r])
    print(f"wrote {path}")
