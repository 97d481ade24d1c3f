"""Social welfare at equilibrium, its slopes, and (R, C_I) sweeps."""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .equilibrium import Equilibrium, Region, compute_equilibrium
from .errors import OutOfRegion
from .params import ModelParams, threshold

THRESHOLD_GUARD = 10.0  # stencil half-widths kept clear of R = x c_w / mu


@dataclass(frozen=True)
class WelfareReport:
    """Welfare at one point; slopes are None when only ``sw`` was requested.

    ``threshold_adjacent`` is set when a central stencil would have crossed a
    breakpoint R = x c_w / mu or a region boundary, in which case the slope
    is one-sided.
    """

    sw: float
    region: Region
    d_sw_d_R: float | None = None
    d_sw_d_CI: float | None = None
    threshold_adjacent: bool = False


@dataclass(frozen=True)
class GridRow:
    R: float
    C_I: float
    region: str
    P_I: float
    P_J: float
    P_B: float
    sw: float
    d_sw_d_R: float
    d_sw_d_CI: float
    threshold_adjacent: bool = False

    def to_dict(self) -> dict:
        return asdict(self)


def social_welfare(params: ModelParams) -> WelfareReport:
    eq = compute_equilibrium(params)
    return WelfareReport(sw=eq.social_welfare, region=eq.region)


def default_step(params: ModelParams) -> float:
    return 1e-6 * params.c_w / params.mu


def _near_breakpoint(params: ModelParams, h: float) -> bool:
    k = params.R * params.mu / params.c_w
    return abs(k - round(k)) < THRESHOLD_GUARD * h * params.mu / params.c_w


def _slope(center: Equilibrium, lo: Equilibrium | None, hi: Equilibrium | None, h: float) -> tuple[float, bool]:
    # central when both neighbours sit in the centre's region, else one-sided
    lo_ok = lo is not None and lo.region is center.region
    hi_ok = hi is not None and hi.region is center.region
    if lo_ok and hi_ok:
        return (hi.social_welfare - lo.social_welfare) / (2 * h), False
    if hi_ok:
        return (hi.social_welfare - center.social_welfare) / h, True
    if lo_ok:
        return (center.social_welfare - lo.social_welfare) / h, True
    if lo is not None and hi is not None:
        return (hi.social_welfare - lo.social_welfare) / (2 * h), True
    other = hi if hi is not None else lo
    sign = 1.0 if other is hi else -1.0
    return sign * (other.social_welfare - center.social_welfare) / h, True


def _neighbour(params: ModelParams, **change) -> Equilibrium | None:
    try:
        return compute_equilibrium(params.replace(**change))
    except ValueError:
        # stencil left the valid parameter domain (e.g. R mu <= c_w)
        return None


def sensitivity(params: ModelParams, h: float | None = None, center: Equilibrium | None = None) -> WelfareReport:
    """Finite-difference slopes of welfare in R and C_I."""
    if h is None:
        h = default_step(params)
    if center is None:
        center = compute_equilibrium(params)

    n = params.n_e
    r_lo = _neighbour(params, R=params.R - h)
    r_hi = _neighbour(params, R=params.R + h)
    # a stencil point on the other side of a breakpoint has a different n_e
    if r_lo is not None and threshold(params.R - h, params.mu, params.c_w) != n:
        r_lo = None
    if r_hi is not None and threshold(params.R + h, params.mu, params.c_w) != n:
        r_hi = None
    d_r, one_sided_r = _slope(center, r_lo, r_hi, h)

    c_lo = _neighbour(params, C_I=params.C_I - h) if params.C_I > h else None
    c_hi = _neighbour(params, C_I=params.C_I + h)
    d_c, one_sided_c = _slope(center, c_lo, c_hi, h)

    flagged = one_sided_r or one_sided_c or _near_breakpoint(params, h)
    return WelfareReport(
        sw=center.social_welfare,
        region=center.region,
        d_sw_d_R=d_r,
        d_sw_d_CI=d_c,
        threshold_adjacent=flagged,
    )


# --- sweeps -------------------------------------------------------------------------


def _row(params: ModelParams, with_slopes: bool) -> GridRow:
    eq = compute_equilibrium(params)
    if with_slopes:
        rep = sensitivity(params, center=eq)
        d_r, d_c, flag = rep.d_sw_d_R, rep.d_sw_d_CI, rep.threshold_adjacent
    else:
        d_r = d_c = math.nan
        flag = False
    s = eq.strategy
    return GridRow(
        R=params.R,
        C_I=params.C_I,
        region=eq.region.value,
        P_I=s.p_inspect,
        P_J=s.p_join,
        P_B=s.p_balk,
        sw=eq.social_welfare,
        d_sw_d_R=d_r,
        d_sw_d_CI=d_c,
        threshold_adjacent=flag,
    )


def _row_job(job: tuple[ModelParams, bool]) -> GridRow:
    return _row(*job)


def worker_count() -> int:
    """Worker processes for sweeps: STRATQ_THREADS if set, else 1."""
    raw = os.environ.get("STRATQ_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def grid_axes(lo_hi: tuple[float, float], count: int) -> np.ndarray:
    lo, hi = lo_hi
    if count < 1:
        raise ValueError("grid size must be >= 1")
    return np.linspace(lo, hi, count) if count > 1 else np.array([lo])


def region_map(
    base: ModelParams,
    R_range: tuple[float, float],
    CI_range: tuple[float, float],
    nR: int,
    nCI: int,
    with_slopes: bool = True,
    workers: int | None = None,
) -> list[GridRow]:
    """Equilibrium on an nR x nCI grid, rows ordered with R outer and C_I inner.

    Order is fixed whatever the worker count, so output is reproducible.
    """
    jobs = [
        (base.replace(R=float(R), C_I=float(C)), with_slopes)
        for R in grid_axes(R_range, nR)
        for C in grid_axes(CI_range, nCI)
    ]
    workers = worker_count() if workers is None else workers
    if workers <= 1 or len(jobs) < 64:
        return [_row_job(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_row_job, jobs, chunksize=max(1, len(jobs) // (8 * workers))))


def welfare_contour(
    base: ModelParams,
    R_range: tuple[float, float],
    CI_range: tuple[float, float],
    nR: int,
    nCI: int,
    workers: int | None = None,
) -> list[GridRow]:
    """Welfare surface with slopes; cells with zero welfare keep their region label."""
    return region_map(base, R_range, CI_range, nR, nCI, with_slopes=True, workers=workers)


# --- threshold crossing -----------------------------------------------------------


@dataclass(frozen=True)
class CrossingRow:
    x: int
    eps: float
    R_below: float
    R_above: float
    n_below: int
    n_above: int
    pj_below: float
    pj_above: float
    sw_below: float
    sw_above: float

    @property
    def sw_jump(self) -> float:
        return self.sw_above - self.sw_below

    @property
    def pj_decreased(self) -> bool:
        return self.pj_above < self.pj_below

    def to_dict(self) -> dict:
        out = asdict(self)
        out["sw_jump"] = self.sw_jump
        out["pj_decreased"] = self.pj_decreased
        return out


def threshold_crossing_report(base: ModelParams, x: int, eps_list) -> list[CrossingRow]:
    """Equilibrium at R = x c_w/mu (last reward with n_e = x - 1) and at R + eps (n_e = x).

    Both points must be in the inspect/join mixing region; the drop in
    welfare across the breakpoint is reported, not checked.
    """
    if int(x) != x or x < 2:
        raise OutOfRegion(f"breakpoint index must be an integer >= 2, got {x}")
    x = int(x)
    gap = base.c_w / base.mu
    R0 = x * gap
    below = compute_equilibrium(base.replace(R=R0))
    if below.region is not Region.INSPECT_JOIN:
        raise OutOfRegion(f"R={R0:.6g}, C_I={base.C_I:.6g} is in region {below.region.value}, not inspect_join_mix")
    rows = []
    for eps in eps_list:
        eps = float(eps)
        if not 0.0 < eps < gap:
            raise OutOfRegion(f"eps={eps:.6g} must lie in (0, c_w/mu={gap:.6g}) to stay on the next n_e piece")
        above_p = base.replace(R=R0 + eps)
        above = compute_equilibrium(above_p)
        if above.region is not Region.INSPECT_JOIN:
            raise OutOfRegion(f"R={R0 + eps:.6g} is in region {above.region.value}, not inspect_join_mix")
        rows.append(
            CrossingRow(
                x=x,
                eps=eps,
                R_below=R0,
                R_above=R0 + eps,
                n_below=base.replace(R=R0).n_e,
                n_above=above_p.n_e,
                pj_below=below.strategy.p_join,
                pj_above=above.strategy.p_join,
                sw_below=below.social_welfare,
                sw_above=above.social_welfare,
            )
        )
    return rows
