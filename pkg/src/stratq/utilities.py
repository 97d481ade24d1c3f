"""Expected utilities of joining blindly, inspecting, and their difference.

``u_join``/``u_inspect`` use the closed forms written in the traffic
intensities (rho_L, rho_U, rho_delta = rho_L - rho_U). ``u_diff`` is derived
independently from the "two tagged arrivals" argument, and the
``*_from_moments`` functions evaluate the defining conditional-expectation
form, so every quantity has a second route for cross-checks.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .params import ModelParams
from .steady_state import as_strategy, stationary


@dataclass(frozen=True)
class UtilityTriple:
    u_join: float
    u_inspect: float
    u_balk: float = 0.0

    @property
    def u_diff(self) -> float:
        return self.u_join - self.u_inspect

    def best(self) -> float:
        return max(self.u_join, self.u_inspect, self.u_balk)


def _intensities(params: ModelParams, p_i: float, p_j: float) -> tuple[float, float]:
    rho_L = (p_i + p_j) * params.rho
    return rho_L, min(p_j * params.rho, rho_L)


def join_utility(params: ModelParams, p_i: float, p_j: float) -> float:
    R, mu, c_w, n = params.R, params.mu, params.c_w, params.n_e
    if p_i == 0.0:
        return R - c_w / (mu - params.lam * p_j)
    rho_L, rho_U = _intensities(params, p_i, p_j)
    d = rho_L - rho_U
    rl_n = rho_L**n
    a = 2.0 - (n + 2) * rl_n + n * rl_n * rho_L
    b = (1.0 - (n + 1) * rl_n + n * rl_n * rho_L) / (1.0 - rho_L)
    num = 1.0 - rho_L + d * a + d * d * b
    den = mu * (1.0 - rho_U) * (1.0 - rho_U - d * rl_n)
    return R - c_w * num / den


def inspect_utility(params: ModelParams, p_i: float, p_j: float) -> float:
    R, mu, c_w, n, C_I = params.R, params.mu, params.c_w, params.n_e, params.C_I
    if p_i == 0.0:
        x = params.rho * p_j
        x_n = x**n
        return R * (1.0 - x_n) - c_w * (1.0 + n * x_n * x - (n + 1) * x_n) / (mu - params.lam * p_j) - C_I
    rho_L, rho_U = _intensities(params, p_i, p_j)
    d = rho_L - rho_U
    rl_n = rho_L**n
    bracket = R * (1.0 - rl_n) - c_w * (1.0 + n * rl_n * rho_L - (n + 1) * rl_n) / (mu * (1.0 - rho_L))
    return (1.0 - rho_U) / (1.0 - rho_U - d * rl_n) * bracket - C_I


def diff_utility(params: ModelParams, p_i: float, p_j: float) -> float:
    R, mu, c_w, n = params.R, params.mu, params.c_w, params.n_e
    rho_L, rho_U = _intensities(params, p_i, p_j)
    rl_n = rho_L**n
    weight = rl_n * (1.0 - rho_L) / (1.0 - rho_U + (rho_U - rho_L) * rl_n)
    return weight * (R - c_w * (n + 1 + rho_U / (1.0 - rho_U)) / mu) + params.C_I


def u_join(params: ModelParams, strategy) -> float:
    s = as_strategy(strategy)
    return join_utility(params, s.p_inspect, s.p_join)


def u_inspect(params: ModelParams, strategy) -> float:
    s = as_strategy(strategy)
    return inspect_utility(params, s.p_inspect, s.p_join)


def u_diff(params: ModelParams, strategy) -> float:
    s = as_strategy(strategy)
    return diff_utility(params, s.p_inspect, s.p_join)


def utility_triple(params: ModelParams, strategy) -> UtilityTriple:
    s = as_strategy(strategy)
    return UtilityTriple(
        u_join=join_utility(params, s.p_inspect, s.p_join),
        u_inspect=inspect_utility(params, s.p_inspect, s.p_join),
    )


def u_join_from_moments(params: ModelParams, strategy) -> float:
    """R - c_w (E[Q] + 1) / mu."""
    q = stationary(params, strategy)
    return params.R - params.c_w * (q.mean() + 1.0) / params.mu


def u_inspect_from_moments(params: ModelParams, strategy) -> float:
    """P(Q < n_e) (R - c_w (E[Q | Q < n_e] + 1) / mu) - C_I."""
    q = stationary(params, strategy)
    gain = params.R - params.c_w * (q.mean_below() + 1.0) / params.mu
    return q.prob_below() * gain - params.C_I


def below_threshold_gain(params: ModelParams, strategy) -> float:
    """Expected net reward of an inspector who finds the queue below n_e (always > 0)."""
    q = stationary(params, strategy)
    return params.R - params.c_w * (q.mean_below() + 1.0) / params.mu


def above_threshold_gain(params: ModelParams, strategy) -> float:
    """Expected net reward of a blind joiner who meets a queue at or above n_e (negative, or zero when R mu / c_w is an integer and nobody joins blind)."""
    q = stationary(params, strategy)
    return params.R - params.c_w * (q.mean_above_unchecked() + 1.0) / params.mu


class SpecialCase(str, enum.Enum):
    JOIN_NO_INSPECTORS = "join_no_inspectors"
    INSPECT_NO_INSPECTORS = "inspect_no_inspectors"
    JOIN_ALL_INSPECT = "join_all_inspect"
    INSPECT_ALL_INSPECT = "inspect_all_inspect"


def u_special(params: ModelParams, case, p_join: float = 1.0) -> float:
    """Closed forms for the unobservable (P_I = 0) and fully observed (P_I = 1) queues.

    ``p_join`` is only used by the two no-inspector cases.
    """
    case = SpecialCase(case)
    R, mu, lam, c_w, n, C_I, rho = params.R, params.mu, params.lam, params.c_w, params.n_e, params.C_I, params.rho
    if case is SpecialCase.JOIN_NO_INSPECTORS:
        return R - c_w / (mu - lam * p_join)
    if case is SpecialCase.INSPECT_NO_INSPECTORS:
        x = rho * p_join
        return R * (1 - x**n) - c_w * (1 + n * x ** (n + 1) - (n + 1) * x**n) / (mu - lam * p_join) - C_I
    top = 1 - rho ** (n + 1)
    if case is SpecialCase.JOIN_ALL_INSPECT:
        return R - c_w * (top - (1 - rho) * (n + 1) * rho ** (n + 1)) / ((mu - lam) * top)
    return R * (1 - rho**n) / top - c_w * (1 + n * rho ** (n + 1) - (n + 1) * rho**n) / ((mu - lam) * top) - C_I
