"""Stationary law of the queue when the population plays (P_I, P_J).

Below the threshold both inspectors and blind joiners enter, so arrivals
are thinned to intensity rho_L = (P_I + P_J) rho; at or above it only
blind joiners enter, giving rho_U = P_J rho. The stationary distribution
is two geometric pieces glued at n_e and every moment used downstream has
a closed form, so nothing here truncates the state space.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyConditioningEvent, InvalidInput
from .params import ModelParams

SIMPLEX_TOL = 1e-12


@dataclass(frozen=True)
class Strategy:
    """Population mixture over inspect / join blindly / balk."""

    p_inspect: float
    p_join: float

    def __post_init__(self):
        pi, pj = float(self.p_inspect), float(self.p_join)
        if not (-SIMPLEX_TOL <= pi <= 1 + SIMPLEX_TOL and -SIMPLEX_TOL <= pj <= 1 + SIMPLEX_TOL):
            raise InvalidInput(f"probabilities must lie in [0, 1], got ({pi}, {pj})")
        if pi + pj > 1 + SIMPLEX_TOL:
            raise InvalidInput(f"P_I + P_J must not exceed 1, got {pi + pj}")
        # absorb rounding so downstream formulas see a proper simplex point
        pi = min(max(pi, 0.0), 1.0)
        pj = min(max(pj, 0.0), 1.0 - pi)
        object.__setattr__(self, "p_inspect", pi)
        object.__setattr__(self, "p_join", pj)

    @property
    def p_balk(self) -> float:
        b = 1.0 - self.p_inspect - self.p_join
        # round-off from P_I = 1 - P_J is not balking
        return b if b > 4 * 2.220446049250313e-16 else 0.0

    def as_tuple(self) -> tuple[float, float, float]:
        return self.p_inspect, self.p_join, self.p_balk


def as_strategy(s) -> Strategy:
    if isinstance(s, Strategy):
        return s
    p_i, p_j = s[0], s[1]
    return Strategy(p_i, p_j)


@dataclass(frozen=True)
class QueueDist:
    """pi_i = rho_L^i pi_0 for i < n_e, rho_L^n_e rho_U^(i - n_e) pi_0 beyond."""

    rho_L: float
    rho_U: float
    n_e: int

    def __post_init__(self):
        if self.n_e < 1:
            raise InvalidInput("n_e must be >= 1")
        if not (0.0 <= self.rho_U <= self.rho_L < 1.0):
            raise InvalidInput(
                f"need 0 <= rho_U <= rho_L < 1, got rho_L={self.rho_L}, rho_U={self.rho_U}"
            )

    @property
    def _below_sum(self) -> float:
        # sum_{i < n} rho_L^i
        return (1.0 - self.rho_L**self.n_e) / (1.0 - self.rho_L)

    @property
    def _above_sum(self) -> float:
        # sum_{i >= n} rho_L^n rho_U^(i - n)
        return self.rho_L**self.n_e / (1.0 - self.rho_U)

    @property
    def pi0(self) -> float:
        return 1.0 / (self._below_sum + self._above_sum)

    def pmf(self, i: int) -> float:
        if i < 0:
            return 0.0
        if i < self.n_e:
            return self.rho_L**i * self.pi0
        return self.rho_L**self.n_e * self.rho_U ** (i - self.n_e) * self.pi0

    def pmf_array(self, n_states: int) -> np.ndarray:
        """Probabilities of states 0 .. n_states - 1 (the caller picks the cut)."""
        i = np.arange(n_states)
        below = i < self.n_e
        out = np.empty(n_states)
        out[below] = self.rho_L ** i[below]
        out[~below] = self.rho_L**self.n_e * self.rho_U ** (i[~below] - self.n_e)
        return out * self.pi0

    def tail(self, x: int) -> float:
        """P(Q >= x)."""
        if x <= 0:
            return 1.0
        n, rl = self.n_e, self.rho_L
        if x <= n:
            return self.pi0 * ((rl**x - rl**n) / (1.0 - rl) + self._above_sum)
        return self.pi0 * rl**n * self.rho_U ** (x - n) / (1.0 - self.rho_U)

    def prob_below(self) -> float:
        return self.pi0 * self._below_sum

    def prob_above(self) -> float:
        return self.pi0 * self._above_sum

    def _below_first_moment(self) -> float:
        # sum_{i < n} i rho_L^i
        n, rl = self.n_e, self.rho_L
        return (rl - n * rl**n + (n - 1) * rl ** (n + 1)) / (1.0 - rl) ** 2

    def mean(self) -> float:
        above = self._above_sum * self.mean_above_unchecked()
        return self.pi0 * (self._below_first_moment() + above)

    def mean_below(self) -> float:
        """E[Q | Q < n_e]."""
        return self._below_first_moment() / self._below_sum

    def mean_above_unchecked(self) -> float:
        return self.n_e + self.rho_U / (1.0 - self.rho_U)

    def mean_above(self) -> float:
        """E[Q | Q >= n_e]; above the threshold the queue is a plain M/M/1."""
        if self.rho_L == 0.0:
            raise EmptyConditioningEvent("P(Q >= n_e) = 0 when nobody enters below the threshold")
        return self.mean_above_unchecked()


def stationary(params: ModelParams, strategy) -> QueueDist:
    s = as_strategy(strategy)
    rho_L = (s.p_inspect + s.p_join) * params.rho
    rho_U = s.p_join * params.rho
    return QueueDist(rho_L=rho_L, rho_U=min(rho_U, rho_L), n_e=params.n_e)


def prob_below_threshold(dist: QueueDist) -> float:
    return dist.prob_below()


def mean_queue(dist: QueueDist) -> float:
    return dist.mean()


def mean_queue_below(dist: QueueDist) -> float:
    return dist.mean_below()


def mean_queue_above(dist: QueueDist) -> float:
    return dist.mean_above()
