"""Independent checks of the analytic machinery.

Three routes that share no formulas with ``steady_state``/``utilities``:

* a dense linear solve of the global balance equations of the truncated
  birth-death chain,
* a seeded discrete-event simulation with tagged arrivals that score both
  actions from the queue length they observe,
* damped best-response dynamics, used to probe equilibrium uniqueness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInput, NoConvergence, TruncationTooSmall
from .params import ModelParams
from .steady_state import QueueDist, Strategy, as_strategy
from .utilities import inspect_utility, join_utility

TAIL_TOL = 1e-12


# --- truncated chain --------------------------------------------------------------


def _entry_rates(params: ModelParams, s: Strategy) -> tuple[float, float]:
    return params.lam * (s.p_inspect + s.p_join), params.lam * s.p_join


def _tail_weight(params: ModelParams, s: Strategy, N: int) -> float:
    # unnormalised weight of state N relative to state 0; at N + 1 it bounds the mass cut off
    below, above = _entry_rates(params, s)
    n = params.n_e
    r_below, r_above = below / params.mu, above / params.mu
    if N <= n:
        return r_below**N
    return r_below**n * r_above ** (N - n)


def default_truncation(params: ModelParams, strategy, tail_tol: float = TAIL_TOL) -> int:
    s = as_strategy(strategy)
    N = params.n_e
    while _tail_weight(params, s, N + 1) >= tail_tol:
        N += max(1, N // 4)
    return N


def solve_truncated_chain(params: ModelParams, strategy, N: int | None = None, tail_tol: float = TAIL_TOL) -> np.ndarray:
    """Stationary vector on states 0..N from the generator's global balance equations."""
    s = as_strategy(strategy)
    if N is None:
        N = default_truncation(params, s, tail_tol)
    if N < 1:
        raise TruncationTooSmall("need at least two states")
    cut = _tail_weight(params, s, N + 1)
    if cut >= tail_tol:
        raise TruncationTooSmall(f"N={N} cuts off states with weight {cut:.3g} >= {tail_tol}")
    below, above = _entry_rates(params, s)
    Q = np.zeros((N + 1, N + 1))
    for i in range(N):
        Q[i, i + 1] = below if i < params.n_e else above
    for i in range(1, N + 1):
        Q[i, i - 1] = params.mu
    Q[np.diag_indices_from(Q)] = -Q.sum(axis=1)
    A = Q.T.copy()
    A[-1, :] = 1.0
    rhs = np.zeros(N + 1)
    rhs[-1] = 1.0
    return np.linalg.solve(A, rhs)


def total_variation(dist: QueueDist, vector: np.ndarray) -> float:
    """TV distance between an analytic law and a vector on 0..len-1 (the cut tail counts)."""
    head = dist.pmf_array(len(vector))
    cut = dist.tail(len(vector))
    return 0.5 * (float(np.abs(head - vector).sum()) + cut)


# --- simulation ------------------------------------------------------------------


@dataclass(frozen=True)
class SimResult:
    empirical_pi: np.ndarray
    mean_queue_hat: float
    mean_queue_se: float
    u_join_hat: float
    u_join_se: float
    u_inspect_hat: float
    u_inspect_se: float
    n_samples: int
    seed: int
    horizon: int
    n_batches: int = field(default=50)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "horizon": self.horizon,
            "n_samples": self.n_samples,
            "n_batches": self.n_batches,
            "mean_queue_hat": self.mean_queue_hat,
            "mean_queue_se": self.mean_queue_se,
            "u_join_hat": self.u_join_hat,
            "u_join_se": self.u_join_se,
            "u_inspect_hat": self.u_inspect_hat,
            "u_inspect_se": self.u_inspect_se,
            "empirical_pi": [float(x) for x in self.empirical_pi],
        }


def _batch_stats(sums: np.ndarray, weights: np.ndarray) -> tuple[float, float]:
    keep = weights > 0
    means = sums[keep] / weights[keep]
    total = float(sums[keep].sum() / weights[keep].sum())
    if len(means) < 2:
        return total, math.inf
    return total, float(means.std(ddof=1) / math.sqrt(len(means)))


def simulate(
    params: ModelParams,
    strategy,
    horizon: int = 1_000_000,
    seed: int = 0,
    n_batches: int = 50,
    burn_in: int | None = None,
    probe_fraction: float = 1.0,
) -> SimResult:
    """Event-by-event simulation of the queue under a fixed population strategy.

    ``horizon`` counts events (arrivals plus service completions). A
    fraction ``probe_fraction`` of arrivals is tagged: each tag scores what
    joining blindly and inspecting would have earned from the queue length
    seen on arrival, without changing what the arrival actually does.
    Standard errors come from ``n_batches`` batch means after ``burn_in``
    discarded events (default 1% of the horizon).
    """
    s = as_strategy(strategy)
    if horizon <= 0:
        raise InvalidInput("horizon must be positive")
    if not 0.0 < probe_fraction <= 1.0:
        raise InvalidInput("probe_fraction must lie in (0, 1]")
    if burn_in is None:
        burn_in = horizon // 100
    rng = np.random.default_rng(seed)

    lam, mu, n, R, c_w, C_I = params.lam, params.mu, params.n_e, params.R, params.c_w, params.C_I
    p_i, p_enter = s.p_inspect, s.p_inspect + s.p_join
    batch_len = max(1, horizon // n_batches)
    # batch b covers events [b*batch_len, (b+1)*batch_len); the last absorbs the remainder
    sizes = [batch_len] * (n_batches - 1) + [horizon - batch_len * (n_batches - 1)]

    occupancy = [0.0] * 64
    b_time, b_area, b_probes, b_join, b_inspect = ([] for _ in range(5))
    q = 0

    def draws(m):
        return rng.standard_exponential(m).tolist(), rng.random((m, 3)).tolist()

    def run(m, measuring):
        nonlocal q, occupancy
        t_sum = area = probes = j_sum = i_sum = 0.0
        chunk = 1 << 16
        done = 0
        while done < m:
            k_max = min(chunk, m - done)
            expo, u = draws(k_max)
            for k in range(k_max):
                rate = lam + mu if q > 0 else lam
                hold = expo[k] / rate
                u_ev, u_act, u_probe = u[k]
                if measuring:
                    if q >= len(occupancy):
                        occupancy = occupancy + [0.0] * len(occupancy)
                    occupancy[q] += hold
                    t_sum += hold
                    area += hold * q
                if u_ev * rate < lam:
                    if measuring and u_probe < probe_fraction:
                        gain = R - c_w * (q + 1) / mu
                        probes += 1.0
                        j_sum += gain
                        i_sum += (gain if q < n else 0.0) - C_I
                    if u_act < p_i:
                        if q < n:
                            q += 1
                    elif u_act < p_enter:
                        q += 1
                else:
                    q -= 1
            done += k_max
        return t_sum, area, probes, j_sum, i_sum

    run(burn_in, False)
    for m in sizes:
        t_sum, area, probes, j_sum, i_sum = run(m, True)
        b_time.append(t_sum)
        b_area.append(area)
        b_probes.append(probes)
        b_join.append(j_sum)
        b_inspect.append(i_sum)
    b_time, b_area, b_probes, b_join, b_inspect = map(np.asarray, (b_time, b_area, b_probes, b_join, b_inspect))

    occ = np.asarray(occupancy)
    last = int(np.nonzero(occ)[0].max()) + 1 if occ.any() else 1
    pi_hat = occ[:last] / occ.sum()
    mq, mq_se = _batch_stats(b_area, b_time)
    uj, uj_se = _batch_stats(b_join, b_probes)
    ui, ui_se = _batch_stats(b_inspect, b_probes)
    return SimResult(
        empirical_pi=pi_hat,
        mean_queue_hat=mq,
        mean_queue_se=mq_se,
        u_join_hat=uj,
        u_join_se=uj_se,
        u_inspect_hat=ui,
        u_inspect_se=ui_se,
        n_samples=int(b_probes.sum()),
        seed=seed,
        horizon=horizon,
        n_batches=n_batches,
    )


# --- best-response dynamics --------------------------------------------------------


def best_response(params: ModelParams, p_i: float, p_j: float, tie_eps: float = 1e-11) -> tuple[float, float, float]:
    """Pure best response to (p_i, p_j); eps-tied actions share mass.

    Ties keep the current proportions among the tied actions (uniform if
    they currently carry no mass), so an equilibrium maps to itself.
    """
    u = (inspect_utility(params, p_i, p_j), join_utility(params, p_i, p_j), 0.0)
    best = max(u)
    tied = [k for k in range(3) if u[k] >= best - tie_eps]
    out = [0.0, 0.0, 0.0]
    if len(tied) == 1:
        out[tied[0]] = 1.0
        return tuple(out)
    current = (p_i, p_j, max(0.0, 1.0 - p_i - p_j))
    mass = sum(current[k] for k in tied)
    for k in tied:
        out[k] = current[k] / mass if mass > 0 else 1.0 / len(tied)
    return tuple(out)


def regret(params: ModelParams, p_i: float, p_j: float) -> float:
    """Best utility minus the population's average utility (zero exactly at equilibrium)."""
    u_i, u_j = inspect_utility(params, p_i, p_j), join_utility(params, p_i, p_j)
    return max(u_i, u_j, 0.0) - (p_i * u_i + p_j * u_j)


def support_gap(params: ModelParams, p_i: float, p_j: float, floor: float = 1e-9) -> float:
    """Largest shortfall from the best utility among actions holding more than ``floor`` mass."""
    u = (inspect_utility(params, p_i, p_j), join_utility(params, p_i, p_j), 0.0)
    mass = (p_i, p_j, 1.0 - p_i - p_j)
    best = max(u)
    return max((best - u[k] for k in range(3) if mass[k] > floor), default=0.0)


def best_response_dynamics(
    params: ModelParams,
    start,
    damping: float = 0.5,
    max_iter: int = 200_000,
    tol: float = 1e-10,
    tie_eps: float = 1e-11,
    window: int = 20,
    gap_tol: float = 3e-8,
) -> Strategy:
    """Iterate s <- (1 - d) s + d BR(s) until s is an approximate equilibrium.

    Stopping needs regret below ``tol`` and every action with non-negligible
    mass within ``gap_tol`` of the best utility. Regret alone can be tiny at
    a point where three actions tie, since it is quadratic in stray mass.

    With a fixed step the iterates chatter around a mixed equilibrium, so
    the step adapts:

    * cycles are measured between two switches of the best response into
      the same action, at least ``window`` iterates apart. A cycle whose net
      displacement is small next to its path length halves the step and
      restarts from the cycle average, dropping actions that were never a
      best response during it;
    * ``window`` iterates without a switch double the step, up to a ceiling
      that tightens with every halving so the step cannot cycle.
    """
    if not 0.0 < damping <= 1.0:
        raise InvalidInput("damping must lie in (0, 1]")
    s0 = as_strategy(start)
    x = [s0.p_inspect, s0.p_join, s0.p_balk]
    d = ceiling = damping
    trajectory = [tuple(x)]

    anchor, anchor_target = list(x), None
    travelled, acc, used, count, switches = 0.0, [0.0, 0.0, 0.0], [False, False, False], 0, 0
    previous, steady = None, 0
    for _ in range(max_iter):
        if regret(params, x[0], x[1]) < tol and support_gap(params, x[0], x[1]) < gap_tol:
            return Strategy(x[0], min(x[1], 1.0 - x[0]))
        target = best_response(params, x[0], x[1], tie_eps)
        switched = previous is not None and target != previous
        previous = target
        if switched:
            switches += 1
            steady = 0
            if anchor_target is None:
                anchor, anchor_target = list(x), target
                travelled, acc, used, count, switches = 0.0, [0.0, 0.0, 0.0], [False, False, False], 0, 0
            elif target == anchor_target and switches >= 2 and count >= window:
                net = max(abs(x[k] - anchor[k]) for k in range(3))
                if net < 0.5 * travelled:
                    d *= 0.5
                    ceiling = min(ceiling, 1.5 * d)
                    x = [acc[k] if used[k] else 0.0 for k in range(3)]
                    total = sum(x)
                    x = [v / total for v in x]
                    trajectory.append(tuple(x))
                    previous, anchor_target = None, None
                    travelled, acc, used, count, switches = 0.0, [0.0, 0.0, 0.0], [False, False, False], 0, 0
                    continue
                anchor = list(x)
                travelled, acc, used, count, switches = 0.0, [0.0, 0.0, 0.0], [False, False, False], 0, 0
            elif count >= 4 * window:
                # the anchoring action dropped out of the cycle
                anchor, anchor_target = list(x), target
                travelled, acc, used, count, switches = 0.0, [0.0, 0.0, 0.0], [False, False, False], 0, 0
        else:
            steady += 1
            if steady >= window:
                d = min(ceiling, 2.0 * d)
                steady = 0
        for k in range(3):
            used[k] = used[k] or target[k] > 0.0
        new = [(1.0 - d) * x[k] + d * target[k] for k in range(3)]
        travelled += max(abs(new[k] - x[k]) for k in range(3))
        x = new
        count += 1
        for k in range(3):
            acc[k] += x[k]
    raise NoConvergence(
        f"best-response dynamics did not settle in {max_iter} iterations",
        details={"trajectory": trajectory[-50:]},
    )
