"""Region boundaries in the (R, C_I) plane and the unique equilibrium.

Closed forms cover every region except the one where all three actions
are mixed; there a nested bracketing search solves U_I = U_J = 0.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from scipy.optimize import brentq, root

from .errors import NoConvergence, OutOfRegion, WrongScenario
from .params import ModelParams, Scenario
from .steady_state import Strategy, as_strategy
from .utilities import UtilityTriple, inspect_utility, join_utility, utility_triple

UTILITY_TOL = 1e-10
GLUE_TOL = 1e-12
BOUNDARY_TOL = 1e-12
MAX_BISECTIONS = 200
SUPPORT_TOL = 1e-12


class Region(str, enum.Enum):
    ALL_INSPECT = "all_inspect"
    ALL_JOIN = "none_inspect_all_join"
    JOIN_BALK = "none_inspect_mix"
    INSPECT_JOIN = "inspect_join_mix"
    INSPECT_BALK = "inspect_balk_mix"
    INTERIOR = "interior"
    BOUNDARY = "boundary"

    @property
    def colour(self) -> str:
        return _COLOURS[self]


_COLOURS = {
    Region.ALL_INSPECT: "blue",
    Region.ALL_JOIN: "green",
    Region.JOIN_BALK: "yellow",
    Region.INSPECT_JOIN: "cyan",
    Region.INSPECT_BALK: "pink",
    Region.INTERIOR: "brown",
    Region.BOUNDARY: "boundary",
}


# --- boundary curves ---------------------------------------------------------
#
# The *_s1, *_s23, ... pieces are defined for every valid R so that gluing and
# monotonicity can be checked across scenario edges; the unsuffixed functions
# select the piece that applies at params.R.


def c_i0_s1(p: ModelParams) -> float:
    return p.rho**p.n_e * (p.c_w * p.n_e / p.mu + p.c_w / (p.mu - p.lam) - p.R)


def c_i0_s23(p: ModelParams) -> float:
    return p.n_e * p.c_w / p.mu * (1.0 - p.c_w / (p.R * p.mu)) ** p.n_e


def c_i1_s12(p: ModelParams) -> float:
    rho, n = p.rho, p.n_e
    return (1.0 - rho) * rho**n / (1.0 - rho ** (n + 1)) * (p.c_w * (n + 1) / p.mu - p.R)


def c_i1_s3(p: ModelParams) -> float:
    return (p.R * p.mu - p.c_w) / (p.mu + p.lam)


def boundary_c_i0(p: ModelParams) -> float:
    """Above this inspection cost nobody inspects."""
    return c_i0_s1(p) if p.scenario is Scenario.S1 else c_i0_s23(p)


def boundary_c_i1(p: ModelParams) -> float:
    """At or below this inspection cost everybody inspects."""
    return c_i1_s3(p) if p.scenario is Scenario.S3 else c_i1_s12(p)


def c_b0_hat_value(p: ModelParams) -> float:
    rho, n = p.rho, p.n_e
    return p.R * (1.0 - rho**n) + p.c_w * ((n + 1) * rho**n - n * rho ** (n + 1) - 1.0) / (p.mu - p.lam)


def boundary_c_b0_hat(p: ModelParams) -> float:
    """Inspection cost at which U_I(0, 1) = 0; below it nobody balks (scenario 2)."""
    if p.scenario is not Scenario.S2:
        raise WrongScenario(f"the no-balking bound is defined in scenario S2, got {p.scenario.value}")
    return c_b0_hat_value(p)


def c_j0_value(R: float, mu: float, c_w: float) -> float:
    return (R * mu - c_w) * (2.0 * c_w - R * mu) / (mu * c_w)


def boundary_c_j0_s3(p: ModelParams) -> float:
    """Up to this inspection cost the scenario-3 equilibrium has no blind joiners."""
    if p.scenario is not Scenario.S3:
        raise WrongScenario(f"C_J0 is defined in scenario S3, got {p.scenario.value}")
    return c_j0_value(p.R, p.mu, p.c_w)


@dataclass(frozen=True)
class BoundaryCurves:
    R: float
    c_i0_s1: float
    c_i0_s23: float
    c_i0: float
    c_i1_s12: float
    c_i1_s3: float
    c_i1: float
    c_b0_hat: float | None
    c_j0_s3: float | None
    c_b0: float | None = None

    def as_dict(self) -> dict:
        return {k: v for k, v in self.__dict__.items() if k != "R"}


def boundary_curves(p: ModelParams, with_c_b0: bool = False) -> BoundaryCurves:
    return BoundaryCurves(
        R=p.R,
        c_i0_s1=c_i0_s1(p),
        c_i0_s23=c_i0_s23(p),
        c_i0=boundary_c_i0(p),
        c_i1_s12=c_i1_s12(p),
        c_i1_s3=c_i1_s3(p),
        c_i1=boundary_c_i1(p),
        c_b0_hat=c_b0_hat_value(p) if p.scenario is Scenario.S2 else None,
        c_j0_s3=c_j0_value(p.R, p.mu, p.c_w) if p.scenario is Scenario.S3 else None,
        c_b0=boundary_c_b0(p) if with_c_b0 and p.scenario is Scenario.S2 else None,
    )


# --- closed-form equilibrium probabilities ------------------------------------


def positive_root(a: float, b: float, c: float) -> float:
    """Positive root of a y^2 + b y + c with a > 0, b > 0, c < 0, without cancellation."""
    if not (a > 0 and b > 0 and c < 0):
        raise ValueError(f"expected a > 0, b > 0, c < 0, got {a}, {b}, {c}")
    q = -0.5 * (b + math.sqrt(b * b - 4.0 * a * c))
    return c / q


def blind_join_prob(p: ModelParams) -> float:
    """Joining probability that makes blind joining as good as balking (P_I = 0)."""
    if p.scenario is Scenario.S1:
        raise WrongScenario("blind joiners never balk in scenario S1")
    return min(1.0, (p.R * p.mu - p.c_w) / (p.R * p.lam))


def _quadratic_coefficients(p: ModelParams) -> tuple[float, float, float]:
    rho, n = p.rho, p.n_e
    a = p.C_I * (rho ** (-n) - 1.0) / (1.0 - rho)
    b = p.C_I + p.R - p.c_w * n / p.mu
    return a, b, -p.c_w / p.mu


def pj_star_unchecked(p: ModelParams) -> float:
    y = positive_root(*_quadratic_coefficients(p))
    return (1.0 - y) / p.rho


def solve_pj_star(p: ModelParams) -> float:
    """Blind-joining probability of the no-balking equilibrium (1 - P_J*, P_J*).

    Valid while C_I1^{1,2}(R) <= C_I <= C_I0^1(R), which is exactly where the
    positive root y = 1 - P_J* rho lies in [1 - rho, 1].
    """
    lo, hi = c_i1_s12(p), c_i0_s1(p)
    slack = BOUNDARY_TOL * max(1.0, hi)
    if not (lo - slack <= p.C_I <= hi + slack):
        raise OutOfRegion(f"C_I={p.C_I} outside [{lo:.12g}, {hi:.12g}] where P_B = 0 mixing applies")
    return min(1.0, max(0.0, pj_star_unchecked(p)))


def solve_pi_star(p: ModelParams) -> float:
    """Inspection probability of the scenario-3 equilibrium (P_I*, 0).

    Only the formula's domain (P_I* in [0, 1]) is checked; whether (P_I*, 0)
    is the equilibrium also needs C_I <= C_J0^3(R), which compute_equilibrium
    enforces.
    """
    if p.scenario is not Scenario.S3:
        raise WrongScenario(f"(P_I*, 0) equilibria only occur in scenario S3, got {p.scenario.value}")
    lo, hi = c_i1_s3(p), (p.R * p.mu - p.c_w) / p.mu
    slack = BOUNDARY_TOL * max(1.0, hi)
    if not (lo - slack <= p.C_I <= hi + slack):
        raise OutOfRegion(f"C_I={p.C_I} outside [{lo:.12g}, {hi:.12g}] where P_I* is a probability")
    value = (p.R * p.mu - p.c_w - p.C_I * p.mu) / (p.C_I * p.lam)
    return min(1.0, max(0.0, value))


# --- interior (all three actions mixed) ---------------------------------------


def _inspect_root(p: ModelParams, p_j: float, max_iter: int) -> float:
    """P_I in [0, 1 - p_j] with U_I = 0; clamps when U_I keeps one sign."""
    hi = 1.0 - p_j
    if inspect_utility(p, 0.0, p_j) <= 0.0:
        return 0.0
    if inspect_utility(p, hi, p_j) >= 0.0:
        return hi
    return brentq(lambda x: inspect_utility(p, x, p_j), 0.0, hi, xtol=1e-16, rtol=1e-15, maxiter=max_iter)


def _interior_nested(p: ModelParams, max_iter: int) -> Strategy | None:
    top = blind_join_prob(p) if p.scenario is not Scenario.S1 else 1.0

    def outer(p_j):
        return join_utility(p, _inspect_root(p, p_j, max_iter), p_j)

    lo_val, hi_val = outer(0.0), outer(top)
    # one sign change is guaranteed by uniqueness; anything else means
    # the point is not interior or the structure assumption broke
    if not (lo_val > 0.0 > hi_val):
        return None
    p_j = brentq(outer, 0.0, top, xtol=1e-16, rtol=1e-15, maxiter=max_iter)
    return Strategy(_inspect_root(p, p_j, max_iter), p_j)


def _interior_fallback(p: ModelParams, start: Strategy) -> Strategy | None:
    def residual(x):
        pi, pj = min(max(x[0], 0.0), 1.0), min(max(x[1], 0.0), 1.0)
        if pi + pj > 1.0:
            pj = 1.0 - pi
        return [inspect_utility(p, pi, pj), join_utility(p, pi, pj)]

    sol = root(residual, [start.p_inspect, start.p_join], method="hybr", tol=1e-14)
    pi, pj = sol.x
    if not (0.0 <= pi <= 1.0 and 0.0 <= pj <= 1.0 and pi + pj <= 1.0):
        return None
    return Strategy(pi, pj)


def solve_interior(p: ModelParams, tol: float = UTILITY_TOL, max_iter: int = MAX_BISECTIONS) -> Strategy:
    """Equilibrium with inspectors, blind joiners and balkers all present."""
    s = _interior_nested(p, max_iter)
    if s is None or _residual(p, s) > tol:
        from .oracle import best_response_dynamics

        start = best_response_dynamics(p, Strategy(1 / 3, 1 / 3), damping=0.5)
        s = _interior_fallback(p, start)
    if s is None:
        raise NoConvergence("interior solver failed to bracket or converge")
    if _residual(p, s) > tol:
        res = (inspect_utility(p, s.p_inspect, s.p_join), join_utility(p, s.p_inspect, s.p_join))
        raise NoConvergence(f"interior residuals {res} exceed {tol}", details={"residuals": res})
    return s


def _residual(p: ModelParams, s: Strategy) -> float:
    return max(abs(inspect_utility(p, s.p_inspect, s.p_join)), abs(join_utility(p, s.p_inspect, s.p_join)))


# --- equilibrium verification and dispatch -------------------------------------


@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    utilities: UtilityTriple
    best: float
    violations: tuple[str, ...] = ()

    def __bool__(self):
        return self.ok


def verify_equilibrium(p: ModelParams, strategy, eps: float = 1e-8) -> VerificationReport:
    """Every action played with positive probability must be an eps-best response."""
    s = as_strategy(strategy)
    u = utility_triple(p, s)
    best = u.best()
    violations = []
    for name, prob, value in (
        ("inspect", s.p_inspect, u.u_inspect),
        ("join", s.p_join, u.u_join),
        ("balk", s.p_balk, u.u_balk),
    ):
        if prob > SUPPORT_TOL and value < best - eps:
            violations.append(f"{name} played with prob {prob:.3g} but utility {value:.6g} < best {best:.6g}")
    return VerificationReport(ok=not violations, utilities=u, best=best, violations=tuple(violations))


@dataclass(frozen=True)
class Equilibrium:
    region: Region
    strategy: Strategy
    utilities: UtilityTriple
    social_welfare: float
    adjacent: tuple[Region, ...] = ()
    curves: BoundaryCurves | None = field(default=None, compare=False)

    def to_dict(self) -> dict:
        out = {
            "region": self.region.value,
            "P_I": self.strategy.p_inspect,
            "P_J": self.strategy.p_join,
            "P_B": self.strategy.p_balk,
            "U_I": self.utilities.u_inspect,
            "U_J": self.utilities.u_join,
            "SW": self.social_welfare,
        }
        if self.adjacent:
            out["adjacent"] = [r.value for r in self.adjacent]
        if self.curves is not None:
            out["boundary_values"] = self.curves.as_dict()
        return out


def _near(x: float, curve: float) -> bool:
    return abs(x - curve) <= BOUNDARY_TOL * max(1.0, abs(curve))


def _welfare(region: Region, u: UtilityTriple, p: ModelParams) -> float:
    if region is Region.ALL_JOIN:
        return p.R - p.c_w / (p.mu - p.lam)
    if region in (Region.ALL_INSPECT, Region.INSPECT_JOIN):
        return u.u_inspect
    if region is Region.BOUNDARY:
        return u.best()
    return 0.0


def _classify(p: ModelParams, curves: BoundaryCurves) -> tuple[Region, Strategy, tuple[Region, ...]]:
    C_I, sc = p.C_I, p.scenario
    mixed_above_blue = Region.INSPECT_BALK if sc is Scenario.S3 else Region.INSPECT_JOIN

    if C_I <= curves.c_i1 or _near(C_I, curves.c_i1):
        adj = (Region.ALL_INSPECT, mixed_above_blue) if _near(C_I, curves.c_i1) else ()
        return Region.ALL_INSPECT, Strategy(1.0, 0.0), adj

    if C_I >= curves.c_i0 or _near(C_I, curves.c_i0):
        if sc is Scenario.S1:
            adj = (Region.ALL_JOIN, Region.INSPECT_JOIN) if _near(C_I, curves.c_i0) else ()
            return Region.ALL_JOIN, Strategy(0.0, 1.0), adj
        pt = blind_join_prob(p)
        if pt >= 1.0 - SUPPORT_TOL:
            return Region.JOIN_BALK, Strategy(0.0, 1.0), (Region.JOIN_BALK, Region.ALL_JOIN)
        if _near(C_I, curves.c_i0):
            # the curves depend on R only, so probe just below the edge
            below = _classify_between(p.replace(C_I=curves.c_i0 * (1.0 - 1e-6)), curves)[0]
            return Region.JOIN_BALK, Strategy(0.0, pt), (Region.JOIN_BALK, below)
        return Region.JOIN_BALK, Strategy(0.0, pt), ()

    return _classify_between(p, curves)


def _classify_between(p: ModelParams, curves: BoundaryCurves) -> tuple[Region, Strategy, tuple[Region, ...]]:
    """C_I1(R) < C_I < C_I0(R): somebody inspects and somebody does not."""
    sc = p.scenario
    if sc is Scenario.S1:
        pj = solve_pj_star(p)
        return Region.INSPECT_JOIN, Strategy(1.0 - pj, pj), ()
    if sc is Scenario.S2:
        pj = min(1.0, max(0.0, pj_star_unchecked(p)))
        if curves.c_b0_hat is not None and p.C_I < curves.c_b0_hat:
            return Region.INSPECT_JOIN, Strategy(1.0 - pj, pj), ()
        # beyond the sufficient bound: the no-balking candidate is the
        # equilibrium iff balking does not beat it
        u = join_utility(p, 1.0 - pj, pj)
        if abs(u) <= UTILITY_TOL:
            return Region.INSPECT_JOIN, Strategy(1.0 - pj, pj), (Region.INSPECT_JOIN, Region.INTERIOR)
        if u > 0.0:
            return Region.INSPECT_JOIN, Strategy(1.0 - pj, pj), ()
        return Region.INTERIOR, solve_interior(p), ()
    c_j0 = c_j0_value(p.R, p.mu, p.c_w)
    if p.C_I <= c_j0 or _near(p.C_I, c_j0):
        adj = (Region.INSPECT_BALK, Region.INTERIOR) if _near(p.C_I, c_j0) else ()
        return Region.INSPECT_BALK, Strategy(solve_pi_star(p), 0.0), adj
    return Region.INTERIOR, solve_interior(p), ()


def compute_equilibrium(p: ModelParams, eps: float = 1e-8) -> Equilibrium:
    curves = boundary_curves(p)
    region, strategy, adjacent = _classify(p, curves)
    if not verify_equilibrium(p, strategy, eps):
        # closed-form guess rejected: the remaining possibility is full mixing
        strategy = solve_interior(p)
        region, adjacent = Region.INTERIOR, ()
        report = verify_equilibrium(p, strategy, eps)
        if not report:
            raise NoConvergence("no candidate passed equilibrium verification", details=report.violations)
    if adjacent:
        region = Region.BOUNDARY
    u = utility_triple(p, strategy)
    return Equilibrium(
        region=region,
        strategy=strategy,
        utilities=u,
        social_welfare=_welfare(region, u, p),
        adjacent=adjacent,
        curves=curves,
    )


def boundary_c_b0(p: ModelParams) -> float:
    """Exact scenario-2 no-balking boundary, located numerically.

    It is the inspection cost at which the no-balking candidate
    (1 - P_J*, P_J*) has zero utility. Returns C_I0^{2,3}(R) when the
    candidate stays profitable all the way up (no fully mixed region).
    """
    if p.scenario is not Scenario.S2:
        raise WrongScenario(f"C_B0 is defined in scenario S2, got {p.scenario.value}")
    lo = max(c_b0_hat_value(p), c_i1_s12(p))
    hi = c_i0_s23(p)

    def g(c):
        q = p.replace(C_I=c)
        pj = min(1.0, max(0.0, pj_star_unchecked(q)))
        return join_utility(q, 1.0 - pj, pj)

    if g(hi) >= 0.0:
        return hi
    if g(lo) <= 0.0:
        return lo
    return brentq(g, lo, hi, xtol=1e-15, rtol=1e-15, maxiter=MAX_BISECTIONS)


__all__ = [
    "BoundaryCurves",
    "Equilibrium",
    "Region",
    "VerificationReport",
    "blind_join_prob",
    "boundary_c_b0",
    "boundary_c_b0_hat",
    "boundary_c_i0",
    "boundary_c_i1",
    "boundary_c_j0_s3",
    "boundary_curves",
    "c_i0_s1",
    "c_i0_s23",
    "c_i1_s12",
    "c_i1_s3",
    "compute_equilibrium",
    "positive_root",
    "solve_interior",
    "solve_pi_star",
    "solve_pj_star",
    "verify_equilibrium",
]
