"""Model primitives, Naor threshold and reward scenario."""

from __future__ import annotations

import dataclasses
import enum
import json
import math
from dataclasses import dataclass, field

from .errors import NonPositiveInput, TrivialReward, UnstableQueue

# relative distance to an integer below which R*mu/c_w counts as that integer
INTEGER_SNAP = 1e-12
# relative tolerance for ties on the scenario edges
SCENARIO_TIE = 1e-12


class Scenario(str, enum.Enum):
    S1 = "S1"
    S2 = "S2"
    S3 = "S3"


def threshold(R: float, mu: float, c_w: float) -> int:
    """Largest integer q with q < R*mu/c_w.

    When R*mu/c_w is (numerically) an integer k the strict inequality
    gives k - 1.
    """
    k = R * mu / c_w
    nearest = round(k)
    if abs(k - nearest) <= INTEGER_SNAP * max(1.0, k):
        n = int(nearest) - 1
    else:
        n = math.floor(k)
    if n < 1:
        raise TrivialReward(f"need R*mu > c_w (got R*mu/c_w = {k:.6g})")
    return n


def scenario_edges(lam: float, mu: float, c_w: float) -> tuple[float, float]:
    """Rewards separating S3|S2 and S2|S1."""
    return c_w * (2.0 / mu - 1.0 / (mu + lam)), c_w / (mu - lam)


def _classify(R: float, lam: float, mu: float, c_w: float) -> Scenario:
    low, high = scenario_edges(lam, mu, c_w)
    if R > high * (1.0 + SCENARIO_TIE):
        return Scenario.S1
    if R > low * (1.0 + SCENARIO_TIE):
        return Scenario.S2
    return Scenario.S3


@dataclass(frozen=True)
class ModelParams:
    """Arrival rate, service rate, waiting cost, reward, inspection cost.

    Construction validates the inputs and fills in the derived fields
    ``rho``, ``n_e`` and ``scenario``.
    """

    lam: float
    mu: float
    c_w: float
    R: float
    C_I: float
    rho: float = field(init=False)
    n_e: int = field(init=False)
    scenario: Scenario = field(init=False)

    def __post_init__(self):
        names = ("lambda", "mu", "c_w", "R", "C_I")
        for name, value in zip(names, (self.lam, self.mu, self.c_w, self.R, self.C_I)):
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise NonPositiveInput(f"{name} must be a real number, got {value!r}")
            if not math.isfinite(value) or value <= 0:
                raise NonPositiveInput(f"{name} must be finite and > 0, got {value!r}")
        if self.lam >= self.mu:
            raise UnstableQueue(f"need lambda < mu (got lambda={self.lam}, mu={self.mu})")
        if self.R * self.mu <= self.c_w:
            raise TrivialReward(f"need R*mu > c_w (got R*mu={self.R * self.mu}, c_w={self.c_w})")
        for attr in ("lam", "mu", "c_w", "R", "C_I"):
            object.__setattr__(self, attr, float(getattr(self, attr)))
        object.__setattr__(self, "rho", self.lam / self.mu)
        object.__setattr__(self, "n_e", threshold(self.R, self.mu, self.c_w))
        object.__setattr__(self, "scenario", _classify(self.R, self.lam, self.mu, self.c_w))

    def replace(self, **changes) -> ModelParams:
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return {"lambda": self.lam, "mu": self.mu, "c_w": self.c_w, "R": self.R, "C_I": self.C_I}

    @classmethod
    def from_dict(cls, d: dict) -> ModelParams:
        expected = {"lambda", "mu", "c_w", "R", "C_I"}
        missing = expected - set(d)
        if missing:
            raise NonPositiveInput(f"missing parameter(s): {', '.join(sorted(missing))}")
        return cls(d["lambda"], d["mu"], d["c_w"], d["R"], d["C_I"])

    @classmethod
    def from_json(cls, text: str) -> ModelParams:
        return cls.from_dict(json.loads(text))


def validate(lam, mu, c_w, R, C_I) -> ModelParams:
    return ModelParams(lam, mu, c_w, R, C_I)


def classify_scenario(params: ModelParams) -> Scenario:
    return _classify(params.R, params.lam, params.mu, params.c_w)
