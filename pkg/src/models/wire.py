"""
Module: wire
Purpose: Wire model specifications, ramp schedules and the two-wire layout.
"""

import math
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np
from scipy.integrate import trapezoid

from ..exceptions import ConfigError

WIRE_KINDS = ("ideal", "canonical", "noncanonical")
RAMP_PROFILES = ("linear", "smooth")
MAX_DISORDER = math.pi / 8


@dataclass(frozen=True)
class WireSpec:
    """
    One open wire of N sites driven by N-1 Lindblad operators.

    `disorder` is the range ε of the per-operator angle offsets ε_i, drawn
    uniformly from [-ε, ε] with `seed`.
    """

    n_sites: int
    kind: str = "ideal"
    theta: float = math.pi / 4
    phi: float = 0.0
    disorder: float = 0.0
    seed: int | None = None
    kappa: float = 1.0

    def __post_init__(self):
        if self.n_sites < 2:
            raise ConfigError(f"A wire needs at least 2 sites, got {self.n_sites}.")
        if self.kind not in WIRE_KINDS:
            raise ConfigError(f"Unknown wire kind '{self.kind}'. Expected one of {', '.join(WIRE_KINDS)}.")
        if not self.kappa > 0:
            raise ConfigError(f"kappa must be positive, got {self.kappa}.")
        if not 0 <= self.disorder < MAX_DISORDER:
            raise ConfigError(f"Disorder range must lie in [0, π/8), got {self.disorder}.")
        if self.disorder > 0 and self.seed is None:
            raise ConfigError("A seed is required whenever disorder > 0.")

    def angle_offsets(self) -> np.ndarray:
        """Offsets ε_i for operators i = 1..N-1 (zeros without disorder)."""
        if self.disorder == 0:
            return np.zeros(self.n_sites - 1)
        rng = np.random.default_rng(self.seed)
        return rng.uniform(-self.disorder, self.disorder, size=self.n_sites - 1)

    def link_angles(self) -> np.ndarray:
        return self.theta + self.angle_offsets()


@dataclass(frozen=True)
class RampSchedule:
    """
    Monotone θ(t) from θ(0) = 0 to θ(T) = π/2.

    Profiles: `linear` θ = (π/2) t/T and `smooth` θ = (π/2) sin²(πt/2T).
    """

    duration: float
    profile: str = "linear"
    samples: int = 2001

    def __post_init__(self):
        if not self.duration > 0:
            raise ConfigError(f"Ramp duration must be positive, got {self.duration}.")
        if self.profile not in RAMP_PROFILES:
            raise ConfigError(f"Unknown ramp profile '{self.profile}'. Expected linear or smooth.")
        if self.samples < 2:
            raise ConfigError("A ramp needs at least two samples.")

    def theta(self, t: float) -> float:
        if t <= 0:
            return 0.0
        if t >= self.duration:
            return math.pi / 2
        fraction = t / self.duration
        if self.profile == "linear":
            return 0.5 * math.pi * fraction
        return 0.5 * math.pi * math.sin(0.5 * math.pi * fraction) ** 2

    def theta_dot(self, t: float) -> float:
        if t < 0 or t > self.duration:
            return 0.0
        if self.profile == "linear":
            return 0.5 * math.pi / self.duration
        fraction = t / self.duration
        return 0.25 * math.pi**2 / self.duration * math.sin(math.pi * fraction)

    def sample_times(self) -> np.ndarray:
        return np.linspace(0.0, self.duration, self.samples)

    def max_rate(self) -> float:
        return max(abs(self.theta_dot(float(t))) for t in self.sample_times())

    def dephasing_integral(self) -> float:
        """∫₀ᵀ θ̇² dt by trapezoidal quadrature on the schedule samples."""
        times = self.sample_times()
        rates = np.array([self.theta_dot(float(t)) for t in times])
        return float(trapezoid(rates**2, times))


@dataclass(frozen=True)
class TwoWireSystem:
    """
    Two block-disjoint ideal wires with their edge Majorana indices (1-based).
    """

    n_first: int
    n_second: int
    vectors: Tuple = field(repr=False)
    edge_indices: dict = field(default_factory=dict)

    @property
    def n_sites(self) -> int:
        return self.n_first + self.n_second

    def edge_list(self) -> List[int]:
        return [self.edge_indices[label] for label in ("L1", "R1", "L2", "R2")]
