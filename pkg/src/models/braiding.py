"""
Module: braiding
Purpose: Report dataclasses for Majorana moves and braiding interferometry.
"""

from dataclasses import dataclass, field


@dataclass
class MoveReport:
    """
    Outcome of moving the right edge Majorana from c_{2N} to c_{2N-2}.

    Attenuations are ratios of the final ⟨c_1 c_{2N-2}⟩ covariance entry to
    the initial ⟨c_1 c_{2N}⟩ entry.
    """

    n_sites: int
    kappa: float
    duration: float
    profile: str
    dt: float
    steps: int
    initial_correlation: float
    final_correlation: float
    predicted_attenuation: float
    measured_attenuation: float
    relative_error: float
    max_rate: float
    too_fast: bool = False
    metadata: dict = field(default_factory=dict)


@dataclass
class InterferometryReport:
    braided: bool
    n1: float
    n2: float
    var1: float
    var2: float
    source: str = "covariance"
