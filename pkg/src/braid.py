"""
Module: braid
Purpose: Adiabatic transport of edge Majoranas, Gaussian braiding rotations and
the two-wire interferometry protocol.
"""

import math

import numpy as np

from . import oracle
from .core import as_matrix, build_damping_matrices, occupation
from .exceptions import DimensionError, PhysicalityError
from .liouville import evolve_driven, steady_state
from .models.braiding import InterferometryReport, MoveReport
from .models.majorana import CovarianceMatrix
from .models.wire import RampSchedule
from .utils import log_info, log_warning
from .wires import ideal_wire, ramp_pair

TOO_FAST_RATIO = 0.1  # max θ̇ must stay below κ/10

# Edge covariance of (|vac⟩ - a_2†a_1†|vac⟩)/√2 over (γ_L1, γ_R1, γ_L2, γ_R2),
# equal to oracle.covariance_from_rho(oracle.interferometry_state()).
# ⟨γ_R1 γ_L2⟩ = i and ⟨γ_R2 γ_L1⟩ = -i: the state has even parity, Pf(Γ) = +1,
# so the two cross correlators cannot both equal i.
INTERFEROMETRY_COVARIANCE = np.array(
    [
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, -1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [1.0, 0.0, 0.0, 0.0],
    ]
)


def prepare_move_state(n_sites: int, kappa: float = 1.0, edge_correlation: float = 1.0) -> CovarianceMatrix:
    """Ideal-wire dark bulk with Γ(c_1, c_{2N}) = edge_correlation."""
    pair = build_damping_matrices(ideal_wire(n_sites, kappa), kappa, n_sites)
    seed = np.zeros((2 * n_sites, 2 * n_sites))
    seed[0, -1] = edge_correlation
    seed[-1, 0] = -edge_correlation
    return steady_state(pair, seed)


def adiabatic_move(
    gamma0: CovarianceMatrix | np.ndarray | None = None,
    n_sites: int = 4,
    schedule: RampSchedule | None = None,
    kappa: float = 1.0,
    dt: float = 0.05,
) -> MoveReport:
    """
    Move the right edge mode with the ramp operator and compare to the dephasing law.

    The lab-frame covariance equation is integrated with the time-dependent
    pair; the prediction is exp(-(2/κ) ∫₀ᵀ θ̇² dt).

    Args:
        gamma0: Initial covariance; defaults to prepare_move_state.
        n_sites: Wire length N ≥ 2.
        schedule: Ramp schedule; defaults to a linear ramp with T = 100.
        kappa: Dissipation rate.
        dt: Integration step.

    Returns:
        MoveReport. A schedule with max θ̇ > κ/10 is flagged `too_fast`.
    """
    schedule = schedule or RampSchedule(100.0)
    start = prepare_move_state(n_sites, kappa) if gamma0 is None else CovarianceMatrix.from_matrix(as_matrix(gamma0))
    if start.n_sites != n_sites:
        raise DimensionError(f"Initial covariance covers {start.n_sites} sites, expected {n_sites}.")
    max_rate = schedule.max_rate()
    too_fast = max_rate > TOO_FAST_RATIO * kappa
    if too_fast:
        log_warning(f"adiabatic_move: max θ̇ = {max_rate:.4g} exceeds κ/10 = {TOO_FAST_RATIO * kappa:.4g}")

    report = evolve_driven(start, ramp_pair(n_sites, schedule, kappa), schedule.duration, dt)
    initial = float(start.gamma[0, 2 * n_sites - 1])
    final = float(report.final.gamma[0, 2 * n_sites - 3])
    predicted = math.exp(-2.0 * schedule.dephasing_integral() / kappa)
    measured = final / initial if initial else 0.0
    relative_error = abs(measured - predicted) / predicted
    log_info(
        f"adiabatic_move: N={n_sites} T={schedule.duration!r} profile={schedule.profile} "
        f"predicted={predicted!r} measured={measured!r}"
    )
    return MoveReport(
        n_sites=n_sites,
        kappa=kappa,
        duration=schedule.duration,
        profile=schedule.profile,
        dt=report.dt,
        steps=report.steps,
        initial_correlation=initial,
        final_correlation=final,
        predicted_attenuation=predicted,
        measured_attenuation=measured,
        relative_error=relative_error,
        max_rate=max_rate,
        too_fast=too_fast,
    )


def rotation_matrix(size: int, i: int, j: int) -> np.ndarray:
    """R with c_i → c_j and c_j → -c_i (1-based), the Heisenberg action of exp((π/4) c_i c_j)."""
    if i == j or not (1 <= i <= size and 1 <= j <= size):
        raise DimensionError(f"Braid needs two distinct Majorana indices in 1..{size}, got ({i}, {j}).")
    rotation = np.eye(size)
    rotation[i - 1] = 0.0
    rotation[j - 1] = 0.0
    rotation[i - 1, j - 1] = 1.0
    rotation[j - 1, i - 1] = -1.0
    return rotation


def braid_rotation(gamma: CovarianceMatrix | np.ndarray, i: int, j: int) -> CovarianceMatrix:
    """
    Γ' = R Γ Rᵀ for the braid B_ij = exp((π/4) γ_i γ_j).

    Raises:
        DimensionError: If i, j are equal or out of range.
    """
    matrix = np.asarray(as_matrix(gamma), dtype=float)
    rotation = rotation_matrix(matrix.shape[0], i, j)
    return CovarianceMatrix.from_matrix(rotation @ matrix @ rotation.T)


def interferometry_covariance() -> CovarianceMatrix:
    return CovarianceMatrix(2, INTERFEROMETRY_COVARIANCE)


def _covariance_protocol(braided: bool) -> InterferometryReport:
    gamma = interferometry_covariance()
    if braided:
        gamma = braid_rotation(gamma, 1, 2)
    gamma = braid_rotation(gamma, 2, 3)
    n1, n2 = occupation(gamma, 1), occupation(gamma, 2)
    return InterferometryReport(braided, n1, n2, n1 * (1.0 - n1), n2 * (1.0 - n2), "covariance")


def _oracle_protocol(braided: bool) -> InterferometryReport:
    rho = oracle.interferometry_state()
    if braided:
        rho = oracle.conjugate(rho, oracle.braid_unitary(2, 1, 2))
    rho = oracle.conjugate(rho, oracle.braid_unitary(2, 2, 3))
    values = []
    for site in (1, 2):
        number = oracle.number_operator(2, site)
        mean = rho.expectation(number).real
        square = rho.expectation(number.matrix @ number.matrix).real
        values.append((mean, square - mean**2))
    (n1, var1), (n2, var2) = values
    return InterferometryReport(braided, n1, n2, var1, var2, "oracle")


def interferometry_demo(braided: bool, use_oracle: bool = False) -> InterferometryReport:
    """
    Two-wire interferometry: optional B(γ_L1, γ_R1), then B(γ_R1, γ_L2), then read n_1, n_2.

    Without the first braid the outcomes are random (n = ½); with it both
    fermions are found occupied.
    """
    report = _oracle_protocol(braided) if use_oracle else _covariance_protocol(braided)
    for value in (report.var1, report.var2):
        if value < -1e-12:
            raise PhysicalityError(f"Negative occupation variance {value:.3e}.")
    log_info(f"interferometry_demo: braided={braided} source={report.source} n1={report.n1!r} n2={report.n2!r}")
    return report
