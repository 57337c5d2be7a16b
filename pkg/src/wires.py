"""
Module: wires
Purpose: Lindblad models of dissipative quantum wires: ideal and deformed
wires, disorder, the moving-edge ramp and two-wire systems, together with
analytic zero modes and localization lengths.
"""

import math
from typing import Callable, List, Sequence

import numpy as np

from .core import build_damping_matrices, complex_to_majorana
from .exceptions import ConfigError, InvariantUndefinedError
from .models.majorana import DampingPair, MajoranaVector
from .models.wire import RampSchedule, TwoWireSystem, WireSpec
from .utils import log_info

SQRT_HALF = 1.0 / math.sqrt(2.0)
SINGULARITY_TOL = 1e-12

OperatorSet = List[MajoranaVector]


def ideal_wire(n_sites: int, kappa: float = 1.0) -> OperatorSet:
    """
    N-1 operators j_i = ½(a_i + a_i† - a_{i+1} + a_{i+1}†).

    κ does not enter the vectors; it is validated here and applied by
    build_damping_matrices.
    """
    if n_sites < 2:
        raise ConfigError(f"A wire needs at least 2 sites, got {n_sites}.")
    if not kappa > 0:
        raise ConfigError(f"kappa must be positive, got {kappa}.")
    return [
        complex_to_majorana(n_sites, [(i, 0.5, 0.5), (i + 1, -0.5, 0.5)])
        for i in range(1, n_sites)
    ]


def _deformed_link(n_sites: int, site: int, kind: str, angle: float, phase: complex) -> MajoranaVector:
    s, c = math.sin(angle), math.cos(angle)
    if kind == "canonical":
        # (1/√2)(sinθ(a_i - a_{i+1}) + cosθ(a_i† + a_{i+1}†))
        coeffs = [(site, phase * s, c), (site + 1, -phase * s, c)]
    else:
        # (1/√2)(sinθ(a_i† - a_{i+1}) + cosθ(a_i + a_{i+1}†))
        coeffs = [(site, phase * c, s), (site + 1, -phase * s, c)]
    return complex_to_majorana(
        n_sites, [(j, SQRT_HALF * alpha, SQRT_HALF * beta) for j, alpha, beta in coeffs]
    )


def deformed_wire(spec: WireSpec) -> OperatorSet:
    """
    Canonical or non-canonical deformation with per-operator angle θ + ε_i.

    The gauge phase e^{iφ} multiplies the annihilation part of every operator.

    Args:
        spec: Wire specification with kind canonical or noncanonical.

    Returns:
        N-1 Majorana vectors.
    """
    if spec.kind == "ideal":
        raise ConfigError("deformed_wire needs kind canonical or noncanonical; use ideal_wire.")
    phase = complex(math.cos(spec.phi), math.sin(spec.phi))
    angles = spec.link_angles()
    return [
        _deformed_link(spec.n_sites, site, spec.kind, float(angles[site - 1]), phase)
        for site in range(1, spec.n_sites)
    ]


def wire_operators(spec: WireSpec) -> OperatorSet:
    if spec.kind == "ideal":
        return ideal_wire(spec.n_sites, spec.kappa)
    return deformed_wire(spec)


def wire_damping(spec: WireSpec) -> DampingPair:
    """Damping matrices of the wire described by `spec`."""
    pair = build_damping_matrices(wire_operators(spec), spec.kappa, spec.n_sites)
    log_info(
        f"wire_damping: kind={spec.kind} N={spec.n_sites} theta={spec.theta!r} "
        f"phi={spec.phi!r} disorder={spec.disorder!r} seed={spec.seed}"
    )
    return pair


def epsilon_theta(theta: float) -> float:
    """ε_θ = (sinθ - cosθ)/(sinθ + cosθ)."""
    s, c = math.sin(theta), math.cos(theta)
    if abs(s + c) < SINGULARITY_TOL:
        raise InvariantUndefinedError(f"ε_θ is singular at θ={theta!r} (sinθ + cosθ = 0).")
    return (s - c) / (s + c)


def gauge_rotation(n_sites: int, phi: float) -> np.ndarray:
    """
    Orthogonal O with c' = O c, rotating each Majorana pair by φ/2.

    With it the φ model equals e^{iφ/2} times the φ = 0 model written in c',
    so X_φ = Oᵀ X_0 O and Y_φ = Oᵀ Y_0 O.
    """
    half = 0.5 * phi
    block = np.array([[math.cos(half), math.sin(half)], [-math.sin(half), math.cos(half)]])
    return np.kron(np.eye(n_sites), block)


def analytic_zero_modes(spec: WireSpec) -> tuple[np.ndarray, np.ndarray]:
    """
    Closed-form left and right zero modes of a deformed wire.

    At φ = 0 the left mode lives on odd Majorana sites with
    v_{2j+1} = ±ε_{θ_j} v_{2j-1} (+ canonical, - non-canonical) and the right
    mode on even sites with v_{2j} = ε_{θ_j} v_{2j+2}. φ ≠ 0 is reached with
    gauge_rotation.

    Args:
        spec: Canonical or non-canonical wire.

    Returns:
        (v_L, v_R) as real unit vectors of length 2N.

    Raises:
        ConfigError: For the ideal kind (use θ = π/4 of either family).
        InvariantUndefinedError: At ε_θ singularities.
    """
    if spec.kind not in ("canonical", "noncanonical"):
        raise ConfigError("analytic_zero_modes needs kind canonical or noncanonical.")
    n_sites = spec.n_sites
    ratios = np.array([epsilon_theta(float(angle)) for angle in spec.link_angles()])
    left_ratios = ratios if spec.kind == "canonical" else -ratios

    left = np.zeros(2 * n_sites)
    right = np.zeros(2 * n_sites)
    left[0] = 1.0
    for j in range(1, n_sites):
        left[2 * j] = left_ratios[j - 1] * left[2 * j - 2]
    right[2 * n_sites - 1] = 1.0
    for j in range(n_sites - 1, 0, -1):
        right[2 * j - 1] = ratios[j - 1] * right[2 * j + 1]

    if spec.phi != 0.0:
        rotation = gauge_rotation(n_sites, spec.phi)
        left = rotation.T @ left
        right = rotation.T @ right
    return left / np.linalg.norm(left), right / np.linalg.norm(right)


def localization_length(theta: float) -> float:
    """
    l_loc/a = 1 / |log|(sinθ + cosθ)/(sinθ - cosθ)||.

    Returns 0 at θ = π/4 (perfect localization) and +inf where |ε_θ| = 1.
    """
    s, c = math.sin(theta), math.cos(theta)
    if abs(s - c) < SINGULARITY_TOL:
        return 0.0
    if abs(s + c) < SINGULARITY_TOL:
        return 0.0
    magnitude = abs(math.log(abs((s + c) / (s - c))))
    if magnitude < SINGULARITY_TOL:
        return math.inf
    return 1.0 / magnitude


def fit_localization_length(mode: np.ndarray, parity: str = "odd", floor: float = 1e-13) -> float:
    """
    Exponential fit of a zero-mode profile on the odd (left) or even (right) sublattice.

    Returns:
        Decay length in lattice units.
    """
    amplitudes = np.abs(np.asarray(mode)[0::2] if parity == "odd" else np.asarray(mode)[1::2])
    sites = np.arange(1, amplitudes.size + 1)
    keep = amplitudes > floor * amplitudes.max()
    if keep.sum() < 2:
        return 0.0
    slope, _ = np.polyfit(sites[keep], np.log(amplitudes[keep]), 1)
    if slope == 0:
        return math.inf
    return 1.0 / abs(slope)


def ramp_operator(n_sites: int, theta: float) -> MajoranaVector:
    """ã_{N-1}(θ) = ½[a_N† - a_N + cosθ(a_{N-1}† + a_{N-1}) - sinθ(a_N† + a_N)]."""
    c, s = math.cos(theta), math.sin(theta)
    return complex_to_majorana(
        n_sites,
        [(n_sites - 1, 0.5 * c, 0.5 * c), (n_sites, -0.5 * (1.0 + s), 0.5 * (1.0 - s))],
    )


def move_ramp(n_sites: int, schedule: RampSchedule, kappa: float = 1.0) -> Callable[[float], OperatorSet]:
    """
    Time-dependent operator set moving the right edge mode from c_{2N} to c_{2N-2}.

    Operators 1..N-2 stay ideal; operator N-1 is ramp_operator(N, θ(t)).
    """
    frozen = ideal_wire(n_sites, kappa)[:-1]

    def operators_at(t: float) -> OperatorSet:
        return frozen + [ramp_operator(n_sites, schedule.theta(t))]

    return operators_at


def ramp_pair(n_sites: int, schedule: RampSchedule, kappa: float = 1.0) -> Callable[[float], DampingPair]:
    operators_at = move_ramp(n_sites, schedule, kappa)
    return lambda t: build_damping_matrices(operators_at(t), kappa, n_sites)


def two_site_ramp_vector(theta: float) -> MajoranaVector:
    """Two-site ramp vector ½(0, cosθ, i, -sinθ) in the instantaneous basis."""
    return MajoranaVector(2, 0.5 * np.array([0.0, math.cos(theta), 1j, -math.sin(theta)]))


def _embed(vector: MajoranaVector, n_total: int, offset: int) -> MajoranaVector:
    entries = np.zeros(2 * n_total, dtype=complex)
    entries[2 * offset : 2 * offset + vector.entries.size] = vector.entries
    return MajoranaVector(n_total, entries)


def two_wire_system(n_first: int, n_second: int, kappa: float = 1.0) -> TwoWireSystem:
    """
    Two disjoint ideal wires over N1 + N2 sites.

    Edge labels: L1 = 1, R1 = 2N1, L2 = 2N1 + 1, R2 = 2(N1 + N2).
    """
    total = n_first + n_second
    vectors: Sequence[MajoranaVector] = [
        _embed(vector, total, 0) for vector in ideal_wire(n_first, kappa)
    ] + [_embed(vector, total, n_first) for vector in ideal_wire(n_second, kappa)]
    edges = {"L1": 1, "R1": 2 * n_first, "L2": 2 * n_first + 1, "R2": 2 * total}
    return TwoWireSystem(n_first, n_second, tuple(vectors), edges)
