"""
Module: oracle
Purpose: Brute-force Fock-space reference for small lattices: Jordan-Wigner
operators, Lindblad evolution of dense density matrices, covariance
extraction, Gaussian states in Fock space, the quartic number-conserving
wire and its BCS dark states.
"""

import math
from functools import lru_cache
from typing import Iterable, List, Sequence

import numpy as np
from scipy.linalg import expm, schur

from .core import as_matrix
from .exceptions import ConfigError, DimensionError, DriftError, OracleError, PhysicalityError, StepSizeError
from .models.bloch import BogoliubovFunction
from .models.fock import DensityMatrix, FixedNumberBCS, FockOperator
from .models.majorana import CovarianceMatrix, MajoranaVector, QuadraticHamiltonian
from .momentum import steady_bloch, xi_deformed
from .utils import log_error, log_info

MAX_SITES = 6
STABILITY_LIMIT = 0.1
IMAG_RESIDUE_TOL = 1e-10
SELF_PAIRED_TOL = 1e-9

SIGMA_MINUS = np.array([[0.0, 1.0], [0.0, 0.0]])
PARITY_Z = np.diag([1.0, -1.0])


def _check_sites(n_sites: int) -> None:
    if not 1 <= n_sites <= MAX_SITES:
        raise DimensionError(f"Fock-space oracle supports 1..{MAX_SITES} sites, got {n_sites}.")


@lru_cache(maxsize=None)
def _annihilator_matrices(n_sites: int) -> tuple:
    matrices = []
    for site in range(n_sites):
        factors = [PARITY_Z] * site + [SIGMA_MINUS] + [np.eye(2)] * (n_sites - site - 1)
        matrix = np.array([[1.0]])
        for factor in factors:
            matrix = np.kron(matrix, factor)
        matrices.append(matrix.astype(complex))
    return tuple(matrices)


def annihilators(n_sites: int) -> List[FockOperator]:
    """Jordan-Wigner a_j = Z ⊗ ... ⊗ Z ⊗ σ⁻ ⊗ 𝟙 ⊗ ... for j = 1..N."""
    _check_sites(n_sites)
    return [FockOperator(matrix, n_sites) for matrix in _annihilator_matrices(n_sites)]


def majoranas(n_sites: int) -> List[FockOperator]:
    """c_{2j-1} = i(a_j† - a_j), c_{2j} = a_j + a_j†, returned in Majorana order."""
    operators = []
    for a in annihilators(n_sites):
        dagger = a.matrix.conj().T
        operators.append(FockOperator(1j * (dagger - a.matrix), n_sites))
        operators.append(FockOperator(a.matrix + dagger, n_sites))
    return operators


def number_operator(n_sites: int, site: int) -> FockOperator:
    a = annihilators(n_sites)[site - 1]
    return a.dagger @ a


def particle_number(n_sites: int) -> FockOperator:
    total = sum((a.dagger @ a).matrix for a in annihilators(n_sites))
    return FockOperator(total, n_sites)


def vacuum_state(n_sites: int) -> np.ndarray:
    _check_sites(n_sites)
    state = np.zeros(2**n_sites, dtype=complex)
    state[0] = 1.0
    return state


def jump_from_vector(vector: MajoranaVector) -> FockOperator:
    """Σ_a l_a c_a as a dense matrix."""
    cs = majoranas(vector.n_sites)
    matrix = sum(coefficient * c.matrix for coefficient, c in zip(vector.entries, cs))
    return FockOperator(matrix, vector.n_sites)


def hamiltonian_from_quadratic(hamiltonian: QuadraticHamiltonian) -> FockOperator:
    """𝓗 = (i/4) Σ_ab h_ab c_a c_b."""
    n_sites = hamiltonian.n_sites
    cs = [c.matrix for c in majoranas(n_sites)]
    matrix = np.zeros((2**n_sites, 2**n_sites), dtype=complex)
    for a, row in enumerate(hamiltonian.h):
        for b, value in enumerate(row):
            if value:
                matrix += 0.25j * value * cs[a] @ cs[b]
    return FockOperator(0.5 * (matrix + matrix.conj().T), n_sites)


def _lindblad_rhs(
    hamiltonian: np.ndarray | None,
    jumps: Sequence[np.ndarray],
    kappa: float,
):
    daggers = [jump.conj().T for jump in jumps]
    decay = sum(dagger @ jump for dagger, jump in zip(daggers, jumps)) if jumps else None

    def rhs(rho: np.ndarray) -> np.ndarray:
        value = np.zeros_like(rho)
        if hamiltonian is not None:
            value += -1j * (hamiltonian @ rho - rho @ hamiltonian)
        if jumps:
            for jump, dagger in zip(jumps, daggers):
                value += kappa * (jump @ rho @ dagger)
            value -= 0.5 * kappa * (decay @ rho + rho @ decay)
        return value

    return rhs


def _guarded(rho: np.ndarray, n_sites: int, t: float) -> DensityMatrix:
    try:
        return DensityMatrix(0.5 * (rho + rho.conj().T), n_sites)
    except PhysicalityError as exc:
        message = f"Fock evolution drifted at t={t:.6g}: {exc}"
        log_error(message)
        raise DriftError(message) from exc


def fock_lindblad_trajectory(
    jumps: Iterable[FockOperator],
    hamiltonian: FockOperator | None,
    rho0: DensityMatrix,
    total_time: float,
    dt: float,
    kappa: float = 1.0,
    sample_times: Sequence[float] | None = None,
) -> tuple[List[float], List[DensityMatrix]]:
    """
    RK4 on ρ̇ = -i[H, ρ] + κ Σ (jρj† - ½{j†j, ρ}).

    Args:
        jumps: Jump operators j.
        hamiltonian: Optional Hamiltonian.
        rho0: Initial density matrix.
        total_time: Duration T.
        dt: Requested step; shrunk to T / ceil(T / dt).
        kappa: Dissipation rate.
        sample_times: Extra times at which ρ is stored (rounded to the step grid).

    Returns:
        (times, states), always including t = 0 and t = T.

    Raises:
        DimensionError: For more than six sites or mismatched operators.
        StepSizeError: If dt · (‖H‖ + κ Σ‖j†j‖) ≥ 0.1.
        DriftError: If trace, hermiticity or positivity drift beyond tolerance.
    """
    n_sites = rho0.n_sites
    _check_sites(n_sites)
    jump_list = [jump.matrix for jump in jumps]
    for jump in jump_list:
        if jump.shape != rho0.matrix.shape:
            raise DimensionError("Jump operator and density matrix sizes differ.")
    h = hamiltonian.matrix if hamiltonian is not None else None
    rate = sum(kappa * np.linalg.norm(jump.conj().T @ jump, 2) for jump in jump_list)
    if h is not None:
        rate += np.linalg.norm(h, 2)
    if not dt > 0 or dt * rate >= STABILITY_LIMIT:
        message = f"Step size guard: dt·max(rate) = {dt * rate:.4g} must stay below {STABILITY_LIMIT}."
        log_error(message)
        raise StepSizeError(message)

    steps = int(math.ceil(total_time / dt - 1e-12)) if total_time > 0 else 0
    step = total_time / steps if steps else dt
    wanted = {int(round(t / step)) for t in (sample_times or []) if 0 < t < total_time}
    rhs = _lindblad_rhs(h, jump_list, kappa)

    rho = rho0.matrix.copy()
    times, states = [0.0], [rho0]
    for index in range(1, steps + 1):
        k1 = rhs(rho)
        k2 = rhs(rho + 0.5 * step * k1)
        k3 = rhs(rho + 0.5 * step * k2)
        k4 = rhs(rho + step * k3)
        rho = rho + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if index in wanted or index == steps:
            times.append(index * step)
            states.append(_guarded(rho, n_sites, index * step))
    log_info(f"fock_lindblad_evolve: N={n_sites} jumps={len(jump_list)} T={total_time!r} steps={steps}")
    return times, states


def fock_lindblad_evolve(
    jumps: Iterable[FockOperator],
    hamiltonian: FockOperator | None,
    rho0: DensityMatrix,
    total_time: float,
    dt: float,
    kappa: float = 1.0,
) -> DensityMatrix:
    _times, states = fock_lindblad_trajectory(jumps, hamiltonian, rho0, total_time, dt, kappa)
    return states[-1]


def covariance_from_rho(rho: DensityMatrix) -> CovarianceMatrix:
    """
    Γ_ab = (i/2)⟨[c_a, c_b]⟩.

    Raises:
        OracleError: If Γ has an imaginary residue above 1e-10.
    """
    cs = [c.matrix for c in majoranas(rho.n_sites)]
    size = len(cs)
    moments = np.zeros((size, size), dtype=complex)
    for a in range(size):
        weighted = rho.matrix @ cs[a]
        for b in range(size):
            moments[a, b] = np.trace(weighted @ cs[b])
    gamma = 0.5j * (moments - moments.T)
    residue = float(np.max(np.abs(gamma.imag)))
    if residue > IMAG_RESIDUE_TOL:
        message = f"Covariance has imaginary residue {residue:.3e}; operator conventions disagree."
        log_error(message)
        raise OracleError(message)
    return CovarianceMatrix.from_matrix(gamma.real)


def gaussian_density_matrix(gamma: CovarianceMatrix | np.ndarray) -> DensityMatrix:
    """
    Gaussian ρ with covariance Γ.

    With the real Schur form Γ = Z T Zᵀ and c'_m = Σ_a Z_am c_a,
    ρ = 2^{-N} Π_b (𝟙 + ν_b i c'_{2b-1} c'_{2b}), ν_b = T_{2b-1,2b}.
    """
    matrix = np.asarray(as_matrix(gamma), dtype=float)
    n_sites = matrix.shape[0] // 2
    cs = majoranas(n_sites)
    blocks, rotation = schur(matrix, output="real")
    rotated = [sum(rotation[a, m] * cs[a].matrix for a in range(2 * n_sites)) for m in range(2 * n_sites)]

    rho = np.eye(2**n_sites, dtype=complex)
    index = 0
    while index < 2 * n_sites:
        if index + 1 < 2 * n_sites and abs(blocks[index + 1, index]) > 1e-14:
            nu = blocks[index, index + 1]
            rho = rho @ (np.eye(2**n_sites) + 1j * nu * rotated[index] @ rotated[index + 1])
            index += 2
        else:
            index += 1
    rho /= 2**n_sites
    return DensityMatrix(0.5 * (rho + rho.conj().T), n_sites)


def braid_unitary(n_sites: int, i: int, j: int) -> FockOperator:
    """B_ij = exp((π/4) c_i c_j) for 1-based Majorana indices i ≠ j."""
    cs = majoranas(n_sites)
    if i == j or not (1 <= i <= 2 * n_sites and 1 <= j <= 2 * n_sites):
        raise DimensionError(f"Braid needs two distinct Majorana indices in 1..{2 * n_sites}, got ({i}, {j}).")
    generator = 0.25 * np.pi * cs[i - 1].matrix @ cs[j - 1].matrix
    return FockOperator(expm(generator), n_sites)


def conjugate(rho: DensityMatrix, unitary: FockOperator) -> DensityMatrix:
    matrix = unitary.matrix @ rho.matrix @ unitary.matrix.conj().T
    return DensityMatrix(0.5 * (matrix + matrix.conj().T), rho.n_sites)


def interferometry_state() -> DensityMatrix:
    """|Ψ⟩ = (|vac⟩ - a_2†a_1†|vac⟩)/√2 on the four edge Majoranas (γ_L1, γ_R1, γ_L2, γ_R2)."""
    a1, a2 = annihilators(2)
    vacuum = vacuum_state(2)
    paired = a2.dagger.matrix @ a1.dagger.matrix @ vacuum
    return DensityMatrix.from_state((vacuum - paired) / math.sqrt(2.0), 2)


def fidelity(rho: DensityMatrix, state: np.ndarray) -> float:
    """⟨ψ|ρ|ψ⟩ for a normalized ψ."""
    vector = np.asarray(state, dtype=complex)
    vector = vector / np.linalg.norm(vector)
    return float(np.real(vector.conj() @ rho.matrix @ vector))


def quartic_wire_ops(n_sites: int, periodic: bool = False) -> List[FockOperator]:
    """
    J_i = C_i† A_i with C_i† = ½(a_i† + a_{i+1}†) and A_i = ½(a_i - a_{i+1}).

    Open chains give N-1 operators, rings (N ≥ 3) give N.
    """
    a = annihilators(n_sites)
    if periodic and n_sites < 3:
        raise DimensionError("A ring needs at least 3 sites.")
    links = range(n_sites if periodic else n_sites - 1)
    ops = []
    for i in links:
        left, right = a[i].matrix, a[(i + 1) % n_sites].matrix
        creation = 0.5 * (left.conj().T + right.conj().T)
        annihilation = 0.5 * (left - right)
        ops.append(FockOperator(creation @ annihilation, n_sites))
    return ops


def ring_ideal_ops(n_sites: int) -> List[FockOperator]:
    """Ideal quadratic operators j_i = ½(a_i + a_i† - a_{i+1} + a_{i+1}†) on a ring."""
    a = annihilators(n_sites)
    if n_sites < 3:
        raise DimensionError("A ring needs at least 3 sites.")
    ops = []
    for i in range(n_sites):
        left, right = a[i].matrix, a[(i + 1) % n_sites].matrix
        ops.append(FockOperator(0.5 * (left + left.conj().T - right + right.conj().T), n_sites))
    return ops


def ring_momenta(n_sites: int) -> np.ndarray:
    """k_m = 2πm/N folded into (-π, π]."""
    k = 2.0 * np.pi * np.arange(n_sites) / n_sites
    return np.where(k > np.pi + 1e-12, k - 2.0 * np.pi, k)


def momentum_annihilator(n_sites: int, k: float) -> FockOperator:
    """a_k = N^{-1/2} Σ_x e^{-ikx} a_x, x = 0..N-1."""
    a = annihilators(n_sites)
    matrix = sum(np.exp(-1j * k * x) * a[x].matrix for x in range(n_sites)) / math.sqrt(n_sites)
    return FockOperator(matrix, n_sites)


def ring_xi(kind: str, theta: float, phi: float, n_sites: int, epsilon: float = 0.0) -> BogoliubovFunction:
    """Bogoliubov function on a Brillouin grid that contains every ring momentum of N sites."""
    size = 2 * n_sites
    while size < 8:
        size += 2 * n_sites
    return xi_deformed(kind, theta, phi, size, epsilon)


def _grid_index(xi: BogoliubovFunction, k: float) -> int:
    index = int(round((k + np.pi) * xi.size / (2.0 * np.pi))) % xi.size
    if abs(np.angle(np.exp(1j * (xi.grid[index] - k)))) > 1e-9:
        raise ConfigError(f"Momentum {k:.6g} is not on the Bogoliubov grid of size {xi.size}.")
    return index


def _mode_data(xi: BogoliubovFunction, n_sites: int):
    field = steady_bloch(xi)
    paired, self_paired = [], []
    for k in ring_momenta(n_sites):
        index = _grid_index(xi, k)
        if abs(np.sin(k)) < 1e-12:
            n_z = float(field.n[index, 2])
            if abs(n_z) < SELF_PAIRED_TOL:
                raise OracleError(f"Self-paired mode k={k:.6g} has n_z = 0; its occupation is undefined.")
            self_paired.append((k, n_z < 0))
        elif k > 0:
            paired.append((k, xi.u[index], xi.v[index]))
    return paired, self_paired


def _fill_self_paired(state: np.ndarray, n_sites: int, self_paired) -> tuple[np.ndarray, int]:
    filled = 0
    for k, occupied in self_paired:
        if occupied:
            state = momentum_annihilator(n_sites, k).dagger.matrix @ state
            filled += 1
    return state, filled


def _pair_operator(n_sites: int, q: float) -> np.ndarray:
    return momentum_annihilator(n_sites, -q).dagger.matrix @ momentum_annihilator(n_sites, q).dagger.matrix


def pair_creation_operator(xi: BogoliubovFunction, n_sites: int) -> FockOperator:
    """
    G† = Σ_{0<q<π} φ_q a_{-q}† a_q† with φ_q = v_q / u_q.

    Raises:
        OracleError: If u_q vanishes on a paired mode.
    """
    paired, _self_paired = _mode_data(xi, n_sites)
    matrix = np.zeros((2**n_sites, 2**n_sites), dtype=complex)
    for q, u, v in paired:
        if abs(u) < 1e-12:
            raise OracleError(f"u_q vanishes at paired momentum q={q:.6g}; φ_q is undefined.")
        matrix += (v / u) * _pair_operator(n_sites, q)
    return FockOperator(matrix, n_sites)


def bcs_fixed_number_state(xi: BogoliubovFunction, n_sites: int, n_pairs: int) -> FixedNumberBCS:
    """
    Fixed-number BCS state G†^{N_p} times the filled self-paired modes, normalized.

    Args:
        xi: Bogoliubov function on a grid containing the ring momenta (see ring_xi).
        n_sites: Ring size N ≤ 6.
        n_pairs: Number of Cooper pairs N_p.

    Raises:
        ConfigError: If N_p exceeds the number of paired modes.
        OracleError: If φ_q is undefined or the state vanishes.
    """
    _check_sites(n_sites)
    paired, self_paired = _mode_data(xi, n_sites)
    if not 0 <= n_pairs <= len(paired):
        raise ConfigError(f"N_pairs must lie in 0..{len(paired)} for a ring of {n_sites} sites, got {n_pairs}.")
    state, filled = _fill_self_paired(vacuum_state(n_sites), n_sites, self_paired)
    creation = pair_creation_operator(xi, n_sites).matrix
    for _ in range(n_pairs):
        state = creation @ state
    norm = np.linalg.norm(state)
    if norm < 1e-12:
        raise OracleError("Fixed-number BCS state vanishes.")
    pairing = {float(q): complex(v / u) for q, u, v in paired}
    return FixedNumberBCS(state / norm, n_sites, 2 * n_pairs + filled, pairing)


def bcs_fixed_phase_state(xi: BogoliubovFunction, n_sites: int, phase: float = 0.0) -> np.ndarray:
    """Π_{0<q<π}(u_q + e^{iθ} v_q a_{-q}†a_q†)|vac⟩ times the filled self-paired modes, normalized."""
    _check_sites(n_sites)
    paired, self_paired = _mode_data(xi, n_sites)
    state, _filled = _fill_self_paired(vacuum_state(n_sites), n_sites, self_paired)
    rotation = np.exp(1j * phase)
    for q, u, v in paired:
        state = u * state + rotation * v * (_pair_operator(n_sites, q) @ state)
    return state / np.linalg.norm(state)


def momentum_jumps(xi: BogoliubovFunction, n_sites: int) -> List[FockOperator]:
    """j_k = u_k a_k + v_k a_{-k}† for every ring momentum."""
    ops = []
    for k in ring_momenta(n_sites):
        index = _grid_index(xi, k)
        matrix = xi.u[index] * momentum_annihilator(n_sites, k).matrix
        matrix = matrix + xi.v[index] * momentum_annihilator(n_sites, -k).dagger.matrix
        ops.append(FockOperator(matrix, n_sites))
    return ops


def dark_residual(operators: Iterable[FockOperator], state: np.ndarray) -> float:
    """max_i ‖L_i ψ‖."""
    return max(float(np.linalg.norm(op.matrix @ state)) for op in operators)


def fixed_phase_dark_check(xi: BogoliubovFunction, n_sites: int, phase: float = 0.0) -> float:
    """Residual max_k ‖j_k |BCS, θ⟩‖ of the fixed-phase state."""
    state = bcs_fixed_phase_state(xi, n_sites, phase)
    residual = dark_residual(momentum_jumps(xi, n_sites), state)
    log_info(f"fixed_phase_dark_check: N={n_sites} kind={xi.kind} residual={residual:.3e}")
    return residual


def random_sector_state(n_sites: int, particles: int, rng: np.random.Generator) -> np.ndarray:
    """Random normalized vector supported on one particle-number sector."""
    counts = np.array([bin(index).count("1") for index in range(2**n_sites)])
    mask = counts == particles
    if not mask.any():
        raise ConfigError(f"No states with {particles} particles on {n_sites} sites.")
    state = np.zeros(2**n_sites, dtype=complex)
    state[mask] = rng.normal(size=mask.sum()) + 1j * rng.normal(size=mask.sum())
    return state / np.linalg.norm(state)


def self_paired_occupations(xi: BogoliubovFunction, n_sites: int) -> dict:
    """Occupation (0 or 1) assigned to k = 0 and k = π from the sign of n_z."""
    _paired, self_paired = _mode_data(xi, n_sites)
    return {float(k): int(occupied) for k, occupied in self_paired}
