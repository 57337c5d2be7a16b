"""
Module: liouville
Purpose: Time evolution, steady states, damping spectra and zero-mode
extraction for the covariance equation ∂_tΓ = [h,Γ] - {X,Γ} - Y.
"""

import math
from typing import Callable, Iterable, Sequence

import numpy as np

from .core import antisymmetrized, as_matrix, ensure_same_size, symmetrized, validate_covariance
from .exceptions import DriftError, InconsistentModelError, PhysicalityError, StepSizeError
from .models.majorana import CovarianceMatrix, DampingPair, QuadraticHamiltonian
from .models.spectral import EvolutionReport, SpectralDecomposition
from .utils import log_error, log_info, log_warning, physicality_tol, zero_tol

STABILITY_LIMIT = 0.1  # dt · (largest rate) must stay below this
# Sign of the Hamiltonian term: ∂_tΓ ∋ HAMILTONIAN_SIGN · [h, Γ] for 𝓗 = (i/4) cᵀ h c.
HAMILTONIAN_SIGN = 1.0
STEADY_RESIDUAL_LIMIT = 1e-9

PairSchedule = Callable[[float], DampingPair]


def damping_spectrum(pair: DampingPair, zero_threshold: float | None = None) -> SpectralDecomposition:
    """
    Eigen-decompose the damping matrix X.

    Args:
        pair: Damping matrices.
        zero_threshold: Eigenvalues below this count as zero modes.

    Returns:
        SpectralDecomposition with ascending eigenvalues.
    """
    threshold = zero_tol() if zero_threshold is None else zero_threshold
    if pair.x.size == 0:
        return SpectralDecomposition(np.zeros(0), np.zeros((0, 0)), ())
    eigenvalues, eigenvectors = np.linalg.eigh(symmetrized(pair.x))
    zero_indices = tuple(int(index) for index in np.flatnonzero(eigenvalues < threshold))
    return SpectralDecomposition(eigenvalues, eigenvectors, zero_indices)


def zero_modes(pair: DampingPair, zero_threshold: float | None = None) -> np.ndarray:
    """
    Orthonormal basis of null(X), one vector per column.

    Raises:
        InconsistentModelError: If a zero mode of X is not a zero mode of Y.
    """
    threshold = zero_tol() if zero_threshold is None else zero_threshold
    spectrum = damping_spectrum(pair, threshold)
    basis = spectrum.zero_basis
    if basis.size:
        leak = np.max(np.linalg.norm(pair.y @ basis, axis=0))
        if leak >= 10 * threshold:
            message = f"Zero modes of X are not annihilated by Y (max |Yv| = {leak:.3e})."
            log_error(message)
            raise InconsistentModelError(message)
    return basis


def bulk_purity_spectrum(
    pair: DampingPair,
    gamma: CovarianceMatrix | np.ndarray,
    zero_threshold: float | None = None,
) -> list[float]:
    """Sorted spectrum of Γ_bulk², Γ_bulk being Γ restricted to the bulk eigenspace of X."""
    spectrum = damping_spectrum(pair, zero_threshold)
    bulk = spectrum.bulk_basis
    block = bulk.T @ as_matrix(gamma) @ bulk
    square = block @ block
    return [float(value) for value in np.linalg.eigvalsh(symmetrized(square))]


def _generator(x: np.ndarray, y: np.ndarray, h: np.ndarray | None) -> Callable[[np.ndarray], np.ndarray]:
    def rhs(gamma: np.ndarray) -> np.ndarray:
        value = -(x @ gamma + gamma @ x) - y
        if h is not None:
            value += HAMILTONIAN_SIGN * (h @ gamma - gamma @ h)
        return value

    return rhs


def _rk4_step(rhs_at: Callable[[float, np.ndarray], np.ndarray], t: float, gamma: np.ndarray, step: float) -> np.ndarray:
    k1 = rhs_at(t, gamma)
    k2 = rhs_at(t + 0.5 * step, gamma + 0.5 * step * k1)
    k3 = rhs_at(t + 0.5 * step, gamma + 0.5 * step * k2)
    k4 = rhs_at(t + step, gamma + step * k3)
    return antisymmetrized(gamma + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4))


def _largest_rate(pair: DampingPair, hamiltonian: QuadraticHamiltonian | None) -> float:
    rate = float(np.linalg.eigvalsh(symmetrized(pair.x))[-1]) if pair.x.size else 0.0
    if hamiltonian is not None and hamiltonian.h.size:
        rate = max(rate, float(np.linalg.norm(hamiltonian.h, 2)))
    return rate


def _check_step(dt: float, rate: float) -> None:
    if not dt > 0:
        raise StepSizeError(f"dt must be positive, got {dt}.")
    if dt * rate >= STABILITY_LIMIT:
        message = (
            f"Step size guard: dt·max(rate) = {dt * rate:.4g} must stay below {STABILITY_LIMIT} "
            f"(dt={dt}, max rate={rate:.6g})."
        )
        log_error(message)
        raise StepSizeError(message)


def _step_count(total_time: float, dt: float) -> int:
    if total_time < 0:
        raise StepSizeError(f"Evolution time must be non-negative, got {total_time}.")
    return int(math.ceil(total_time / dt - 1e-12)) if total_time > 0 else 0


def _checked_state(gamma: np.ndarray, tol: float, t: float) -> CovarianceMatrix:
    try:
        validate_covariance(gamma, tol)
    except PhysicalityError as exc:
        message = f"Non-physical drift at t={t:.6g}: {exc}"
        log_error(message)
        raise DriftError(message) from exc
    return CovarianceMatrix.from_matrix(gamma)


def _integrate(
    gamma0: np.ndarray,
    rhs_at: Callable[[float, np.ndarray], np.ndarray],
    total_time: float,
    dt: float,
    record_every: int | None,
    tol: float,
) -> EvolutionReport:
    steps = _step_count(total_time, dt)
    step = total_time / steps if steps else dt
    times = [0.0]
    states = [_checked_state(gamma0, tol, 0.0)]
    gamma = gamma0.copy()
    for index in range(1, steps + 1):
        t_prev = (index - 1) * step
        gamma = _rk4_step(rhs_at, t_prev, gamma, step)
        if index == steps or (record_every and index % record_every == 0):
            t_now = index * step
            times.append(t_now)
            states.append(_checked_state(gamma, tol, t_now))
    return EvolutionReport(times=times, states=states, dt=step, steps=steps)


def evolve(
    gamma0: CovarianceMatrix | np.ndarray,
    pair: DampingPair,
    hamiltonian: QuadraticHamiltonian | None = None,
    total_time: float = 1.0,
    dt: float = 0.01,
    record_every: int | None = None,
    tol: float | None = None,
) -> EvolutionReport:
    """
    Integrate the covariance equation with classical fixed-step RK4.

    The step is shrunk to T / ceil(T / dt) so the run ends exactly at T.

    Args:
        gamma0: Physical initial covariance.
        pair: Damping matrices (time independent).
        hamiltonian: Optional quadratic Hamiltonian.
        total_time: Duration T.
        dt: Requested step.
        record_every: Also store every n-th step (initial and final are always stored).
        tol: Physicality tolerance.

    Returns:
        EvolutionReport.

    Raises:
        StepSizeError: If dt violates the stability guard.
        DriftError: If a stored state leaves the physical set.
    """
    tol = physicality_tol() if tol is None else tol
    start = np.array(as_matrix(gamma0), dtype=float)
    ensure_same_size(start, pair)
    validate_covariance(start, tol)
    if hamiltonian is not None and hamiltonian.h.shape != pair.x.shape:
        raise InconsistentModelError("Hamiltonian and damping matrices have different sizes.")
    _check_step(dt, _largest_rate(pair, hamiltonian))

    rhs = _generator(pair.x, pair.y, hamiltonian.h if hamiltonian is not None else None)
    report = _integrate(start, lambda _t, gamma: rhs(gamma), total_time, dt, record_every, tol)
    report.metadata["hamiltonian"] = hamiltonian is not None
    log_info(f"evolve: N={pair.n_sites} T={total_time!r} steps={report.steps} dt={report.dt!r}")
    return report


def evolve_driven(
    gamma0: CovarianceMatrix | np.ndarray,
    pair_at: PairSchedule,
    total_time: float,
    dt: float,
    record_every: int | None = None,
    tol: float | None = None,
) -> EvolutionReport:
    """
    RK4 integration with a time-dependent damping pair (X(t), Y(t)).

    The pair is sampled at the RK4 stage times; the stability guard uses the
    pair at t = 0 and t = T.
    """
    tol = physicality_tol() if tol is None else tol
    start = np.array(as_matrix(gamma0), dtype=float)
    first = pair_at(0.0)
    ensure_same_size(start, first)
    validate_covariance(start, tol)
    _check_step(dt, max(_largest_rate(first, None), _largest_rate(pair_at(total_time), None)))

    cache: dict[float, DampingPair] = {}

    def rhs_at(t: float, gamma: np.ndarray) -> np.ndarray:
        pair = cache.get(t)
        if pair is None:
            if len(cache) > 8:
                cache.clear()
            pair = cache.setdefault(t, pair_at(t))
        return -(pair.x @ gamma + gamma @ pair.x) - pair.y

    report = _integrate(start, rhs_at, total_time, dt, record_every, tol)
    report.metadata["driven"] = True
    log_info(f"evolve_driven: N={first.n_sites} T={total_time!r} steps={report.steps} dt={report.dt!r}")
    return report


def steady_state(
    pair: DampingPair,
    gamma0: CovarianceMatrix | np.ndarray | None = None,
    zero_threshold: float | None = None,
) -> CovarianceMatrix:
    """
    Solve {X, Γ̄} = -Y on the bulk and keep the zero-mode block of Γ0.

    In the X eigenbasis Γ̄_rs = -Y_rs / (λ_r + λ_s) unless both r and s are
    zero modes; that block is copied from Γ0 (or set to 0).

    Raises:
        InconsistentModelError: If λ_r + λ_s vanishes while Y_rs does not.
    """
    threshold = zero_tol() if zero_threshold is None else zero_threshold
    spectrum = damping_spectrum(pair, threshold)
    size = pair.x.shape[0]
    if size == 0:
        return CovarianceMatrix(0, np.zeros((0, 0)))
    vectors = spectrum.eigenvectors
    y_rot = vectors.T @ pair.y @ vectors
    lam = np.clip(spectrum.eigenvalues, 0.0, None)
    denominators = lam[:, None] + lam[None, :]
    zero_mask = np.zeros(size, dtype=bool)
    zero_mask[list(spectrum.zero_indices)] = True
    edge_block = np.outer(zero_mask, zero_mask)

    leak = np.abs(y_rot[edge_block]).max() if edge_block.any() else 0.0
    if leak > 10 * threshold:
        message = f"Inconsistent model: Y couples zero modes of X (|Y_rs| = {leak:.3e})."
        log_error(message)
        raise InconsistentModelError(message)

    gamma_rot = np.zeros((size, size))
    bulk = ~edge_block
    gamma_rot[bulk] = -y_rot[bulk] / denominators[bulk]
    if gamma0 is not None:
        start = np.asarray(as_matrix(gamma0), dtype=float)
        ensure_same_size(start, pair)
        start_rot = vectors.T @ start @ vectors
        gamma_rot[edge_block] = start_rot[edge_block]

    gamma = antisymmetrized(vectors @ gamma_rot @ vectors.T)
    residual = pair.x @ gamma + gamma @ pair.x + pair.y
    bulk_basis = spectrum.bulk_basis
    bulk_residual = float(np.max(np.abs(bulk_basis.T @ residual @ bulk_basis))) if bulk_basis.size else 0.0
    if bulk_residual > STEADY_RESIDUAL_LIMIT:
        log_warning(f"steady_state residual {bulk_residual:.3e} exceeds {STEADY_RESIDUAL_LIMIT}")
    else:
        log_info(f"steady_state: N={pair.n_sites} zero modes={len(spectrum.zero_indices)} residual={bulk_residual:.3e}")
    return CovarianceMatrix.from_matrix(gamma)


def edge_bulk_decay_check(
    pair: DampingPair,
    gamma0: CovarianceMatrix | np.ndarray,
    times: Iterable[float],
    dt: float = 0.01,
    zero_threshold: float | None = None,
) -> float:
    """
    Largest deviation of Γ_rβ(t) from e^{-λ_r t} Γ_rβ(0) over the given times.

    r runs over bulk modes and β over zero modes of X.

    Raises:
        InconsistentModelError: If the model has no zero modes.
    """
    spectrum = damping_spectrum(pair, zero_threshold)
    if not spectrum.zero_indices:
        raise InconsistentModelError("edge_bulk_decay_check needs at least one zero mode.")
    bulk = spectrum.bulk_basis
    edge = spectrum.zero_basis
    lam_bulk = spectrum.eigenvalues[list(spectrum.bulk_indices)]
    start = np.array(as_matrix(gamma0), dtype=float)
    initial_block = bulk.T @ start @ edge

    deviation = 0.0
    current = start
    elapsed = 0.0
    for t in sorted(float(value) for value in times):
        if t > elapsed:
            current = evolve(current, pair, total_time=t - elapsed, dt=dt).final.gamma
            elapsed = t
        block = bulk.T @ current @ edge
        predicted = np.exp(-lam_bulk * t)[:, None] * initial_block
        deviation = max(deviation, float(np.max(np.abs(block - predicted))) if block.size else 0.0)
    return deviation


def edge_block(
    pair: DampingPair,
    gamma: CovarianceMatrix | np.ndarray,
    zero_threshold: float | None = None,
) -> np.ndarray:
    """Zero-mode block of Γ expressed in the null basis of X."""
    edge = zero_modes(pair, zero_threshold)
    return edge.T @ as_matrix(gamma) @ edge


def sample_times(total_time: float, count: int) -> Sequence[float]:
    return [total_time * (index + 1) / count for index in range(count)]
