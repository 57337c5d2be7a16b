"""
Module: momentum
Purpose: Translation-invariant analysis of dissipative wires: Bogoliubov
functions ξ_k, steady-state Bloch vectors, chiral axes, the winding number,
filling, momentum-space damping spectra and the per-k equation of motion.

Conventions:
    a_k = L^{-1/2} Σ_x e^{-ikx} a_x, j_k = u_k a_k + v_k a_{-k}†.
    m̃_k = (|u|² + |v|², 2 Re u*v, 2 Im u*v, |u|² - |v|²), κ_k = ½(m̃_{0,k} + m̃_{0,-k}),
    m_k = m̃_k / κ_k, M^s = ½(m_k + S m_{-k}), M^a = ½(m_k - S m_{-k}),
    S = diag(-1, -1, -1, 1). The pair state is N_k = (n_{0,k}, n_k) with
    n_{0,k} = ⟨a_{-k}†a_{-k}⟩ - ⟨a_k†a_k⟩ and n_k the Bloch vector of the
    even-parity block, so ∂_t N_k = -κ_k((𝟙 + A_k) N_k - M^s_k).
"""

import math

import numpy as np
from scipy.integrate import trapezoid
from scipy.linalg import expm

from .exceptions import (
    ConfigError,
    InconsistentModelError,
    InvariantUndefinedError,
    NotChiralError,
    StepSizeError,
)
from .models.bloch import (
    BlochField,
    BogoliubovFunction,
    ChiralAxis,
    MomentumState,
    WindingResult,
    brillouin_grid,
    nonnegative_indices,
)
from .utils import log_error, log_info, log_warning

XI_KINDS = ("canonical", "noncanonical", "imperfect")
UNDAMPED_TOL = 1e-12
DEFAULT_PURITY_FLOOR = 1e-6
INTEGRALITY_TOL = 1e-6
STABILITY_LIMIT = 0.1

PAULI = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)
REFLECTION = np.array([-1.0, -1.0, -1.0, 1.0])  # S acting on (n_0, n_x, n_y, n_z)


def make_grid(size: int) -> np.ndarray:
    return brillouin_grid(size)


def xi_deformed(
    kind: str,
    theta: float,
    phi: float,
    grid: np.ndarray | int,
    epsilon: float = 0.0,
) -> BogoliubovFunction:
    """
    Bogoliubov function of a translation-invariant wire.

    Args:
        kind: `canonical`, `noncanonical` or `imperfect`.
        theta: Deformation angle (unused for `imperfect`).
        phi: Gauge phase multiplying the annihilation part.
        grid: Grid array or grid size L.
        epsilon: Imperfection strength for kind `imperfect`.

    Returns:
        BogoliubovFunction with the literal closed forms:
            canonical     √2(-i e^{iφ} sinθ sin(k/2), cosθ cos(k/2))
            noncanonical  (e^{iφ}(cosθ e^{-ik/2} - sinθ e^{ik/2}), sinθ e^{-ik/2} + cosθ e^{ik/2}) / √2
            imperfect     (i e^{iφ} sin(k/2), cos(k/2) + ε cos(3k/2)) / √N_k

    Raises:
        ConfigError: On an unknown kind.
    """
    k = make_grid(grid) if isinstance(grid, int) else np.asarray(grid, dtype=float)
    phase = np.exp(1j * phi)
    s, c = math.sin(theta), math.cos(theta)
    if kind == "canonical":
        u = -1j * math.sqrt(2.0) * phase * s * np.sin(0.5 * k)
        v = math.sqrt(2.0) * c * np.cos(0.5 * k) + 0j
    elif kind == "noncanonical":
        u = phase * (c * np.exp(-0.5j * k) - s * np.exp(0.5j * k)) / math.sqrt(2.0)
        v = (s * np.exp(-0.5j * k) + c * np.exp(0.5j * k)) / math.sqrt(2.0)
    elif kind == "imperfect":
        raw_u = 1j * phase * np.sin(0.5 * k)
        raw_v = np.cos(0.5 * k) + epsilon * np.cos(1.5 * k) + 0j
        norm = np.sqrt(np.abs(raw_u) ** 2 + np.abs(raw_v) ** 2)
        u, v = raw_u / norm, raw_v / norm
    else:
        raise ConfigError(f"Unknown Bogoliubov kind '{kind}'. Expected one of {', '.join(XI_KINDS)}.")
    params = {"theta": float(theta), "phi": float(phi), "epsilon": float(epsilon)}
    return BogoliubovFunction(k, u, v, kind=kind, params=params)


def bloch_components(xi: BogoliubovFunction) -> np.ndarray:
    """Unnormalized m̃_k = ξ_k†σ̃ξ_k as an (L, 4) array."""
    u, v = xi.u, xi.v
    cross = np.conj(u) * v
    return np.stack(
        [
            np.abs(u) ** 2 + np.abs(v) ** 2,
            2.0 * cross.real,
            2.0 * cross.imag,
            np.abs(u) ** 2 - np.abs(v) ** 2,
        ],
        axis=1,
    )


def mode_rates(xi: BogoliubovFunction) -> np.ndarray:
    """κ_k = ½(m̃_{0,k} + m̃_{0,-k})."""
    raw = bloch_components(xi)
    return 0.5 * (raw[:, 0] + raw[xi.partners(), 0])


def _model_vectors(xi: BogoliubovFunction) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    raw = bloch_components(xi)
    kappa = 0.5 * (raw[:, 0] + raw[xi.partners(), 0])
    undamped = np.flatnonzero(kappa < UNDAMPED_TOL)
    if undamped.size:
        k_bad = float(xi.grid[undamped[0]])
        message = f"Mode k={k_bad:.6g} is undamped (κ_k = {kappa[undamped[0]]:.3e}); steady state is not unique."
        log_error(message)
        raise InconsistentModelError(message)
    m = raw / kappa[:, None]
    mirrored = m[xi.partners()] * REFLECTION
    return m, 0.5 * (m + mirrored), 0.5 * (m - mirrored), kappa


def _field_from_half(xi: BogoliubovFunction, half: np.ndarray, kappa: np.ndarray) -> BlochField:
    size = xi.size
    idx = nonnegative_indices(size)
    n = np.zeros((size, 3))
    n[idx] = half
    for j in range(1, size // 2):
        n[j] = REFLECTION[1:] * n[size - j]
    return BlochField(xi.grid, n, kappa)


def steady_bloch(xi: BogoliubovFunction) -> BlochField:
    """
    Steady-state Bloch vectors n_k = ½(m_{x,k} - m_{x,-k}, m_{y,k} - m_{y,-k}, m_{z,k} + m_{z,-k}).

    Evaluated on k ∈ [0, π] and continued to k < 0 with n_{-k} = S_z n_k.

    Raises:
        InconsistentModelError: If some κ_k vanishes.
    """
    _m, m_sym, _m_anti, kappa = _model_vectors(xi)
    idx = nonnegative_indices(xi.size)
    return _field_from_half(xi, m_sym[idx, 1:], kappa)


def chiral_axis(field: BlochField, tol: float = 1e-9) -> ChiralAxis:
    """
    Common normal a of all Bloch vectors.

    a is the eigenvector of the smallest eigenvalue of Σ_k n_k n_kᵀ.

    Args:
        field: Bloch field.
        tol: Relative tolerance for both the violation max|a·n_k| / max|n_k|
            and the degeneracy of the smallest eigenvalue.

    Returns:
        ChiralAxis with the branch fixed by its first nonzero component.

    Raises:
        NotChiralError: reason `zero field`, `axis not unique` or `violation`.
    """
    scale = float(field.purity.max())
    if scale == 0.0:
        raise NotChiralError("All Bloch vectors vanish; no chiral axis.", reason="zero field")
    second_moment = field.n.T @ field.n / field.grid.size
    eigenvalues, eigenvectors = np.linalg.eigh(second_moment)
    if eigenvalues[1] - eigenvalues[0] <= tol * max(eigenvalues[2], 1e-300):
        raise NotChiralError("Bloch vectors are collinear; the chiral plane is not unique.", reason="axis not unique")
    axis = ChiralAxis(eigenvectors[:, 0])
    violation = float(np.max(np.abs(field.n @ axis.a))) / scale
    if violation > tol:
        raise NotChiralError(
            f"Bloch vectors leave the plane ⊥ a (relative violation {violation:.3e} > {tol:.1e}).",
            reason="violation",
        )
    return ChiralAxis(axis.a, violation)


def _plane_basis(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    seed = np.zeros(3)
    seed[int(np.argmin(np.abs(a)))] = 1.0
    first = seed - (seed @ a) * a
    first /= np.linalg.norm(first)
    return first, np.cross(a, first)


def _spectral_derivative(values: np.ndarray) -> np.ndarray:
    """d/dk of a 2π-periodic sampled field (rows = grid points)."""
    size = values.shape[0]
    wavenumbers = np.fft.fftfreq(size, d=1.0 / size)
    wavenumbers[size // 2] = 0.0
    return np.real(np.fft.ifft(1j * wavenumbers[:, None] * np.fft.fft(values, axis=0), axis=0))


def winding_by_angle(unit: np.ndarray, axis: ChiralAxis) -> float:
    first, second = _plane_basis(axis.a)
    angles = np.arctan2(unit @ second, unit @ first)
    closed = np.unwrap(np.append(angles, angles[0]))
    return float((closed[-1] - closed[0]) / (2.0 * np.pi))


def winding_by_line_integral(unit: np.ndarray, axis: ChiralAxis) -> float:
    """ν = (1/2π) ∮ a·(n̂_k × ∂_k n̂_k) dk."""
    derivative = _spectral_derivative(unit)
    density = np.cross(unit, derivative) @ axis.a
    step = 2.0 * np.pi / unit.shape[0]
    return float(np.sum(density) * step / (2.0 * np.pi))


def winding_by_q_trace(unit: np.ndarray, axis: ChiralAxis) -> float:
    """ν = (1/4πi) ∮ tr(Σ Q_k ∂_k Q_k) dk with Q_k = n̂_k·σ and Σ = a·σ."""
    q = np.einsum("ki,iab->kab", unit, PAULI)
    dq = np.einsum("ki,iab->kab", _spectral_derivative(unit), PAULI)
    sigma = np.einsum("i,iab->ab", axis.a, PAULI)
    traces = np.einsum("ab,kbc,kca->k", sigma, q, dq)
    step = 2.0 * np.pi / unit.shape[0]
    return float((np.sum(traces) * step / (4j * np.pi)).real)


def winding_number(
    field: BlochField,
    axis: ChiralAxis,
    purity_floor: float = DEFAULT_PURITY_FLOOR,
    tol: float = INTEGRALITY_TOL,
) -> WindingResult:
    """
    Winding of n̂_k around the chiral axis over the closed Brillouin zone.

    The accumulated angle is authoritative; the line integral and the Q-trace
    formula must agree with it within `tol`.

    Raises:
        InvariantUndefinedError: If |n_k| ≤ purity_floor somewhere, the result is
            not integral, or the three formulas disagree.
    """
    purity = field.purity
    min_purity = float(purity.min())
    if min_purity <= purity_floor:
        k_bad = float(field.grid[int(np.argmin(purity))])
        message = f"Bloch vector vanishes at k={k_bad:.6g} (|n_k| = {min_purity:.3e}); the winding number is undefined."
        log_error(message)
        raise InvariantUndefinedError(message)
    unit = field.n / purity[:, None]
    raw = winding_by_angle(unit, axis)
    nu = int(round(raw))
    residual = abs(raw - nu)
    if residual >= tol:
        raise InvariantUndefinedError(f"Winding {raw:.9g} is not integral (residual {residual:.3e}); refine the grid.")
    methods = {
        "angle": raw,
        "line_integral": winding_by_line_integral(unit, axis),
        "q_trace": winding_by_q_trace(unit, axis),
    }
    spread = max(abs(value - raw) for value in methods.values())
    if spread >= tol:
        message = f"Winding formulas disagree by {spread:.3e}: {methods}"
        log_error(message)
        raise InvariantUndefinedError(message)
    log_info(f"winding_number: nu={nu} L={field.grid.size} min|n|={min_purity:.3e} spread={spread:.3e}")
    return WindingResult(nu=nu, raw=raw, residual=residual, methods=methods, min_purity=min_purity)


def filling(field: BlochField) -> tuple[float, np.ndarray]:
    """
    Average occupation n̄ = ∫ dk/2π ½(1 - n_{z,k}) and its per-k values.
    """
    per_k = 0.5 * (1.0 - field.n[:, 2])
    closed_k = np.append(field.grid, np.pi)
    closed_values = np.append(per_k, per_k[0])
    return float(trapezoid(closed_values, closed_k) / (2.0 * np.pi)), per_k


def is_quasi_canonical(xi: BogoliubovFunction, tol: float = 1e-10) -> bool:
    """u_k v_{-k} + u_{-k} v_k = 0 and ξ_k†ξ_k > 0 on every grid point."""
    partners = xi.partners()
    anomaly = xi.u * xi.v[partners] + xi.u[partners] * xi.v
    weight = np.abs(xi.u) ** 2 + np.abs(xi.v) ** 2
    return bool(np.all(np.abs(anomaly) <= tol) and np.all(weight > tol))


def _coupled(kappa: np.ndarray, m_anti: np.ndarray) -> np.ndarray:
    coupling = np.zeros((kappa.size, 4, 4))
    coupling[:, 0, 1:] = m_anti[:, 1:]
    coupling[:, 1:, 0] = m_anti[:, 1:]
    return kappa[:, None, None] * (np.eye(4) + coupling)


def momentum_eom_matrix(xi: BogoliubovFunction) -> np.ndarray:
    """Per-k generators L_k = κ_k(𝟙 + A_k), shape (L, 4, 4)."""
    _m, _m_sym, m_anti, kappa = _model_vectors(xi)
    return _coupled(kappa, m_anti)


def momentum_damping(xi: BogoliubovFunction) -> np.ndarray:
    """
    Rates (κ_k, κ_k, κ_k(1 + |m^a_k|), κ_k(1 - |m^a_k|)) per grid point.
    """
    _m, _m_sym, m_anti, kappa = _model_vectors(xi)
    size = np.linalg.norm(m_anti[:, 1:], axis=1)
    return np.stack([kappa, kappa, kappa * (1.0 + size), kappa * (1.0 - size)], axis=1)


def momentum_model(xi: BogoliubovFunction, state: np.ndarray | None = None) -> MomentumState:
    """Model vectors on k ∈ [0, π] with the given (default: infinite-temperature) N_k."""
    m, m_sym, m_anti, kappa = _model_vectors(xi)
    idx = nonnegative_indices(xi.size)
    grid = np.abs(xi.grid[idx])
    start = np.zeros((idx.size, 4)) if state is None else np.asarray(state, dtype=float)
    return MomentumState(grid, start, m_sym[idx], m_anti[idx], m[idx], kappa[idx])


def _generators(model: MomentumState) -> np.ndarray:
    return _coupled(model.kappa, model.m_anti)


def steady_momentum_state(xi: BogoliubovFunction) -> MomentumState:
    """Solve (𝟙 + A_k) N_k = M^s_k on k ∈ [0, π]."""
    model = momentum_model(xi)
    generators = _generators(model) / model.kappa[:, None, None]
    state = np.linalg.solve(generators, model.m_sym[:, :, None])[:, :, 0]
    return model.with_state(state)


def momentum_evolve(
    xi: BogoliubovFunction,
    initial: MomentumState | np.ndarray | None,
    total_time: float,
    dt: float,
) -> MomentumState:
    """
    RK4 integration of ∂_t N_k = -κ_k((𝟙 + A_k) N_k - M^s_k) for every k ≥ 0.

    Args:
        xi: Bogoliubov function.
        initial: Starting N_k as MomentumState or (K, 4) array; None means N_k = 0.
        total_time: Duration T ≥ 0.
        dt: Requested step; shrunk to T / ceil(T / dt).

    Raises:
        StepSizeError: If dt · max rate ≥ 0.1.
    """
    start = initial.state if isinstance(initial, MomentumState) else initial
    model = momentum_model(xi, start)
    generators = _generators(model)
    drive = model.kappa[:, None] * model.m_sym
    max_rate = float(np.max(np.linalg.eigvalsh(generators)))
    if not dt > 0 or dt * max_rate >= STABILITY_LIMIT:
        message = f"Step size guard: dt·max(rate) = {dt * max_rate:.4g} must stay below {STABILITY_LIMIT}."
        log_error(message)
        raise StepSizeError(message)
    if total_time < 0:
        raise StepSizeError(f"Evolution time must be non-negative, got {total_time}.")

    steps = int(math.ceil(total_time / dt - 1e-12)) if total_time > 0 else 0
    step = total_time / steps if steps else dt

    def rhs(state: np.ndarray) -> np.ndarray:
        return drive - np.einsum("kab,kb->ka", generators, state)

    state = model.state.copy()
    for _ in range(steps):
        k1 = rhs(state)
        k2 = rhs(state + 0.5 * step * k1)
        k3 = rhs(state + 0.5 * step * k2)
        k4 = rhs(state + step * k3)
        state = state + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    log_info(f"momentum_evolve: kind={xi.kind} K={model.grid.size} T={total_time!r} steps={steps}")
    return model.with_state(state)


def momentum_closed_form(state: MomentumState, total_time: float) -> MomentumState:
    """N(T) = e^{-L T} N(0) + (𝟙 - e^{-L T}) L^{-1} κ M^s with L = κ(𝟙 + A)."""
    generators = _generators(state)
    result = np.zeros_like(state.state)
    for index, generator in enumerate(generators):
        propagator = expm(-generator * total_time)
        fixed = np.linalg.solve(generator, state.kappa[index] * state.m_sym[index])
        result[index] = propagator @ state.state[index] + (np.eye(4) - propagator) @ fixed
    return state.with_state(result)


def current_free(xi: BogoliubovFunction, tol: float = 1e-9) -> bool:
    """
    True when the steady state carries no current (n_{0,k} = 0) and so equals steady_bloch.
    """
    steady = steady_momentum_state(xi)
    current = float(np.max(np.abs(steady.state[:, 0])))
    literal = steady_bloch(xi).n[nonnegative_indices(xi.size)]
    mismatch = float(np.max(np.abs(steady.state[:, 1:] - literal)))
    if current > tol:
        log_warning(f"current_free: kind={xi.kind} carries steady current {current:.3e}")
    return current <= tol and mismatch <= tol


def bloch_field_from_state(xi: BogoliubovFunction, state: MomentumState) -> BlochField:
    """Continue a k ≥ 0 momentum state to the full grid."""
    return _field_from_half(xi, state.state[:, 1:], mode_rates(xi))
