"""
Module: bloch
Purpose: Momentum-space value types: Bogoliubov functions, Bloch vector fields,
chiral axes and momentum-space Gaussian states.
"""

from dataclasses import dataclass, field

import numpy as np

from ..exceptions import DimensionError

MIN_GRID = 8


def brillouin_grid(size: int) -> np.ndarray:
    """Uniform grid k_j = -π + 2πj/L, j = 0..L-1 (k = π identified with -π)."""
    if size < MIN_GRID or size % 2:
        raise DimensionError(f"Brillouin grid needs an even size ≥ {MIN_GRID}, got {size}.")
    return -np.pi + 2.0 * np.pi * np.arange(size) / size


def partner_indices(size: int) -> np.ndarray:
    """Index of -k for every grid index (k_0 = -π is its own partner)."""
    return (size - np.arange(size)) % size


def nonnegative_indices(size: int) -> np.ndarray:
    """Indices with k ∈ [0, π]: k = 0, the positive half and k = π (stored at index 0)."""
    return np.concatenate([np.arange(size // 2, size), [0]])


@dataclass(frozen=True)
class BogoliubovFunction:
    """ξ_k = (u_k, v_k): j_k = u_k a_k + v_k a_{-k}† on a Brillouin grid."""

    grid: np.ndarray
    u: np.ndarray
    v: np.ndarray
    kind: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        u = np.asarray(self.u, dtype=complex)
        v = np.asarray(self.v, dtype=complex)
        if grid.ndim != 1 or grid.size < MIN_GRID or grid.size % 2:
            raise DimensionError("BogoliubovFunction needs an even grid with at least 8 points.")
        if u.shape != grid.shape or v.shape != grid.shape:
            raise DimensionError("u and v must match the grid.")
        if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v))):
            raise DimensionError("u and v must be finite.")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @property
    def size(self) -> int:
        return self.grid.size

    def partners(self) -> np.ndarray:
        return partner_indices(self.size)


@dataclass(frozen=True)
class BlochField:
    """Real 3-vector n_k per grid point together with the mode rates κ_k."""

    grid: np.ndarray
    n: np.ndarray
    kappa: np.ndarray

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        n = np.asarray(self.n, dtype=float)
        kappa = np.asarray(self.kappa, dtype=float)
        if n.shape != (grid.size, 3) or kappa.shape != grid.shape:
            raise DimensionError("BlochField needs one 3-vector and one rate per grid point.")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "kappa", kappa)

    @classmethod
    def from_vectors(cls, vectors: np.ndarray) -> "BlochField":
        vectors = np.asarray(vectors, dtype=float)
        return cls(brillouin_grid(vectors.shape[0]), vectors, np.ones(vectors.shape[0]))

    @property
    def purity(self) -> np.ndarray:
        """|n_k| per grid point."""
        return np.linalg.norm(self.n, axis=1)


@dataclass(frozen=True)
class ChiralAxis:
    """Unit vector a with n_k · a = 0 for all k; Σ = a·σ."""

    a: np.ndarray
    max_violation: float = 0.0

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        norm = np.linalg.norm(a)
        if a.shape != (3,) or norm == 0:
            raise DimensionError("Chiral axis must be a nonzero 3-vector.")
        a = a / norm
        nonzero = np.flatnonzero(np.abs(a) > 1e-12)
        if nonzero.size and a[nonzero[0]] < 0:
            a = -a
        object.__setattr__(self, "a", a)


@dataclass(frozen=True)
class MomentumState:
    """
    N_k = (n_{0,k}, n_k) on k ∈ [0, π] plus the model vectors M^s, M^a, m and κ_k.
    """

    grid: np.ndarray
    state: np.ndarray
    m_sym: np.ndarray
    m_anti: np.ndarray
    m_unit: np.ndarray
    kappa: np.ndarray

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        for name in ("state", "m_sym", "m_anti", "m_unit"):
            value = np.asarray(getattr(self, name), dtype=float)
            if value.shape != (grid.size, 4):
                raise DimensionError(f"MomentumState.{name} must have shape ({grid.size}, 4).")
            object.__setattr__(self, name, value)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "kappa", np.asarray(self.kappa, dtype=float))

    def with_state(self, state: np.ndarray) -> "MomentumState":
        return MomentumState(self.grid, state, self.m_sym, self.m_anti, self.m_unit, self.kappa)

    def redundancy_residual(self) -> float:
        """max_k |n_{0,k} - m^s_{0,k} + n_k·m^a_k|."""
        dots = np.einsum("ki,ki->k", self.state[:, 1:], self.m_anti[:, 1:])
        return float(np.max(np.abs(self.state[:, 0] - self.m_sym[:, 0] + dots)))


@dataclass(frozen=True)
class WindingResult:
    """Winding number of a chiral Bloch field and the per-method raw values."""

    nu: int
    raw: float
    residual: float
    methods: dict = field(default_factory=dict)
    min_purity: float = 0.0
