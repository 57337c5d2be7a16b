"""
Module: fock
Purpose: Dense Fock-space operators, density matrices and fixed-number BCS states.
"""

from dataclasses import dataclass, field

import numpy as np

from ..exceptions import DimensionError, PhysicalityError

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-9
POSITIVITY_TOL = 1e-8


def _check_square(matrix: np.ndarray, n_sites: int, name: str) -> None:
    dim = 2**n_sites
    if matrix.shape != (dim, dim):
        raise DimensionError(f"{name} on {n_sites} sites must be {dim}x{dim}, got {matrix.shape}.")


@dataclass(frozen=True)
class FockOperator:
    """Dense 2^N x 2^N operator in the Jordan-Wigner site-major basis."""

    matrix: np.ndarray
    n_sites: int

    def __post_init__(self):
        matrix = np.asarray(self.matrix, dtype=complex)
        _check_square(matrix, self.n_sites, "FockOperator")
        object.__setattr__(self, "matrix", matrix)

    @property
    def dagger(self) -> "FockOperator":
        return FockOperator(self.matrix.conj().T, self.n_sites)

    def __matmul__(self, other: "FockOperator") -> "FockOperator":
        return FockOperator(self.matrix @ other.matrix, self.n_sites)


@dataclass(frozen=True)
class DensityMatrix:
    """
    Hermitian, unit-trace, positive semi-definite ρ.

    Raises:
        PhysicalityError: If any of the three properties fails beyond tolerance.
    """

    matrix: np.ndarray
    n_sites: int

    def __post_init__(self):
        matrix = np.asarray(self.matrix, dtype=complex)
        _check_square(matrix, self.n_sites, "DensityMatrix")
        asym = float(np.max(np.abs(matrix - matrix.conj().T))) if matrix.size else 0.0
        if asym > HERMITICITY_TOL:
            raise PhysicalityError(f"Density matrix is not hermitian (max |ρ - ρ†| = {asym:.3e}).")
        trace = complex(np.trace(matrix))
        if abs(trace - 1.0) > TRACE_TOL:
            raise PhysicalityError(f"Density matrix trace {trace.real:.12g} differs from 1.")
        lowest = float(np.linalg.eigvalsh(0.5 * (matrix + matrix.conj().T))[0])
        if lowest < -POSITIVITY_TOL:
            raise PhysicalityError(f"Density matrix has negative eigenvalue {lowest:.3e}.")
        object.__setattr__(self, "matrix", matrix)

    @classmethod
    def from_state(cls, state: np.ndarray, n_sites: int) -> "DensityMatrix":
        vector = np.asarray(state, dtype=complex)
        vector = vector / np.linalg.norm(vector)
        return cls(np.outer(vector, vector.conj()), n_sites)

    @classmethod
    def maximally_mixed(cls, n_sites: int) -> "DensityMatrix":
        dim = 2**n_sites
        return cls(np.eye(dim) / dim, n_sites)

    def expectation(self, operator: FockOperator | np.ndarray) -> complex:
        matrix = operator.matrix if isinstance(operator, FockOperator) else operator
        return complex(np.trace(self.matrix @ matrix))


@dataclass(frozen=True)
class FixedNumberBCS:
    """
    Normalized a_0† G†^{N_p}|vac⟩ (self-paired modes as chosen) in one particle-number sector.

    `pairing` maps each paired momentum 0 < q < π to φ_q = v_q / u_q.
    """

    state: np.ndarray
    n_sites: int
    n_particles: int
    pairing: dict = field(default_factory=dict)

    def __post_init__(self):
        state = np.asarray(self.state, dtype=complex)
        if state.shape != (2**self.n_sites,):
            raise DimensionError(f"BCS state needs {2**self.n_sites} amplitudes, got {state.shape}.")
        norm = np.linalg.norm(state)
        if abs(norm - 1.0) > TRACE_TOL:
            raise PhysicalityError(f"BCS state is not normalized (‖ψ‖ = {norm:.12g}).")
        object.__setattr__(self, "state", state)
