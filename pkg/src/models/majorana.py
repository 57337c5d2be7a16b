"""
Module: majorana
Purpose: Majorana-basis value types: Lindblad coefficient vectors, covariance
matrices, damping pairs and quadratic Hamiltonians.
"""

from dataclasses import dataclass

import numpy as np

from ..exceptions import DimensionError


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class MajoranaVector:
    """
    Coefficients l of one Lindblad operator j = lᵀc in the Majorana basis.

    Entry a (0-based) multiplies Majorana c_{a+1}. With a_j = (i c_{2j-1} + c_{2j})/2,
    the operator α a_j + β a_j† contributes l_{2j-1} = i(α - β)/2 and
    l_{2j} = (α + β)/2.
    """

    n_sites: int
    entries: np.ndarray

    def __post_init__(self):
        entries = np.array(self.entries, dtype=complex).reshape(-1)
        if self.n_sites < 1:
            raise DimensionError("MajoranaVector needs at least one site.")
        if entries.shape[0] != 2 * self.n_sites:
            raise DimensionError(
                f"MajoranaVector for {self.n_sites} sites needs {2 * self.n_sites} entries, "
                f"got {entries.shape[0]}."
            )
        if not np.all(np.isfinite(entries)):
            raise DimensionError("MajoranaVector entries must be finite.")
        object.__setattr__(self, "entries", _frozen(entries))

    def site_coefficients(self, site: int) -> tuple[complex, complex]:
        """Return (α_j, β_j) of a_j and a_j† for the 1-based site j."""
        if not 1 <= site <= self.n_sites:
            raise DimensionError(f"Site {site} outside 1..{self.n_sites}.")
        odd = self.entries[2 * site - 2]
        even = self.entries[2 * site - 1]
        return complex(even - 1j * odd), complex(even + 1j * odd)


@dataclass(frozen=True)
class CovarianceMatrix:
    """
    Real antisymmetric Γ with Γ_ab = (i/2)⟨[c_a, c_b]⟩; fully specifies a
    Gaussian state.
    """

    n_sites: int
    gamma: np.ndarray

    def __post_init__(self):
        gamma = np.array(self.gamma, dtype=float)
        size = 2 * self.n_sites
        if self.n_sites < 0 or gamma.shape != (size, size):
            raise DimensionError(
                f"Covariance for {self.n_sites} sites must be {size}x{size}, got {gamma.shape}."
            )
        object.__setattr__(self, "gamma", _frozen(gamma))

    @classmethod
    def from_matrix(cls, gamma: np.ndarray) -> "CovarianceMatrix":
        gamma = np.asarray(gamma, dtype=float)
        if gamma.ndim != 2 or gamma.shape[0] != gamma.shape[1] or gamma.shape[0] % 2:
            raise DimensionError(f"Covariance must be square with even size, got {gamma.shape}.")
        return cls(gamma.shape[0] // 2, gamma)

    def element(self, a: int, b: int) -> float:
        """Entry Γ_ab for 1-based Majorana indices."""
        return float(self.gamma[a - 1, b - 1])


@dataclass(frozen=True)
class DampingPair:
    """X (symmetric, PSD) and Y (antisymmetric) of ∂_tΓ = -{X,Γ} - Y."""

    x: np.ndarray
    y: np.ndarray
    kappa: float

    def __post_init__(self):
        x = np.array(self.x, dtype=float)
        y = np.array(self.y, dtype=float)
        if x.shape != y.shape or x.ndim != 2 or x.shape[0] != x.shape[1] or x.shape[0] % 2:
            raise DimensionError(f"Damping matrices must be matching even squares, got {x.shape}/{y.shape}.")
        object.__setattr__(self, "x", _frozen(x))
        object.__setattr__(self, "y", _frozen(y))

    @property
    def n_sites(self) -> int:
        return self.x.shape[0] // 2


@dataclass(frozen=True)
class QuadraticHamiltonian:
    """
    Real antisymmetric h of 𝓗 = (i/4) Σ_ab h_ab c_a c_b.

    In the hermitian notation 𝓗 = ¼ cᵀHc this is H = i h, and the covariance
    picks up the term -i[H, Γ] = [h, Γ].
    """

    h: np.ndarray

    def __post_init__(self):
        h = np.array(self.h, dtype=float)
        if h.ndim != 2 or h.shape[0] != h.shape[1] or h.shape[0] % 2:
            raise DimensionError(f"Hamiltonian matrix must be an even square, got {h.shape}.")
        if not np.allclose(h, -h.T, atol=1e-12):
            raise DimensionError("Hamiltonian matrix h must be antisymmetric.")
        object.__setattr__(self, "h", _frozen(0.5 * (h - h.T)))

    @property
    def n_sites(self) -> int:
        return self.h.shape[0] // 2
