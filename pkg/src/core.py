"""
Module: core
Purpose: Majorana-basis algebra, Gaussian state bookkeeping and assembly of the
damping matrices X, Y from Lindblad coefficient vectors.
"""

from typing import Iterable, Sequence

import numpy as np
from scipy.stats import ortho_group

from .exceptions import DimensionError, PhysicalityError
from .models.majorana import CovarianceMatrix, DampingPair, MajoranaVector, QuadraticHamiltonian
from .utils import log_error, physicality_tol

SiteCoefficient = tuple[int, complex, complex]

# Elementary 2x2 block of a filled/empty Majorana pair.
PAIR_BLOCK = np.array([[0.0, 1.0], [-1.0, 0.0]])


def complex_to_majorana(n_sites: int, site_coeffs: Iterable[SiteCoefficient]) -> MajoranaVector:
    """
    Map Σ_j (α_j a_j + β_j a_j†) to its Majorana coefficient vector.

    Args:
        n_sites: Number of physical sites N.
        site_coeffs: Triples (j, α_j, β_j) with 1-based site j. Repeated sites add up.

    Returns:
        MajoranaVector with l_{2j-1} = i(α_j - β_j)/2 and l_{2j} = (α_j + β_j)/2.

    Raises:
        DimensionError: If a site index is out of range or a coefficient is not finite.
    """
    entries = np.zeros(2 * n_sites, dtype=complex)
    for site, alpha, beta in site_coeffs:
        if not 1 <= site <= n_sites:
            raise DimensionError(f"Site index {site} outside 1..{n_sites}.")
        alpha, beta = complex(alpha), complex(beta)
        if not (np.isfinite(alpha) and np.isfinite(beta)):
            raise DimensionError(f"Non-finite coefficient on site {site}.")
        entries[2 * site - 2] += 0.5j * (alpha - beta)
        entries[2 * site - 1] += 0.5 * (alpha + beta)
    return MajoranaVector(n_sites, entries)


def majorana_to_complex(vector: MajoranaVector) -> list[SiteCoefficient]:
    """Inverse of complex_to_majorana; lists every site with a nonzero coefficient."""
    coeffs: list[SiteCoefficient] = []
    for site in range(1, vector.n_sites + 1):
        alpha, beta = vector.site_coefficients(site)
        if alpha != 0 or beta != 0:
            coeffs.append((site, alpha, beta))
    return coeffs


def build_damping_matrices(
    vectors: Sequence[MajoranaVector],
    kappa: float,
    n_sites: int | None = None,
) -> DampingPair:
    """
    Assemble X = 2κ Re M and Y = 4κ Im M from the Lindblad vectors.

    M_ab = Σ_i conj(l_{i,a}) l_{i,b}. With Γ_ab = (i/2)⟨[c_a, c_b]⟩ this
    placement of the conjugate makes ∂_tΓ = -{X,Γ} - Y reproduce the
    Fock-space dynamics of ρ̇ = κ Σ (jρj† - ½{j†j, ρ}).

    Args:
        vectors: Lindblad coefficient vectors, all over the same sites.
        kappa: Dissipation rate κ > 0.
        n_sites: Required only when `vectors` is empty.

    Returns:
        DampingPair with exactly (anti)symmetrized matrices.

    Raises:
        DimensionError: On mismatched site counts or non-positive κ.
    """
    if not kappa > 0:
        raise DimensionError(f"kappa must be positive, got {kappa}.")
    sizes = {vector.n_sites for vector in vectors}
    if n_sites is not None:
        sizes.add(n_sites)
    if len(sizes) > 1:
        raise DimensionError(f"Lindblad vectors span different site counts: {sorted(sizes)}.")
    size = 2 * (sizes.pop() if sizes else 0)

    if vectors:
        stacked = np.vstack([vector.entries for vector in vectors])
        m = stacked.conj().T @ stacked
    else:
        m = np.zeros((size, size), dtype=complex)
    x = 2.0 * kappa * m.real
    y = 4.0 * kappa * m.imag
    return DampingPair(0.5 * (x + x.T), 0.5 * (y - y.T), float(kappa))


def as_matrix(gamma: CovarianceMatrix | np.ndarray) -> np.ndarray:
    if isinstance(gamma, CovarianceMatrix):
        return gamma.gamma
    return np.asarray(gamma, dtype=float)


def validate_covariance(gamma: CovarianceMatrix | np.ndarray, tol: float | None = None) -> np.ndarray:
    """
    Check antisymmetry and physicality of a covariance matrix.

    Returns:
        Sorted eigenvalues of Γ².

    Raises:
        PhysicalityError: If Γ is not antisymmetric or spec(Γ²) leaves [-1, 0].
    """
    tol = physicality_tol() if tol is None else tol
    matrix = as_matrix(gamma)
    if matrix.size == 0:
        return np.zeros(0)
    asym = np.max(np.abs(matrix + matrix.T))
    if asym > tol:
        raise PhysicalityError(f"Covariance is not antisymmetric (max |Γ + Γᵀ| = {asym:.3e}).")
    antisym = 0.5 * (matrix - matrix.T)
    square = antisym @ antisym
    eigenvalues = np.linalg.eigvalsh(0.5 * (square + square.T))
    if eigenvalues[0] < -1.0 - tol or eigenvalues[-1] > tol:
        raise PhysicalityError(
            f"Covariance is not physical: spec(Γ²) spans [{eigenvalues[0]:.12g}, {eigenvalues[-1]:.12g}]."
        )
    return eigenvalues


def purity_spectrum(gamma: CovarianceMatrix | np.ndarray, tol: float | None = None) -> list[float]:
    """
    Sorted real eigenvalues of Γ².

    Args:
        gamma: Covariance matrix.
        tol: Physicality tolerance; defaults to the configured one.

    Returns:
        2N values in [-1, 0]; all equal to -1 for a pure state.

    Raises:
        PhysicalityError: For non-physical input.
    """
    return [float(value) for value in validate_covariance(gamma, tol)]


def is_pure(gamma: CovarianceMatrix | np.ndarray, tol: float | None = None) -> bool:
    tol = physicality_tol() if tol is None else tol
    spectrum = validate_covariance(gamma, tol)
    return bool(np.all(np.abs(spectrum + 1.0) < max(tol, 1e-8)))


def occupation(gamma: CovarianceMatrix | np.ndarray, site: int) -> float:
    """
    ⟨a_j†a_j⟩ for the 1-based site j.

    a_j†a_j = ½(1 - i c_{2j-1} c_{2j}) and Γ_{2j-1,2j} = i⟨c_{2j-1} c_{2j}⟩,
    hence n_j = ½(1 - Γ_{2j-1,2j}).
    """
    matrix = as_matrix(gamma)
    n_sites = matrix.shape[0] // 2
    if not 1 <= site <= n_sites:
        raise DimensionError(f"Site {site} outside 1..{n_sites}.")
    return 0.5 * (1.0 - float(matrix[2 * site - 2, 2 * site - 1]))


def vacuum_covariance(n_sites: int) -> CovarianceMatrix:
    """Covariance of the Fock vacuum: Γ_{2j-1,2j} = 1 on every site."""
    return CovarianceMatrix(n_sites, np.kron(np.eye(n_sites), PAIR_BLOCK))


def random_covariance(n_sites: int, rng: np.random.Generator, pure: bool = False) -> CovarianceMatrix:
    """
    Haar-random physical covariance O (⊕ ν_j J) Oᵀ.

    Args:
        n_sites: Number of sites.
        rng: Seeded generator.
        pure: Draw ν_j = ±1 instead of ν_j ∈ [-1, 1].

    Returns:
        CovarianceMatrix.
    """
    if pure:
        nu = rng.choice([-1.0, 1.0], size=n_sites)
    else:
        nu = rng.uniform(-1.0, 1.0, size=n_sites)
    block = np.kron(np.diag(nu), PAIR_BLOCK)
    orthogonal = ortho_group.rvs(2 * n_sites, random_state=rng) if n_sites else np.eye(0)
    gamma = orthogonal @ block @ orthogonal.T
    return CovarianceMatrix(n_sites, 0.5 * (gamma - gamma.T))


def hopping_hamiltonian(
    n_sites: int,
    hopping: float,
    chemical_potential: float = 0.0,
    periodic: bool = False,
) -> QuadraticHamiltonian:
    """
    Majorana form of Σ_j -t(a_j†a_{j+1} + h.c.) - μ Σ_j a_j†a_j.

    Args:
        n_sites: Number of sites.
        hopping: Hopping amplitude t.
        chemical_potential: On-site energy μ.
        periodic: Close the chain into a ring (needs N ≥ 3).

    Returns:
        QuadraticHamiltonian with the real antisymmetric h.
    """
    if n_sites < 1:
        raise DimensionError("Hamiltonian needs at least one site.")
    h = np.zeros((2 * n_sites, 2 * n_sites))
    bonds = [(j, j + 1) for j in range(n_sites - 1)]
    if periodic and n_sites >= 3:
        bonds.append((n_sites - 1, 0))
    for left, right in bonds:
        # a_j†a_k + h.c. = (i/2)(c_{2j} c_{2k-1} - c_{2j-1} c_{2k}), 1-based
        h[2 * left + 1, 2 * right] -= hopping
        h[2 * left, 2 * right + 1] += hopping
    for site in range(n_sites):
        h[2 * site, 2 * site + 1] += chemical_potential
    return QuadraticHamiltonian(h - h.T)


def symmetrized(matrix: np.ndarray) -> np.ndarray:
    return 0.5 * (matrix + matrix.T)


def antisymmetrized(matrix: np.ndarray) -> np.ndarray:
    return 0.5 * (matrix - matrix.T)


def ensure_same_size(gamma: np.ndarray, pair: DampingPair) -> None:
    if gamma.shape != pair.x.shape:
        message = f"Covariance shape {gamma.shape} does not match damping matrices {pair.x.shape}."
        log_error(message)
        raise DimensionError(message)
