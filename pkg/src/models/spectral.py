"""
Module: spectral
Purpose: Damping-spectrum decomposition and evolution trajectory dataclasses.
"""

from dataclasses import dataclass, field
from typing import List

import numpy as np

from .majorana import CovarianceMatrix


@dataclass(frozen=True)
class SpectralDecomposition:
    """
    X = Σ_r λ_r |r⟩⟨r| with ascending λ_r; columns of `eigenvectors` are |r⟩.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    zero_indices: tuple[int, ...]

    @property
    def bulk_indices(self) -> tuple[int, ...]:
        zeros = set(self.zero_indices)
        return tuple(index for index in range(len(self.eigenvalues)) if index not in zeros)

    @property
    def zero_basis(self) -> np.ndarray:
        return self.eigenvectors[:, list(self.zero_indices)]

    @property
    def bulk_basis(self) -> np.ndarray:
        return self.eigenvectors[:, list(self.bulk_indices)]

    def reconstruct(self) -> np.ndarray:
        return (self.eigenvectors * self.eigenvalues) @ self.eigenvectors.T


@dataclass
class EvolutionReport:
    """
    Sampled covariance trajectory of one integration run.
    """

    times: List[float]
    states: List[CovarianceMatrix]
    dt: float
    steps: int
    method: str = "rk4"
    metadata: dict = field(default_factory=dict)

    @property
    def final(self) -> CovarianceMatrix:
        return self.states[-1]
