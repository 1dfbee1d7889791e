"""Orthonormal sensed sparse basis built from estimated angles via SVD.

The steering matrix of the estimated directions is decomposed as
A_hat = U S V^H; the full N x N unitary U is kept as the recovery basis and
the numerical rank J (relative singular-value cutoff) caps the sparsity of
the coefficient vector: the channel lies in span(U[:, :J]) when the angle
estimates are exact.
"""

from dataclasses import dataclass

import numpy as np

from .arrays import ArrayConfig, steering_matrix
from .sensing import AngleEstimate


@dataclass(eq=False)
class SensedBasis:
    u: np.ndarray  # N x N unitary
    rank_j: int
    singular_values: np.ndarray  # all min(N, M) values, descending

    @property
    def u_active(self) -> np.ndarray:
        """The first J columns: an orthonormal basis of the sensed span."""
        return self.u[:, : self.rank_j]


def build_sensed_basis(est: AngleEstimate, array: ArrayConfig, rank_tol: float = 1e-8) -> SensedBasis:
    """Full SVD of the estimated steering matrix; J counts sigma_i > rank_tol * sigma_1."""
    if est.theta.size < 1:
        raise ValueError("need at least one angle pair")
    if rank_tol < 0:
        raise ValueError("rank_tol must be >= 0")
    a_hat = steering_matrix(est.theta, est.phi, array)
    u, s, _ = np.linalg.svd(a_hat, full_matrices=True)
    rank_j = int(np.count_nonzero(s > rank_tol * s[0]))
    return SensedBasis(u=u, rank_j=rank_j, singular_values=s)


def projection_residual(h: np.ndarray, basis: SensedBasis) -> float:
    """Relative residual of h outside the sensed span, ||h - U_J U_J^H h|| / ||h||."""
    h = np.asarray(h)
    norm = np.linalg.norm(h)
    if norm == 0:
        raise ValueError("channel vector is zero")
    uj = basis.u_active
    return float(np.linalg.norm(h - uj @ (uj.conj().T @ h)) / norm)
