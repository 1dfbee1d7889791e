"""Uniform planar array steering vectors and the Kronecker DFT basis.

Conventions: elevation theta and azimuth phi are radians in (-pi/2, pi/2).
Steering vectors carry the 1/N_v and 1/N_h prefactors of the channel model,
so ||a_v||^2 = 1/N_v and ||a(theta, phi)||^2 = 1/(N_v*N_h). The DFT basis is
unitary (1/sqrt(N) scaling) so it is well conditioned as a CS dictionary.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import dft


@dataclass(frozen=True)
class ArrayConfig:
    """UPA geometry: n_v x n_h elements, spacings as fractions of wavelength."""

    n_v: int
    n_h: int
    spacing_v: float = 0.5
    spacing_h: float = 0.5

    def __post_init__(self):
        if self.n_v < 1 or self.n_h < 1:
            raise ValueError("antenna counts must be >= 1")
        if self.spacing_v <= 0 or self.spacing_h <= 0:
            raise ValueError("element spacing must be > 0")

    @property
    def n_elements(self) -> int:
        return self.n_v * self.n_h


def steering_v(theta: float, cfg: ArrayConfig) -> np.ndarray:
    """Vertical steering vector, entry n = exp(j*2pi*d_v*n*sin(theta)) / N_v."""
    n = np.arange(cfg.n_v)
    return np.exp(2j * np.pi * cfg.spacing_v * n * np.sin(theta)) / cfg.n_v


def steering_h(theta: float, phi: float, cfg: ArrayConfig) -> np.ndarray:
    """Horizontal steering vector, entry n = exp(j*2pi*d_h*n*cos(theta)*sin(phi)) / N_h."""
    n = np.arange(cfg.n_h)
    return np.exp(2j * np.pi * cfg.spacing_h * n * np.cos(theta) * np.sin(phi)) / cfg.n_h


def steering(theta: float, phi: float, cfg: ArrayConfig) -> np.ndarray:
    """Full UPA steering vector a(theta, phi) = a_v(theta) kron a_h(theta, phi)."""
    return np.kron(steering_v(theta, cfg), steering_h(theta, phi, cfg))


def steering_matrix(thetas, phis, cfg: ArrayConfig) -> np.ndarray:
    """Stack steering vectors for the given angle pairs into an N x M matrix."""
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    phis = np.atleast_1d(np.asarray(phis, dtype=float))
    if thetas.shape != phis.shape:
        raise ValueError("theta and phi lists must have equal length")
    return np.column_stack([steering(t, p, cfg) for t, p in zip(thetas, phis)])


def dft_basis(cfg: ArrayConfig) -> np.ndarray:
    """Unitary Kronecker DFT basis A_v kron A_h of size N x N."""
    return np.kron(dft(cfg.n_v, scale="sqrtn"), dft(cfg.n_h, scale="sqrtn"))
