#!/usr/bin/env python3
"""Steering vectors, the Kronecker DFT basis, and the sensed SVD basis.

Walks through the geometry layer: what a UPA steering vector looks like,
why the DFT basis represents off-grid directions poorly, and how the SVD
of a few steering vectors yields a compact orthonormal basis whose rank
collapses under duplicate directions.
"""

import numpy as np

from sensecs import (
    ArrayConfig,
    build_sensed_basis,
    dft_basis,
    projection_residual,
    steering,
)
from sensecs.sensing import AngleEstimate

array = ArrayConfig(8, 8)
print(f"UPA {array.n_v} x {array.n_h} = {array.n_elements} elements, half-wavelength spacing")

a = steering(np.radians(3.0), np.radians(40.0), array)
print(f"steering vector: length {a.size}, ||a||^2 = {np.linalg.norm(a) ** 2:.6f} (= 1/N)")

# DFT basis: unitary, but a generic direction spreads over many columns
ad = dft_basis(array)
err = np.max(np.abs(ad.conj().T @ ad - np.eye(array.n_elements)))
coeffs = np.abs(ad.conj().T @ a)
coeffs_sorted = np.sort(coeffs)[::-1]
captured = np.cumsum(coeffs_sorted**2) / np.sum(coeffs_sorted**2)
k90 = int(np.searchsorted(captured, 0.9) + 1)
print(f"DFT basis unitarity error: {err:.2e}")
print(f"off-grid direction needs {k90} DFT atoms to capture 90% of its energy")

# Sensed basis: the same direction is one basis vector by construction
est = AngleEstimate(theta=np.array([np.radians(3.0)]), phi=np.array([np.radians(40.0)]), method="oracle")
basis = build_sensed_basis(est, array)
print(f"sensed basis from that one direction: rank J = {basis.rank_j}, "
      f"residual of a outside span = {projection_residual(a, basis):.2e}")

# Rank collapses under duplicated directions
dup = AngleEstimate(
    theta=np.radians(np.array([1.0, 1.0, -2.0])),
    phi=np.radians(np.array([20.0, 20.0, -35.0])),
    method="oracle",
)
basis_dup = build_sensed_basis(dup, array)
print(f"three directions with one duplicate: rank J = {basis_dup.rank_j} (duplicates absorbed)")
print(f"singular values: {np.round(basis_dup.singular_values[:3], 6)}")
