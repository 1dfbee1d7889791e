"""Monostatic echo simulation and 2D MUSIC angle estimation.

The echo of pilot symbol t is y(t) = sum_m beta_m a_m a_m^T x_p(t) + z(t)
(note the plain transpose on the inner steering vector: the same array
transmits and receives). MUSIC scans a rectangular (theta, phi) grid with
unit-normalized steering vectors so the spectrum is scale-free; peaks are
refined by one quadratic fit per axis on the noise-projection values, which
are locally quadratic around a true direction.
"""

import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .arrays import ArrayConfig, steering_matrix


@dataclass(frozen=True)
class AngleGrid:
    """Rectangular MUSIC search grid, bounds and steps in degrees."""

    theta_min_deg: float = -6.0
    theta_max_deg: float = 6.0
    theta_step_deg: float = 0.2
    phi_min_deg: float = -65.0
    phi_max_deg: float = 65.0
    phi_step_deg: float = 0.5

    def __post_init__(self):
        if self.theta_step_deg <= 0 or self.phi_step_deg <= 0:
            raise ValueError("grid steps must be > 0")
        if self.theta_min_deg > self.theta_max_deg or self.phi_min_deg > self.phi_max_deg:
            raise ValueError("grid ranges are empty")

    def theta_axis(self) -> np.ndarray:
        """Grid elevations in radians (stop inclusive)."""
        n = int(round((self.theta_max_deg - self.theta_min_deg) / self.theta_step_deg))
        return np.radians(self.theta_min_deg + self.theta_step_deg * np.arange(n + 1))

    def phi_axis(self) -> np.ndarray:
        """Grid azimuths in radians (stop inclusive)."""
        n = int(round((self.phi_max_deg - self.phi_min_deg) / self.phi_step_deg))
        return np.radians(self.phi_min_deg + self.phi_step_deg * np.arange(n + 1))


@dataclass(eq=False)
class EchoBlock:
    """N x K block of received echoes, one column per pilot symbol."""

    samples: np.ndarray
    sigma_s2: float

    @property
    def n_antennas(self) -> int:
        return self.samples.shape[0]

    @property
    def n_snapshots(self) -> int:
        return self.samples.shape[1]


@dataclass(eq=False)
class AngleEstimate:
    """Estimated (theta, phi) pairs in radians; padded marks grid-fill entries."""

    theta: np.ndarray
    phi: np.ndarray
    method: str
    padded: bool = False

    @property
    def pairs(self):
        return list(zip(self.theta.tolist(), self.phi.tolist()))


@dataclass(eq=False)
class MusicSpectrum:
    """MUSIC surface over the search grid (axes in radians)."""

    theta_rad: np.ndarray
    phi_rad: np.ndarray
    values: np.ndarray  # shape (len(theta_rad), len(phi_rad)), strictly positive

    def to_csv_text(self) -> str:
        lines = ["theta_deg,phi_deg,value"]
        td = np.degrees(self.theta_rad)
        pd = np.degrees(self.phi_rad)
        for i, t in enumerate(td):
            for j, p in enumerate(pd):
                lines.append("%.10g,%.10g,%.10g" % (t, p, self.values[i, j]))
        return "\n".join(lines) + "\n"

    def write_csv(self, path):
        with open(path, "w") as f:
            f.write(self.to_csv_text())


def simulate_echo(scene, pilots, sigma_s2: float, rng, array: ArrayConfig) -> EchoBlock:
    """Received echo block Y for the scene's scatterers under the given pilots."""
    if pilots.n_antennas != array.n_elements:
        raise ValueError("pilot width does not match the array size")
    if sigma_s2 < 0:
        raise ValueError("noise power must be >= 0")
    a = steering_matrix(scene.thetas, scene.phis, array)  # N x M
    sources = scene.betas[:, None] * (a.T @ pilots.entries.T)  # M x K
    y = a @ sources
    if sigma_s2 > 0:
        k = pilots.n_symbols
        noise = (rng.standard_normal((array.n_elements, k)) + 1j * rng.standard_normal((array.n_elements, k)))
        y = y + np.sqrt(sigma_s2 / 2.0) * noise
    return EchoBlock(samples=y, sigma_s2=float(sigma_s2))


def sample_covariance(echo: EchoBlock) -> np.ndarray:
    """R = (1/K) Y Y^H; Hermitian PSD by construction."""
    y = echo.samples
    return (y @ y.conj().T) / echo.n_snapshots


@lru_cache(maxsize=8)
def grid_steering(array: ArrayConfig, grid: AngleGrid) -> np.ndarray:
    """Unit-normalized steering vectors for every grid point, N x (Gt*Gp).

    Cached: the grid is shared read-only across Monte Carlo trials.
    """
    th = grid.theta_axis()
    ph = grid.phi_axis()
    nv, nh = array.n_v, array.n_h
    av = np.exp(2j * np.pi * array.spacing_v * np.outer(np.arange(nv), np.sin(th))) / nv  # nv x Gt
    cs = np.cos(th)[:, None] * np.sin(ph)[None, :]  # Gt x Gp
    ah = np.exp(2j * np.pi * array.spacing_h * np.arange(nh)[:, None, None] * cs[None]) / nh  # nh x Gt x Gp
    g = (av[:, None, :, None] * ah[None, :, :, :]).reshape(nv * nh, th.size * ph.size)
    g /= np.linalg.norm(g, axis=0, keepdims=True)
    g.flags.writeable = False
    return g


def music_spectrum_2d(r: np.ndarray, m: int, grid: AngleGrid, array: ArrayConfig) -> MusicSpectrum:
    """MUSIC pseudo-spectrum 1 / ||E_n^H a(theta, phi)||^2 over the grid.

    E_n spans the N - m smallest eigenvalue directions of the covariance r.
    Raises np.linalg.LinAlgError if the eigendecomposition fails.
    """
    n = r.shape[0]
    if r.shape != (n, n):
        raise ValueError("covariance must be square")
    if not 1 <= m < n:
        raise ValueError(f"need 1 <= m < N, got m={m}, N={n}")
    eigvals, eigvecs = np.linalg.eigh(r)  # ascending
    noise = eigvecs[:, : n - m]
    g = grid_steering(array, grid)
    proj = noise.conj().T @ g
    null = np.einsum("ij,ij->j", proj.conj(), proj).real
    null = np.maximum(null, np.finfo(float).tiny)  # spectrum strictly positive/finite
    th = grid.theta_axis()
    ph = grid.phi_axis()
    values = (1.0 / null).reshape(th.size, ph.size)
    return MusicSpectrum(theta_rad=th, phi_rad=ph, values=values)


def _local_maxima_mask(v: np.ndarray) -> np.ndarray:
    """Strict local maxima against the 8-neighborhood (borders padded with -inf)."""
    p = np.pad(v, 1, constant_values=-np.inf)
    c = p[1:-1, 1:-1]
    mask = np.ones(v.shape, dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            mask &= c > p[1 + di : 1 + di + v.shape[0], 1 + dj : 1 + dj + v.shape[1]]
    return mask


def _parabolic_offset(qm: float, q0: float, qp: float) -> float:
    """Fractional minimum position of a parabola through (-1,qm),(0,q0),(1,qp)."""
    den = qm - 2.0 * q0 + qp
    if den <= 0:
        return 0.0
    return float(np.clip(0.5 * (qm - qp) / den, -1.0, 1.0))


def estimate_angles(echo: EchoBlock, m: int, grid: AngleGrid, array: ArrayConfig) -> AngleEstimate:
    """Pick the m largest MUSIC peaks and refine each by one per-axis quadratic fit.

    If fewer than m strict local maxima exist, the remainder is padded with
    the largest leftover grid values and the result is flagged.
    """
    if echo.n_snapshots < m:
        warnings.warn(
            f"only {echo.n_snapshots} snapshots for {m} sources; MUSIC may be unreliable",
            stacklevel=2,
        )
    spec = music_spectrum_2d(sample_covariance(echo), m, grid, array)
    values = spec.values
    null = 1.0 / values  # noise projection, locally quadratic at true directions
    mask = _local_maxima_mask(values)
    peak_idx = np.argwhere(mask)
    order = np.argsort(-values[mask], kind="stable")
    peaks = [tuple(peak_idx[i]) for i in order[:m]]
    refine = [True] * len(peaks)

    padded = len(peaks) < m
    if padded:
        taken = set(peaks)
        for flat in np.argsort(-values, axis=None, kind="stable"):
            ij = np.unravel_index(flat, values.shape)
            if ij not in taken:
                peaks.append(ij)
                refine.append(False)
                taken.add(ij)
            if len(peaks) == m:
                break

    th_axis, ph_axis = spec.theta_rad, spec.phi_rad
    th_step = np.radians(grid.theta_step_deg)
    ph_step = np.radians(grid.phi_step_deg)
    theta = np.empty(m)
    phi = np.empty(m)
    for i, ((it, ip), do_refine) in enumerate(zip(peaks, refine)):
        dt = dp = 0.0
        if do_refine and 0 < it < values.shape[0] - 1:
            dt = _parabolic_offset(null[it - 1, ip], null[it, ip], null[it + 1, ip])
        if do_refine and 0 < ip < values.shape[1] - 1:
            dp = _parabolic_offset(null[it, ip - 1], null[it, ip], null[it, ip + 1])
        theta[i] = np.clip(th_axis[it] + dt * th_step, th_axis[0], th_axis[-1])
        phi[i] = np.clip(ph_axis[ip] + dp * ph_step, ph_axis[0], ph_axis[-1])
    return AngleEstimate(theta=theta, phi=phi, method="music", padded=padded)


def oracle_angles(scene, sigma_angle: float, rng) -> AngleEstimate:
    """True scene angles plus i.i.d. Gaussian perturbation (test double for MUSIC)."""
    if sigma_angle < 0:
        raise ValueError("sigma_angle must be >= 0")
    m = scene.m_total
    theta = scene.thetas + rng.normal(0.0, sigma_angle, size=m)
    phi = scene.phis + rng.normal(0.0, sigma_angle, size=m)
    return AngleEstimate(theta=theta, phi=phi, method="oracle")
