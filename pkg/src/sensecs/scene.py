"""Random scatterer scenes and the sparse multipath downlink channel.

A scene holds M scatterers around the BS; the first m_comm of them carry a
nonzero communication coefficient alpha, all carry a sensing (echo)
coefficient beta. One scatterer position (cu_index, default the first)
hosts the single-antenna user, whose path is the one-hop direct link.

Geometry convention: a departure direction (theta, phi) maps to the unit
vector u = [cos(theta)sin(phi), cos(theta)cos(phi), -sin(theta)], i.e.
elevation is measured from the horizontal plane and positive theta points
below it (the BS sits at height bs_position[2]).
"""

from dataclasses import dataclass

import numpy as np

from .arrays import ArrayConfig, steering_matrix


@dataclass(frozen=True)
class SceneConfig:
    """Scatterer priors and path-loss model parameters."""

    m_total: int = 6
    m_comm: int = 4
    theta_range_deg: tuple = (-5.0, 5.0)
    phi_range_deg: tuple = (-60.0, 60.0)
    dist_range: tuple = (80.0, 120.0)
    rho0_db: float = -40.0
    bs_position: tuple = (0.0, 0.0, 10.0)
    cu_index: int = 0

    def __post_init__(self):
        if self.m_total < 1:
            raise ValueError("m_total must be >= 1")
        if not 1 <= self.m_comm <= self.m_total:
            raise ValueError("need 1 <= m_comm <= m_total")
        for name in ("theta_range_deg", "phi_range_deg", "dist_range"):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise ValueError(f"{name} is empty: ({lo}, {hi})")
        if self.dist_range[0] <= 0:
            raise ValueError("distances must be positive")
        if not 0 <= self.cu_index < self.m_comm:
            raise ValueError("cu_index must point at a communication scatterer")
        if len(self.bs_position) != 3:
            raise ValueError("bs_position must be a 3-vector")

    @property
    def rho0(self) -> float:
        """Reference path loss at 1 m, linear scale."""
        return 10.0 ** (self.rho0_db / 10.0)


@dataclass(eq=False)
class Scatterer:
    theta: float  # elevation, radians
    phi: float  # azimuth, radians
    dist_bs: float  # meters
    position: np.ndarray  # (3,) meters
    alpha: complex  # communication coefficient, 0 outside the comm set
    beta: complex  # sensing (echo) coefficient


@dataclass(eq=False)
class Scene:
    scatterers: list
    cu_index: int
    channel: np.ndarray  # cached h = sum_m alpha_m a(theta_m, phi_m)

    @property
    def m_total(self) -> int:
        return len(self.scatterers)

    @property
    def cu_position(self) -> np.ndarray:
        return self.scatterers[self.cu_index].position

    @property
    def thetas(self) -> np.ndarray:
        return np.array([s.theta for s in self.scatterers])

    @property
    def phis(self) -> np.ndarray:
        return np.array([s.phi for s in self.scatterers])

    @property
    def alphas(self) -> np.ndarray:
        return np.array([s.alpha for s in self.scatterers])

    @property
    def betas(self) -> np.ndarray:
        return np.array([s.beta for s in self.scatterers])

    def to_record_text(self) -> str:
        """Plain-text dump for debugging / reproducibility checks."""
        lines = [
            f"scene m_total={self.m_total} cu_index={self.cu_index}",
            "m theta_deg phi_deg dist_m alpha_re alpha_im beta_re beta_im",
        ]
        for m, s in enumerate(self.scatterers):
            lines.append(
                "%d %.12g %.12g %.12g %.12g %.12g %.12g %.12g"
                % (
                    m,
                    np.degrees(s.theta),
                    np.degrees(s.phi),
                    s.dist_bs,
                    s.alpha.real,
                    s.alpha.imag,
                    s.beta.real,
                    s.beta.imag,
                )
            )
        return "\n".join(lines) + "\n"


def direction(theta, phi) -> np.ndarray:
    """Unit propagation direction(s) for elevation/azimuth in radians."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    return np.stack(
        [np.cos(theta) * np.sin(phi), np.cos(theta) * np.cos(phi), -np.sin(theta)],
        axis=-1,
    )


def sense_gain(d: float, rho0: float, rng) -> complex:
    """Echo coefficient: |beta| = sqrt(rho0 * gamma * d^-4), phase ~ U[-pi, pi].

    gamma is the magnitude of a standard real Gaussian draw (reflection
    strength); the two d^-2 factors account for the out-and-back hops.
    """
    if d <= 0:
        raise ValueError("distance must be positive")
    gamma = abs(rng.standard_normal())
    phase = rng.uniform(-np.pi, np.pi)
    return np.sqrt(rho0 * gamma) / d**2 * np.exp(1j * phase)


def comm_gain(dist_bs: float, dist_to_cu, rho0: float, rng) -> complex:
    """Communication coefficient for one path, phase ~ U[-pi, pi].

    Two-hop (BS -> scatterer -> CU): |alpha| = sqrt(rho0 * d^-2 * delta * r^-2)
    with delta the magnitude of a standard real Gaussian. Pass dist_to_cu=None
    for the direct one-hop path hosted by the CU: |alpha| = sqrt(rho0 * d^-2).
    """
    if dist_bs <= 0:
        raise ValueError("distance must be positive")
    if dist_to_cu is None:
        mag = np.sqrt(rho0) / dist_bs
    else:
        if dist_to_cu <= 0:
            raise ValueError("scatterer coincides with the CU (r = 0)")
        delta = abs(rng.standard_normal())
        mag = np.sqrt(rho0 * delta) / (dist_bs * dist_to_cu)
    return mag * np.exp(1j * rng.uniform(-np.pi, np.pi))


def draw_scene(cfg: SceneConfig, array: ArrayConfig, rng) -> Scene:
    """Draw a random scene and synthesize its downlink channel.

    Draw order is fixed (thetas, phis, distances, then per-scatterer beta,
    then per-path alpha) so a given (seed, config) reproduces bit-identically.
    """
    m = cfg.m_total
    theta = rng.uniform(*np.radians(cfg.theta_range_deg), size=m)
    phi = rng.uniform(*np.radians(cfg.phi_range_deg), size=m)
    dist = rng.uniform(*cfg.dist_range, size=m)
    positions = np.asarray(cfg.bs_position, dtype=float) + dist[:, None] * direction(theta, phi)
    cu_pos = positions[cfg.cu_index]

    betas = np.array([sense_gain(dist[i], cfg.rho0, rng) for i in range(m)])
    alphas = np.zeros(m, dtype=complex)
    for i in range(cfg.m_comm):
        if i == cfg.cu_index:
            alphas[i] = comm_gain(dist[i], None, cfg.rho0, rng)
        else:
            r = float(np.linalg.norm(positions[i] - cu_pos))
            alphas[i] = comm_gain(dist[i], r, cfg.rho0, rng)

    channel = steering_matrix(theta, phi, array) @ alphas
    scatterers = [
        Scatterer(float(theta[i]), float(phi[i]), float(dist[i]), positions[i], complex(alphas[i]), complex(betas[i]))
        for i in range(m)
    ]
    return Scene(scatterers=scatterers, cu_index=cfg.cu_index, channel=channel)
