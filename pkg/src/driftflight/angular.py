"""Directions on the unit sphere under the sin-power drift family.

The angular law in dimension d has density proportional to
sin^(2 nu + d - 2) theta_1 ... sin^(2 nu + 1) theta_{d-2} sin^(2 nu) phi
on [0, pi]^(d-2) x [0, 2 pi].  nu = 0 is the uniform law on the sphere;
increasing nu concentrates the azimuth near pi/2 and 3 pi/2.

Sampling is exact inversion, not rejection: each colatitude has
cos theta = 1 - 2 B with B a symmetric Beta variate, and the azimuth is a
[0, pi] variate of the same kind plus a fair reflection coin (the
sin^(2 nu) profile is symmetric about pi).  Every draw consumes a fixed
number of uniforms, which is what makes the batched simulation in
:mod:`driftflight.flight` bit-reproducible replicate by replicate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import betaincinv

__all__ = [
    "AngleVector",
    "angles_to_direction",
    "angular_density",
    "marginal_angular_density",
    "sample_angles",
]

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class AngleVector:
    """One spherical direction in hyperspherical angles.

    ``thetas`` holds the d-2 colatitudes in [0, pi] (empty when d = 2) and
    ``phi`` the azimuth in [0, 2 pi].
    """

    thetas: tuple[float, ...]
    phi: float
    d: int

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("AngleVector requires d >= 2")
        if len(self.thetas) != self.d - 2:
            raise ValueError(
                f"expected {self.d - 2} colatitudes for d={self.d}, "
                f"got {len(self.thetas)}"
            )
        for th in self.thetas:
            if not 0.0 <= th <= math.pi:
                raise ValueError(f"colatitude {th} outside [0, pi]")
        if not 0.0 <= self.phi <= TWO_PI:
            raise ValueError(f"azimuth {self.phi} outside [0, 2 pi]")


def _theta_exponent(d: int, nu: float, j: int) -> float:
    # exponent of sin(theta_j), j = 1 .. d-2
    return 2.0 * nu + d - 1.0 - j


def _theta_beta_param(d: int, nu: float, j: int) -> float:
    # cos(theta_j) = 1 - 2B with B ~ Beta(a, a) gives density prop. to
    # sin^{2a-1}; match 2a - 1 to the sin exponent.
    return 0.5 * (_theta_exponent(d, nu, j) + 1.0)


def _azimuth_beta_param(nu: float) -> float:
    return nu + 0.5


def angular_density(a: AngleVector, nu: float) -> float:
    """Joint density of the d-1 angles of one direction."""
    if nu < 0.0:
        raise ValueError("angular_density requires nu >= 0")
    d = a.d
    log_norm = (
        math.lgamma(nu + 0.5 * d)
        - math.lgamma(nu + 0.5)
        - 0.5 * (d - 1) * math.log(math.pi)
        - math.log(2.0)
    )
    # sin^(2 nu) is read as (sin^2)^nu so non-integer nu stays real and
    # non-negative on (pi, 2 pi); integer nu is unchanged
    prod = abs(math.sin(a.phi)) ** (2.0 * nu)
    for j, th in enumerate(a.thetas, start=1):
        prod *= math.sin(th) ** _theta_exponent(d, nu, j)
    return math.exp(log_norm) * prod


def marginal_angular_density(angles, d: int, m: int, nu: float) -> float:
    """Marginal density of the first m angles of the d-dimensional law.

    For m = d-1 nothing is integrated out and the last entry of ``angles``
    is the azimuth in [0, 2 pi]; for m < d-1 all entries are colatitudes.
    """
    if nu < 0.0:
        raise ValueError("marginal_angular_density requires nu >= 0")
    if not 1 <= m < d:
        raise ValueError(f"requires 1 <= m < d, got m={m}, d={d}")
    angles = [float(v) for v in angles]
    if len(angles) != m:
        raise ValueError(f"expected {m} angles, got {len(angles)}")
    if m == d - 1:
        return angular_density(AngleVector(tuple(angles[:-1]), angles[-1], d), nu)
    for th in angles:
        if not 0.0 <= th <= math.pi:
            raise ValueError(f"colatitude {th} outside [0, pi]")
    log_norm = (
        math.lgamma(nu + 0.5 * d)
        - math.lgamma(nu + 0.5 * (d - m))
        - 0.5 * m * math.log(math.pi)
    )
    prod = 1.0
    for j, th in enumerate(angles, start=1):
        prod *= math.sin(th) ** _theta_exponent(d, nu, j)
    return math.exp(log_norm) * prod


def sample_angles(d: int, nu: float, rng: np.random.Generator) -> AngleVector:
    """Draw one AngleVector; consumes exactly d uniforms from ``rng``."""
    if d < 2:
        raise ValueError("sample_angles requires d >= 2")
    if nu < 0.0:
        raise ValueError("sample_angles requires nu >= 0")
    u = rng.random(d)
    thetas = []
    for j in range(1, d - 1):
        aj = _theta_beta_param(d, nu, j)
        thetas.append(float(np.arccos(1.0 - 2.0 * betaincinv(aj, aj, u[j - 1]))))
    ap = _azimuth_beta_param(nu)
    phi0 = np.arccos(1.0 - 2.0 * betaincinv(ap, ap, u[d - 2]))
    phi = float(np.where(u[d - 1] < 0.5, phi0, TWO_PI - phi0))
    return AngleVector(tuple(thetas), phi, d)


def angles_to_direction(a: AngleVector) -> np.ndarray:
    """Map angles to the unit vector whose last two components carry the
    azimuth: x_d = sin theta_1 ... sin theta_{d-2} sin phi and so on down
    to x_1 = cos theta_1."""
    d = a.d
    if d == 2:
        return np.array([np.cos(a.phi), np.sin(a.phi)], dtype=float)
    th = np.asarray(a.thetas, dtype=float)
    sins = np.sin(th)
    coss = np.cos(th)
    sp = np.cumprod(sins)
    out = np.empty(d, dtype=float)
    out[0] = coss[0]
    for i in range(1, d - 2):
        out[i] = sp[i - 1] * coss[i]
    out[d - 2] = sp[d - 3] * np.cos(a.phi)
    out[d - 1] = sp[d - 3] * np.sin(a.phi)
    return out
