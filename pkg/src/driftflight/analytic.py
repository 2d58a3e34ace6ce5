"""Closed-form laws of the drifted random flight.

Projection results (any nu >= 0): characteristic function, density,
radial density/CDF/moments of the first m < d coordinates, all driven by
the half order K = (n+1)(2 nu + d - 1)/2.

Full-flight results (nu = 1 only): characteristic function and density
in dimension d, as alternating Bessel/polynomial sums indexed by the
falling-factorial coefficient tables, plus the fully explicit n = 1, 2
forms and their radial versions.

A fractional-Poisson mixture randomizes the number of direction changes.
Without a factorial correction the natural weights do not sum to one
under the Wright-type Mittag-Leffler normalizer used here; the default
evaluation therefore includes an n! in the denominator, which normalizes
the pmf exactly, and ``uncorrected=True`` exposes the raw variant for
comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from .flight import FlightParams
from .specfun import bessel_j_ratio, falling_factorial_coeffs

__all__ = [
    "MixtureParams",
    "cdf_radial_projection",
    "cf_nu1",
    "cf_projection",
    "density_nu1",
    "density_nu1_closed",
    "density_projection",
    "fractional_poisson_pmf",
    "mixture_tail_bound",
    "radial_density_nu1",
    "radial_density_projection",
    "radial_moment",
    "unconditional_density_projection",
]

_LN_PI = math.log(math.pi)
_LN_2 = math.log(2.0)


def _half_order(p: FlightParams) -> float:
    return 0.5 * (p.n + 1) * (2.0 * p.nu + p.d - 1.0)


def _require_n(p: FlightParams) -> None:
    if p.n < 1:
        raise ValueError("this law requires n >= 1 direction changes")


def _require_nu1(p: FlightParams) -> None:
    if abs(p.nu - 1.0) > 1e-12:
        raise ValueError("this law is only available for nu = 1")


@lru_cache(maxsize=None)
def _coeff_row(n: int) -> tuple[int, ...]:
    return falling_factorial_coeffs(n).coeffs


# ----------------------------------------------------------------------
# projected flight, any nu
# ----------------------------------------------------------------------

def cf_projection(p: FlightParams, alpha) -> float:
    """Characteristic function of the projected flight at frequency alpha.

    Depends on alpha only through its norm; alpha may have any length.
    Real-valued, equal to 1 at alpha = 0.
    """
    _require_n(p)
    alpha = np.atleast_1d(np.asarray(alpha, dtype=float))
    w = p.c * p.t * float(np.linalg.norm(alpha))
    if w == 0.0:
        return 1.0
    K = _half_order(p)
    mu = K - 0.5
    return math.exp(mu * _LN_2 + math.lgamma(K + 0.5)) * bessel_j_ratio(mu, w)


def _density_projection_radial(p: FlightParams, r) -> np.ndarray:
    """Projected density evaluated at any point of norm r (isotropic law)."""
    r = np.asarray(r, dtype=float)
    ct = p.c * p.t
    K = _half_order(p)
    m = p.m
    q = K - 0.5 * (m + 1)
    out = np.zeros(r.shape)
    inside = (r >= 0.0) & (r < ct)
    ri = r[inside]
    log_val = (
        math.lgamma(K + 0.5)
        - math.lgamma(K - 0.5 * m + 0.5)
        - 0.5 * m * _LN_PI
        - (2.0 * K - 1.0) * math.log(ct)
        + q * np.log(ct * ct - ri * ri)
    )
    out[inside] = np.exp(log_val)
    return out


def density_projection(p: FlightParams, x) -> float:
    """Density of the m-dimensional projection at the point x (m < d).

    Zero outside the open ball of radius c t.
    """
    _require_n(p)
    if p.m >= p.d:
        raise ValueError("density_projection requires m < d")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (p.m,):
        raise ValueError(f"expected a point of length m={p.m}, got {x.shape}")
    r = float(np.linalg.norm(x))
    if r >= p.c * p.t:
        return 0.0
    return float(_density_projection_radial(p, np.array([r]))[0])


def _radial_pdf_projection(p: FlightParams, r) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    ct = p.c * p.t
    K = _half_order(p)
    m = p.m
    q = K - 0.5 * (m + 1)
    out = np.zeros(r.shape)
    inside = (r > 0.0) & (r < ct)
    ri = r[inside]
    log_val = (
        _LN_2
        + math.lgamma(K + 0.5)
        - math.lgamma(K - 0.5 * m + 0.5)
        - math.lgamma(0.5 * m)
        - (2.0 * K - 1.0) * math.log(ct)
        + (m - 1.0) * np.log(ri)
        + q * np.log(ct * ct - ri * ri)
    )
    out[inside] = np.exp(log_val)
    return out


def radial_density_projection(p: FlightParams, r: float) -> float:
    """Density of the radius of the projection, supported on (0, c t)."""
    _require_n(p)
    if p.m >= p.d:
        raise ValueError("radial_density_projection requires m < d")
    return float(_radial_pdf_projection(p, np.array([float(r)]))[0])


def _cdf_radial_vec(p: FlightParams, r) -> np.ndarray:
    # regularized incomplete beta form of the radial CDF; equals the
    # public branch-based evaluation (asserted in the test suite)
    from scipy.special import betainc

    r = np.asarray(r, dtype=float)
    ct = p.c * p.t
    K = _half_order(p)
    q = K - 0.5 * (p.m + 1)
    y = np.clip(r / ct, 0.0, 1.0) ** 2
    return betainc(0.5 * p.m, q + 1.0, y)


def cdf_radial_projection(p: FlightParams, r: float) -> float:
    """CDF of the projected radius.

    When q = K - (m+1)/2 is a non-negative integer the exact binomial
    finite sum is used; otherwise the radial density is integrated
    adaptively (substituting r = c t sin u to absorb the boundary
    singularity) to 1e-9.
    """
    _require_n(p)
    if p.m >= p.d:
        raise ValueError("cdf_radial_projection requires m < d")
    r = float(r)
    ct = p.c * p.t
    if r <= 0.0:
        return 0.0
    if r >= ct:
        return 1.0
    K = _half_order(p)
    m = p.m
    q = K - 0.5 * (m + 1)
    if abs(q - round(q)) <= 1e-9 and round(q) >= 0:
        qi = int(round(q))
        pref = math.exp(
            math.lgamma(q + 0.5 * m + 1.0)
            - math.lgamma(q + 1.0)
            - math.lgamma(0.5 * m)
        )
        s = sum(
            (-1) ** k * math.comb(qi, k) * (r / ct) ** (2 * k + m) / (k + 0.5 * m)
            for k in range(qi + 1)
        )
        return min(max(pref * s, 0.0), 1.0)
    upper = math.asin(r / ct)
    val, _ = quad(
        lambda u: float(_radial_pdf_projection(p, np.array([ct * math.sin(u)]))[0])
        * ct
        * math.cos(u),
        0.0,
        upper,
        epsabs=1e-12,
        epsrel=1e-11,
        limit=200,
    )
    return min(max(val, 0.0), 1.0)


def radial_moment(p: FlightParams, order: int) -> float:
    """E[R^order] for the projected radius; strictly below (c t)^order."""
    _require_n(p)
    if order < 1:
        raise ValueError("radial_moment requires order >= 1")
    K = _half_order(p)
    m = p.m
    return math.exp(
        math.lgamma(K + 0.5)
        + math.lgamma(0.5 * (order + m))
        - math.lgamma(K + 0.5 * (order + 1))
        - math.lgamma(0.5 * m)
    ) * (p.c * p.t) ** order


# ----------------------------------------------------------------------
# full flight, nu = 1
# ----------------------------------------------------------------------

def cf_nu1(p: FlightParams, alpha) -> float:
    """Characteristic function of the full d-dimensional flight at nu = 1.

    Alternating sum of n+2 Bessel terms; the dependence on the direction
    of alpha enters only through alpha_d^2 / ||alpha||^2.  Equals 1 at
    alpha = 0 (series limit).
    """
    _require_nu1(p)
    _require_n(p)
    alpha = np.atleast_1d(np.asarray(alpha, dtype=float))
    if alpha.shape != (p.d,):
        raise ValueError(f"expected a frequency vector of length d={p.d}")
    rho = float(np.linalg.norm(alpha))
    if rho == 0.0:
        return 1.0
    d, n = p.d, p.n
    ratio = float(alpha[-1]) ** 2 / rho**2
    w = p.c * p.t * rho
    M = (n + 1) * (d + 1)
    pref = math.exp(0.5 * _LN_PI + math.lgamma(M) - 0.5 * (M - 1) * _LN_2)
    total = 0.0
    for j in range(n + 2):
        nj = n + 1 - j
        mu_j = 0.5 * ((n + 1) * (d + 3) - (2 * j + 1))
        total += (
            (-1.0) ** nj
            * math.comb(n + 1, j)
            * (ratio * 0.5 * (d + 1)) ** nj
            * math.exp(-math.lgamma(0.5 * (n + 1) * (d + 3) - j))
            * bessel_j_ratio(mu_j, w)
            * w ** (2 * nj)
        )
    return pref * total


def _density_nu1_core(p: FlightParams, rho2, xd2) -> np.ndarray:
    rho2 = np.asarray(rho2, dtype=float)
    xd2 = np.asarray(xd2, dtype=float)
    d, n = p.d, p.n
    ct = p.c * p.t
    out = np.zeros(rho2.shape)
    inside = rho2 < ct * ct
    Q = ct * ct - rho2[inside]
    xx = xd2[inside]
    M = (n + 1) * (d + 1)
    pref = math.exp(
        math.lgamma(M) - 0.5 * (d - 1) * _LN_PI - (M - 1) * math.log(2.0 * ct)
    )
    total = np.zeros(Q.shape)
    for j in range(n + 2):
        nj = n + 1 - j
        a_row = _coeff_row(nj)
        cj = (
            (-1.0) ** nj
            * math.comb(n + 1, j)
            * (0.5 * (d + 1)) ** nj
            * math.exp(-math.lgamma(0.5 * (n + 1) * (d + 3) - j))
        )
        inner = np.zeros(Q.shape)
        for k in range(nj + 1):
            e = 0.5 * n * (d + 1) - k
            inner += (
                (-1.0) ** k
                * a_row[k]
                * math.exp(-math.lgamma(e + 1.0))
                * xx**k
                * Q**e
            )
        total += cj * inner
    out[inside] = pref * total
    return out


def density_nu1(p: FlightParams, x) -> float:
    """Density of the full flight at nu = 1, any n >= 1.

    A double sum over the falling-factorial coefficient tables; even in
    x_d and invariant under rotations fixing the x_d axis.
    """
    _require_nu1(p)
    _require_n(p)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (p.d,):
        raise ValueError(f"expected a point of length d={p.d}")
    rho2 = float(x @ x)
    if rho2 >= (p.c * p.t) ** 2:
        return 0.0
    return float(_density_nu1_core(p, np.array([rho2]), np.array([x[-1] ** 2]))[0])


def _density_nu1_closed_core(p: FlightParams, rho2, xd2) -> np.ndarray:
    rho2 = np.asarray(rho2, dtype=float)
    xd2 = np.asarray(xd2, dtype=float)
    d, n = p.d, p.n
    ct = p.c * p.t
    out = np.zeros(rho2.shape)
    inside = rho2 < ct * ct
    Q = ct * ct - rho2[inside]
    xx = xd2[inside]
    if n == 1:
        pref = math.exp(
            math.lgamma(2.0 * (d + 1))
            - 0.5 * (d - 1) * _LN_PI
            - (2 * d + 1) * math.log(2.0 * ct)
            - math.log(d + 2.0)
            - math.lgamma(d + 1.0)
            - math.lgamma(0.5 * (d - 1))
        )
        bracket = (
            3.0 / (d - 1) * Q ** (0.5 * (d + 1))
            - 2.0 * xx * Q ** (0.5 * (d - 1))
            + (d + 1) * xx**2 * Q ** (0.5 * (d - 3))
        )
    else:
        pref = math.exp(
            math.lgamma(3.0 * d + 3.0)
            + math.log(d + 1.0)
            - 0.5 * (d - 1) * _LN_PI
            - (3 * d + 2) * math.log(2.0 * ct)
            - math.lgamma(d - 1.0)
            - math.lgamma(1.5 * (d + 3) - 3.0)
            - math.log((3.0 * d + 7) * (3.0 * d + 5))
        )
        bracket = (
            4.0 * (d + 4) / ((d + 1) * d * (d - 1)) * Q ** (d + 1)
            + 2.0 * (6 * d * d + 6 * d + 8) / ((d + 1) * d * (d - 1)) * xx * Q**d
            - 8.0 * xx**2 * Q ** (d - 1)
            + 8.0 / 3.0 * (d + 1) * xx**3 * Q ** (d - 2)
        )
    out[inside] = pref * bracket
    return out


def density_nu1_closed(p: FlightParams, x) -> float:
    """Fully explicit nu = 1 density, available for n = 1 and n = 2 only."""
    _require_nu1(p)
    if p.n not in (1, 2):
        raise ValueError("density_nu1_closed is only available for n in {1, 2}")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (p.d,):
        raise ValueError(f"expected a point of length d={p.d}")
    rho2 = float(x @ x)
    if rho2 >= (p.c * p.t) ** 2:
        return 0.0
    return float(
        _density_nu1_closed_core(p, np.array([rho2]), np.array([x[-1] ** 2]))[0]
    )


def _radial_nu1_core(p: FlightParams, r) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    d, n = p.d, p.n
    ct = p.c * p.t
    out = np.zeros(r.shape)
    inside = (r > 0.0) & (r < ct)
    ri = r[inside]
    Q = ct * ct - ri * ri
    if n == 1:
        pref = 2.0 * math.exp(
            math.lgamma(2.0 * (d + 1))
            + 0.5 * _LN_PI
            - (2 * d + 1) * math.log(2.0 * ct)
            - math.log(d + 2.0)
            - math.lgamma(d + 1.0)
            - math.lgamma(0.5 * (d - 1))
            - math.lgamma(0.5 * d)
        )
        bracket = (
            3.0 / (d - 1) * ri ** (d - 1) * Q ** (0.5 * (d + 1))
            - 2.0 / d * ri ** (d + 1) * Q ** (0.5 * (d - 1))
            + 3.0 * (d + 1) / (d * (d + 2)) * ri ** (d + 3) * Q ** (0.5 * (d - 3))
        )
    else:
        pref = 2.0 * math.exp(
            math.lgamma(3.0 * d + 3.0)
            + math.log(d + 1.0)
            + 0.5 * _LN_PI
            - (3 * d + 2) * math.log(2.0 * ct)
            - math.lgamma(d - 1.0)
            - math.lgamma(1.5 * (d + 3) - 3.0)
            - math.lgamma(0.5 * d)
            - math.log((3.0 * d + 7) * (3.0 * d + 5))
        )
        bracket = (
            4.0 * (d + 4) / ((d + 1) * d * (d - 1)) * ri ** (d - 1) * Q ** (d + 1)
            + 2.0 * (6 * d * d + 6 * d + 8) / ((d + 1) * d * d * (d - 1))
            * ri ** (d + 1)
            * Q**d
            - 24.0 / (d * (d + 2)) * ri ** (d + 3) * Q ** (d - 1)
            + 40.0 * (d + 1) / (d * (d + 2) * (d + 4)) * ri ** (d + 5) * Q ** (d - 2)
        )
    out[inside] = pref * bracket
    return out


def radial_density_nu1(p: FlightParams, r: float) -> float:
    """Radius density of the full nu = 1 flight for n in {1, 2}."""
    _require_nu1(p)
    if p.n not in (1, 2):
        raise ValueError("radial_density_nu1 is only available for n in {1, 2}")
    return float(_radial_nu1_core(p, np.array([float(r)]))[0])


# ----------------------------------------------------------------------
# fractional-Poisson mixture over the number of direction changes
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class MixtureParams:
    """Rate lam of the counting process, base flight parameters (its n is
    ignored) and the truncation index of the mixture sum."""

    lam: float
    base: FlightParams
    n_max: int = 50

    def __post_init__(self):
        if self.lam <= 0.0:
            raise ValueError("MixtureParams requires lam > 0")
        if self.n_max < 1:
            raise ValueError("MixtureParams requires n_max >= 1")


def fractional_poisson_pmf(
    mp: MixtureParams, n: int, uncorrected: bool = False
) -> float:
    """Probability of n direction changes on [0, t].

    The default includes the n! correction that makes the weights sum to
    one exactly under the Wright-type Mittag-Leffler normalizer; the
    uncorrected variant omits it and demonstrably does not normalize.
    """
    if n < 0:
        raise ValueError("fractional_poisson_pmf requires n >= 0")
    from .specfun import mittag_leffler_paper

    d, nu, t = mp.base.d, mp.base.nu, mp.base.t
    lam_t = mp.lam * t
    ml = mittag_leffler_paper(nu + 0.5 * (d - 1), nu + 0.5 * d, lam_t)
    log_num = n * math.log(lam_t) if n > 0 else 0.0
    log_den = math.lgamma(0.5 * (n + 1) * (2.0 * nu + d - 1.0) + 0.5)
    if not uncorrected:
        log_den += math.lgamma(n + 1.0)
    return math.exp(log_num - log_den) / ml


def unconditional_density_projection(mp: MixtureParams, x) -> float:
    """Projected density with the number of changes mixed over n >= 1.

    The conditional laws need n >= 1, so the weights are renormalized over
    n >= 1; the sum is truncated at n_max (see :func:`mixture_tail_bound`).
    """
    base = mp.base
    if base.m >= base.d:
        raise ValueError("unconditional_density_projection requires m < d")
    mass_positive = 1.0 - fractional_poisson_pmf(mp, 0)
    total = 0.0
    for n in range(1, mp.n_max + 1):
        w = fractional_poisson_pmf(mp, n) / mass_positive
        total += w * density_projection(replace(base, n=n), x)
    return total


def mixture_tail_bound(mp: MixtureParams) -> float:
    """Upper bound on the density mass dropped by truncating at n_max.

    Bounds sum_{n > n_max} w_n * sup_x p_n by a geometric comparison at
    the first omitted term (the terms decay factorially in n).
    """
    base = mp.base

    def term(n: int) -> float:
        pn = replace(base, n=n)
        if _half_order(pn) - 0.5 * (base.m + 1) <= 0.0:
            raise RuntimeError(
                "n_max too small: omitted conditional densities are unbounded"
            )
        w = fractional_poisson_pmf(mp, n) / mass_positive
        # with a positive boundary exponent the conditional density peaks
        # at the origin, so this is w_n * sup_x p_n
        return w * density_projection(pn, np.zeros(base.m))

    mass_positive = 1.0 - fractional_poisson_pmf(mp, 0)
    b1 = term(mp.n_max + 1)
    b2 = term(mp.n_max + 2)
    if b1 == 0.0:
        return 0.0
    r = b2 / b1
    if r >= 0.5:
        raise RuntimeError("mixture truncation index too small for a tail bound")
    return 2.0 * b1 / (1.0 - r)
