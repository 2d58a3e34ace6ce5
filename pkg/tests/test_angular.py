import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import dblquad, quad
from scipy.special import betainc
from scipy.stats import chi2

from driftflight.angular import (
    AngleVector,
    angles_to_direction,
    angular_density,
    marginal_angular_density,
    sample_angles,
)
from _oracles import gl_grid

TWO_PI = 2.0 * math.pi


def _rng(seed=0):
    return np.random.default_rng(seed)


# ------------------------------------------------------------- density

def test_density_uniform_circle():
    for phi in (0.0, 1.0, math.pi, 5.0):
        a = AngleVector((), phi, 2)
        assert angular_density(a, 0.0) == pytest.approx(1.0 / TWO_PI, rel=1e-14)


def test_density_drifted_values():
    # nu=1 planar density peaks at 1/pi; three-dimensional peak is 3/(4 pi)
    assert angular_density(AngleVector((), math.pi / 2, 2), 1.0) == pytest.approx(
        1.0 / math.pi, rel=1e-14
    )
    assert angular_density(
        AngleVector((math.pi / 2,), math.pi / 2, 3), 1.0
    ) == pytest.approx(3.0 / (4.0 * math.pi), rel=1e-14)


def test_angle_vector_validation():
    with pytest.raises(ValueError):
        AngleVector((0.5,), 1.0, 2)  # too many colatitudes
    with pytest.raises(ValueError):
        AngleVector((-0.1,), 1.0, 3)
    with pytest.raises(ValueError):
        AngleVector((), 7.0, 2)  # azimuth beyond 2 pi
    with pytest.raises(ValueError):
        angular_density(AngleVector((), 1.0, 2), -0.5)


def test_normalization_d2_d3():
    for nu in (0.0, 0.5, 1.0, 2.0):
        total, _ = quad(
            lambda phi: angular_density(AngleVector((), phi, 2), nu), 0.0, TWO_PI
        )
        assert total == pytest.approx(1.0, abs=1e-8)
        total3, _ = dblquad(
            lambda phi, th: angular_density(AngleVector((th,), phi, 3), nu),
            0.0,
            math.pi,
            0.0,
            TWO_PI,
        )
        assert total3 == pytest.approx(1.0, abs=1e-8)


def test_normalization_d4_tensor_product():
    t1, w1 = gl_grid(80, 0.0, math.pi)
    t2, w2 = gl_grid(80, 0.0, math.pi)
    ph, wp = gl_grid(160, 0.0, TWO_PI)
    for nu in (0.0, 1.0):
        # integrand factorizes over the angles
        f1 = np.array([math.sin(t) ** (2 * nu + 2) for t in t1])
        f2 = np.array([math.sin(t) ** (2 * nu + 1) for t in t2])
        f3 = np.array([math.sin(p) ** (2 * nu) for p in ph])
        norm = math.exp(
            math.lgamma(nu + 2.0)
            - math.lgamma(nu + 0.5)
            - 1.5 * math.log(math.pi)
            - math.log(2.0)
        )
        total = norm * (w1 @ f1) * (w2 @ f2) * (wp @ f3)
        assert total == pytest.approx(1.0, abs=1e-8)


# ------------------------------------------------------------ marginals

def test_marginal_d3_m1_value():
    assert marginal_angular_density([math.pi / 2], 3, 1, 0.0) == pytest.approx(
        0.5, rel=1e-14
    )


def test_marginal_m_equals_d_minus_one_is_full_density():
    rng = _rng(1)
    for _ in range(10):
        th = rng.uniform(0.0, math.pi, size=2)
        phi = rng.uniform(0.0, TWO_PI)
        nu = rng.uniform(0.0, 3.0)
        full = angular_density(AngleVector(tuple(th), phi, 4), nu)
        marg = marginal_angular_density([*th, phi], 4, 3, nu)
        assert marg == pytest.approx(full, rel=1e-13)


def test_marginal_d5_m2_normalizes():
    total, _ = dblquad(
        lambda t2, t1: marginal_angular_density([t1, t2], 5, 2, 1.0),
        0.0,
        math.pi,
        0.0,
        math.pi,
    )
    assert total == pytest.approx(1.0, abs=1e-8)


def test_marginal_domain_errors():
    with pytest.raises(ValueError):
        marginal_angular_density([0.5, 0.5, 0.5], 3, 3, 0.0)
    with pytest.raises(ValueError):
        marginal_angular_density([0.5], 3, 2, 0.0)  # length mismatch
    with pytest.raises(ValueError):
        marginal_angular_density([4.0], 4, 1, 0.0)  # colatitude out of range


# ------------------------------------------------------------ directions

def test_direction_axis_cases():
    np.testing.assert_allclose(
        angles_to_direction(AngleVector((), 0.0, 2)), [1.0, 0.0], atol=1e-15
    )
    np.testing.assert_allclose(
        angles_to_direction(AngleVector((math.pi / 2,), math.pi / 2, 3)),
        [0.0, 0.0, 1.0],
        atol=1e-15,
    )


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_direction_unit_norm(data):
    d = data.draw(st.integers(min_value=2, max_value=6))
    thetas = tuple(
        data.draw(st.floats(min_value=0.0, max_value=math.pi)) for _ in range(d - 2)
    )
    phi = data.draw(st.floats(min_value=0.0, max_value=TWO_PI))
    vec = angles_to_direction(AngleVector(thetas, phi, d))
    assert abs(np.linalg.norm(vec) - 1.0) <= 1e-12


# -------------------------------------------------------------- sampler

def _sample_many(d, nu, count, seed):
    rng = _rng(seed)
    return [sample_angles(d, nu, rng) for _ in range(count)]


def test_sampler_uniform_circle_chi_square():
    draws = _sample_many(2, 0.0, 100_000, 11)
    phis = np.array([a.phi for a in draws])
    counts, _ = np.histogram(phis, bins=36, range=(0.0, TWO_PI))
    expected = len(phis) / 36.0
    stat = float(((counts - expected) ** 2 / expected).sum())
    assert stat < chi2.ppf(1.0 - 0.001, 35)


def test_sampler_sin2_mean_matches_quadrature():
    # E[sin^2 phi] under the nu=1 planar law, oracle by quadrature
    oracle, _ = quad(lambda p: math.sin(p) ** 4 / math.pi, 0.0, TWO_PI)
    draws = _sample_many(2, 1.0, 100_000, 12)
    vals = np.sin([a.phi for a in draws]) ** 2
    se = vals.std(ddof=1) / math.sqrt(len(vals))
    assert abs(vals.mean() - oracle) <= 3.0 * se
    assert oracle == pytest.approx(0.75, rel=1e-12)


def test_sampler_cos2_colatitude_matches_quadrature():
    # E[cos^2 theta_1] for d=3, nu=1: density prop. to sin^3
    num, _ = quad(lambda t: math.cos(t) ** 2 * math.sin(t) ** 3, 0.0, math.pi)
    den, _ = quad(lambda t: math.sin(t) ** 3, 0.0, math.pi)
    oracle = num / den
    assert oracle == pytest.approx(0.2, rel=1e-12)
    draws = _sample_many(3, 1.0, 100_000, 13)
    vals = np.cos([a.thetas[0] for a in draws]) ** 2
    se = vals.std(ddof=1) / math.sqrt(len(vals))
    assert abs(vals.mean() - oracle) <= 3.0 * se


def _theta_cdf(d, nu, j, theta):
    a = 0.5 * (2.0 * nu + d - j)
    return betainc(a, a, 0.5 * (1.0 - np.cos(theta)))


def _phi_cdf(nu, phi):
    a = nu + 0.5
    phi = np.asarray(phi)
    half = 0.5 * betainc(a, a, 0.5 * (1.0 - np.cos(np.minimum(phi, math.pi))))
    upper = 1.0 - 0.5 * betainc(
        a, a, 0.5 * (1.0 - np.cos(np.maximum(TWO_PI - phi, 0.0)))
    )
    return np.where(phi <= math.pi, half, upper)


def _ks(sorted_vals, cdf_vals):
    n = len(sorted_vals)
    grid = np.arange(n + 1) / n
    return max(np.max(cdf_vals - grid[:-1]), np.max(grid[1:] - cdf_vals))


@pytest.mark.parametrize("d,nu", [(2, 0.0), (3, 1.0), (4, 2.0)])
def test_sampler_marginal_ks(d, nu):
    draws = _sample_many(d, nu, 100_000, 14 + d)
    for j in range(1, d - 1):
        vals = np.sort([a.thetas[j - 1] for a in draws])
        assert _ks(vals, _theta_cdf(d, nu, j, vals)) < 0.01
    phis = np.sort([a.phi for a in draws])
    assert _ks(phis, _phi_cdf(nu, phis)) < 0.01


def test_sampler_uniform_sphere_moments():
    draws = _sample_many(3, 0.0, 40_000, 15)
    dirs = np.array([angles_to_direction(a) for a in draws])
    n = len(dirs)
    for i in range(3):
        col = dirs[:, i]
        assert abs(col.mean()) <= 3.0 * col.std(ddof=1) / math.sqrt(n)
        sq = col**2
        assert abs(sq.mean() - 1.0 / 3.0) <= 3.0 * sq.std(ddof=1) / math.sqrt(n)


def test_drift_concentration_increases_with_nu():
    masses = []
    for seed, nu in enumerate((0.0, 1.0, 4.0)):
        draws = _sample_many(2, nu, 40_000, 20 + seed)
        phis = np.array([a.phi for a in draws])
        near = (np.abs(phis - math.pi / 2) < 0.3) | (
            np.abs(phis - 3 * math.pi / 2) < 0.3
        )
        masses.append(near.mean())
    assert masses[0] < masses[1] < masses[2]


def test_sampler_domain_errors():
    with pytest.raises(ValueError):
        sample_angles(1, 0.0, _rng())
    with pytest.raises(ValueError):
        sample_angles(3, -1.0, _rng())
