import numpy as np
import pytest
import scipy.integrate

from curvedual.drive import profile_from_samples
from curvedual.geometry import (
    ChartDirection,
    ConformalChart,
    CurvatureMethod,
    TorusParams,
    cumulative_integral,
    curvature_discrepancy,
    curved_hamiltonian,
    curved_measure_weights,
    forward_chart,
    gauss_curvature,
    resample_to_uniform_z,
    torus_chart,
    torus_drive,
    torus_gauss_curvature,
    torus_mean_curvature,
    torus_theta_of_u,
    torus_u_of_theta,
    torus_u_period,
)
from curvedual.grid import DIRICHLET, grid_1d


def test_cumulative_integral_spectral_exact():
    g = grid_1d(64, 2 * np.pi, spectral=True)
    x = g.axis(0)
    out = cumulative_integral(np.cos(3 * x) + 2.0, g)
    assert np.allclose(out, np.sin(3 * x) / 3.0 + 2.0 * x, atol=1e-12)


def test_cumulative_integral_trapezoid_path():
    g = grid_1d(4097, 1.0, bc=DIRICHLET)
    x = g.axis(0)
    out = cumulative_integral(x**2, g)
    assert np.allclose(out, x**3 / 3.0, atol=1e-7)


def test_forward_chart_flat_profile_is_identity():
    g = grid_1d(64, 2 * np.pi, spectral=True)
    p = profile_from_samples(g, np.zeros(64))
    chart = forward_chart(p, 1.0)
    assert np.allclose(chart.z_nodes, g.axis(0), atol=1e-14)
    assert np.allclose(chart.kappa_at_z, 1.0)
    assert np.isclose(chart.z_period, 2 * np.pi)


def test_forward_chart_consistency_and_period():
    g = grid_1d(256, 2 * np.pi, spectral=True)
    x = g.axis(0)
    gbar = 0.2 * np.sin(x)
    p = profile_from_samples(g, gbar)
    fbar = 0.8
    chart = forward_chart(p, fbar)
    assert np.allclose(chart.kappa_at_z, np.exp(4 * fbar * gbar))
    assert chart.consistency_residual() < 1e-4  # np.gradient is only 2nd order
    # z period equals the exact integral of exp(2 fbar gbar) over one x-period
    exact = scipy.integrate.quad(
        lambda t: np.exp(2 * fbar * 0.2 * np.sin(t)), 0, 2 * np.pi, limit=200
    )[0]
    assert np.isclose(chart.z_period, exact, atol=1e-12)


def test_chart_curvature_against_closed_form():
    # gbar = a sin x gives K = 2 fbar (-a sin x - 2 fbar a^2 cos^2 x)
    g = grid_1d(256, 2 * np.pi, spectral=True)
    x = g.axis(0)
    a, fbar = 0.15, 0.7
    p = profile_from_samples(g, a * np.sin(x))
    chart = forward_chart(p, fbar)
    k = gauss_curvature(chart, p, fbar, CurvatureMethod.CHART_FORMULA)
    expected = 2 * fbar * (-a * np.sin(x) - 2 * fbar * a**2 * np.cos(x) ** 2)
    assert np.allclose(k, expected, atol=1e-9)


def test_curvature_discrepancy_vanishes_only_in_flat_case():
    g = grid_1d(128, 2 * np.pi, spectral=True)
    flat = profile_from_samples(g, np.zeros(128))
    assert curvature_discrepancy(forward_chart(flat, 1.0), flat, 1.0) < 1e-12
    bumpy = profile_from_samples(g, 0.2 * np.sin(g.axis(0)))
    assert curvature_discrepancy(forward_chart(bumpy, 1.0), bumpy, 1.0) > 1e-3


def test_curved_hamiltonian_flat_spectrum_and_measure_symmetry():
    g = grid_1d(64, 2 * np.pi, spectral=True)
    z = g.axis(0)
    kappa = 1.0 + 0.3 * np.cos(z)
    h = curved_hamiltonian(kappa, np.zeros(64), g)
    w = curved_measure_weights(kappa)
    wh = np.diag(w) @ h.matrix
    assert np.abs(wh - wh.T).max() < 1e-10 * np.abs(wh).max()
    flat = curved_hamiltonian(np.ones(64), np.zeros(64), g)
    vals = np.sort(np.linalg.eigvals(flat.matrix).real)
    assert np.allclose(vals[:5], [0, 1, 1, 4, 4], atol=1e-9)


def test_torus_u_of_theta_against_quadrature():
    params = TorusParams(3.0, 1.0)
    R, r = 3.0, 1.0

    def oracle(theta):
        return scipy.integrate.quad(
            lambda t: r / (R + r * np.cos(t)), 0.0, theta, limit=400
        )[0]

    for theta in (-3.0, -1.2, 0.0, 0.7, 2.9, 4.5, 7.0):
        assert np.isclose(torus_u_of_theta(params, theta), oracle(theta), atol=1e-10), theta


def test_torus_coordinate_roundtrip_and_period():
    params = TorusParams(2.5, 0.8)
    u_len = torus_u_period(params)
    assert np.isclose(u_len, 2 * np.pi * 0.8 / np.sqrt(2.5**2 - 0.8**2))
    theta = np.linspace(-3.0, 3.0, 41)
    back = torus_theta_of_u(params, torus_u_of_theta(params, theta))
    assert np.allclose(back, theta, atol=1e-10)
    # one full turn in theta is one u-period
    assert np.isclose(
        torus_u_of_theta(params, 2 * np.pi) - torus_u_of_theta(params, 0.0), u_len
    )


def test_torus_curvature_formulas():
    params = TorusParams(3.0, 1.0)
    theta = np.linspace(-np.pi, np.pi, 101)
    k = torus_gauss_curvature(params, theta)
    m = torus_mean_curvature(params, theta)
    assert np.isclose(torus_gauss_curvature(params, 0.0), 1.0 / 4.0)
    assert np.isclose(torus_mean_curvature(params, 0.0), 0.5 * (1.0 + 1.0 / 4.0))
    # umbilic inequality M^2 >= K pointwise
    assert np.all(m**2 - k >= -1e-12)
    # K integrates to zero against the area element r (R + r cos) dtheta
    area_density = 1.0 * (3.0 + np.cos(theta))
    assert abs(np.trapezoid(k * area_density, theta)) < 1e-10


def test_torus_chart_consistency():
    params = TorusParams(3.0, 1.0)
    chart, manifold, grid_u = torus_chart(params, 512)
    assert chart.direction is ChartDirection.FROM_TARGET
    # the x coordinate wraps at the seam node, so the finite-difference
    # consistency check is only second-order accurate there
    assert chart.consistency_residual() < 5e-3
    finer, _, _ = torus_chart(params, 2048)
    assert finer.consistency_residual() < chart.consistency_residual() / 1.7
    theta = torus_theta_of_u(params, grid_u.axis(0))
    assert np.allclose(chart.kappa_at_z, (3.0 + np.cos(theta)) ** -2)
    assert np.allclose(manifold.v_static, -manifold.mean_m**2)
    assert manifold.v_sign == -1


def test_torus_drive_realizes_the_metric():
    params = TorusParams(3.0, 1.0)
    _, _, grid_u = torus_chart(params, 128)
    fbar = 1.3
    p = torus_drive(params, fbar, grid_u)
    theta = torus_theta_of_u(params, grid_u.axis(0))
    kappa = np.exp(4.0 * fbar * p.values)
    assert np.allclose(kappa, (3.0 + np.cos(theta)) ** -2, atol=1e-12)
    bad = grid_1d(128, 1.0, spectral=True)
    with pytest.raises(ValueError):
        torus_drive(params, fbar, bad)
    with pytest.raises(ValueError):
        torus_drive(params, 0.0, grid_u)


def test_resample_to_uniform_z():
    params = TorusParams(3.0, 1.0)
    chart, _, grid_u = torus_chart(params, 512)
    u_len = torus_u_period(params)
    vals = np.sin(2 * np.pi * chart.z_nodes / u_len)
    target = grid_1d(96, u_len, origin=-u_len / 2, spectral=True)
    out = resample_to_uniform_z(chart, vals, target)
    expected = np.sin(2 * np.pi * target.axis(0) / u_len)
    assert np.allclose(out, expected, atol=1e-6)


def test_chart_validation():
    z = np.linspace(0, 1, 10)
    x = z.copy()
    with pytest.raises(ValueError):
        ConformalChart(x, z[::-1], np.ones(10), 1.0, ChartDirection.FROM_PROFILE)
    with pytest.raises(ValueError):
        ConformalChart(x, z, -np.ones(10), 1.0, ChartDirection.FROM_PROFILE)
    with pytest.raises(ValueError):
        TorusParams(1.0, 1.5)
