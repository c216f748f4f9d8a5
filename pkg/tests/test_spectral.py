import numpy as np
import pytest

from curvedual.drive import (
    Sinusoid,
    TemporalDrive,
    moments,
    profile_from_samples,
)
from curvedual.geometry import forward_chart
from curvedual.grid import GridFunction, OperatorMatrix, grid_1d, laplacian_matrix
from curvedual.operators import build_abc, magnus1, magnus1_via_similarity
from curvedual.spectral import (
    SpectralReport,
    eigensolve,
    eta_residual,
    metric_operator,
    reality_report,
)


def _grid(n=64):
    return grid_1d(n, 2 * np.pi, spectral=True)


def test_eigensolve_free_particle_levels():
    g = _grid()
    op = OperatorMatrix(-laplacian_matrix(g).matrix, g, hermitian_hint=True)
    vals, _ = eigensolve(op)
    assert np.isrealobj(vals)
    assert np.allclose(vals[:7], [0, 1, 1, 4, 4, 9, 9], atol=1e-9)


def test_eigensolve_size_cap():
    g = _grid(16)
    op = OperatorMatrix(np.eye(16), g, hermitian_hint=True)
    with pytest.raises(ValueError):
        eigensolve(op, max_n=8)


def test_metric_operator_diagonal_form():
    g = _grid(32)
    x = g.axis(0)
    gbar = 0.2 * np.sin(x)
    profile = profile_from_samples(g, gbar)
    chart = forward_chart(profile, 0.7)
    drive = TemporalDrive(0.1, Sinusoid(amplitude=1.0, offset=1.0))
    t0 = 0.025  # quarter period: f(t0) = 1.0
    eta = metric_operator(chart, profile, drive, t0=t0)
    expected = np.exp(2.0 * (float(drive(t0)) + 0.7) * gbar)
    assert np.allclose(np.diag(eta.matrix), expected, atol=1e-12)
    big = profile_from_samples(g, 200.0 * np.ones(32))
    with pytest.raises(ValueError):
        metric_operator(chart, big, drive)


def test_eta_residual_oracle():
    g = _grid(32)
    rng = np.random.default_rng(3)
    s = rng.normal(size=(32, 32))
    s = s + s.T  # symmetric
    gbar = rng.normal(size=32) * 0.1
    e = np.exp(gbar)
    h = (s * e[None, :]) / e[:, None]  # exact similarity transform
    op = OperatorMatrix(h, g)
    eta = OperatorMatrix(np.diag(np.exp(2 * gbar)), g, hermitian_hint=True)
    assert eta_residual(op, eta) < 1e-13
    # a generic non-pseudo-Hermitian matrix has an O(1) residual
    bad = OperatorMatrix(rng.normal(size=(32, 32)), g)
    assert eta_residual(bad, eta) > 0.1


def test_first_order_operator_is_eta_pseudo_hermitian_and_real():
    g = _grid()
    x = g.axis(0)
    profile = profile_from_samples(g, 0.25 * np.sin(x))
    potential = GridFunction(g, 0.4 * np.cos(x))
    m = moments(TemporalDrive(0.05, Sinusoid(amplitude=1.0, offset=1.0)))
    hf1 = magnus1_via_similarity(profile, potential, m)
    eta = OperatorMatrix(
        np.diag(np.exp(2 * m.m1 * profile.values)), g, hermitian_hint=True
    )
    report = reality_report(hf1, eta=eta)
    assert report.eta_residual < 1e-12
    assert not report.pt_broken
    assert report.max_imag < 1e-10 * report.spectral_radius
    assert report.conjugate_pairs == ()
    assert report.localization_asymmetry == 0.0


def test_parity_commutation_for_even_profiles():
    g = _grid()
    x = g.axis(0)
    profile = profile_from_samples(g, 0.3 * np.cos(x))  # even about x = 0
    potential = GridFunction(g, 0.2 * np.cos(2 * x))
    a, b, c = build_abc(profile, potential)
    m = moments(TemporalDrive(0.05, Sinusoid(amplitude=1.0, offset=1.0)))
    h = magnus1(a, b, c, m).matrix
    n = g.size
    refl = np.zeros((n, n))
    refl[np.arange(n), (-np.arange(n)) % n] = 1.0  # x -> -x on the circle
    assert np.abs(refl @ h @ refl - h).max() <= 1e-12 * np.abs(h).max()


def test_similarity_invariance_of_the_spectrum():
    g = _grid(48)
    x = g.axis(0)
    profile = profile_from_samples(g, 0.25 * np.sin(x))
    potential = GridFunction(g, 0.4 * np.cos(x))
    m = moments(TemporalDrive(0.05, Sinusoid(amplitude=1.0, offset=1.0)))
    h = magnus1_via_similarity(profile, potential, m).matrix
    p = np.exp(0.7 * np.sin(2 * x))
    h_sim = (h * p[None, :]) / p[:, None]
    v1 = np.sort(np.linalg.eigvals(h).real)
    v2 = np.sort(np.linalg.eigvals(h_sim).real)
    assert np.allclose(v1, v2, atol=1e-9)


def test_reality_report_detects_conjugate_pairs():
    g = grid_1d(8, 1.0, spectral=False)
    mat = np.diag(np.arange(8.0))
    mat[0:2, 0:2] = [[0.0, 2.0], [-2.0, 0.0]]  # eigenvalues +-2i
    report = reality_report(OperatorMatrix(mat, g))
    assert report.pt_broken
    assert np.isclose(report.max_imag, 2.0, atol=1e-12)
    assert len(report.conjugate_pairs) == 1
    i, j = report.conjugate_pairs[0]
    assert np.isclose(report.eigenvalues[i], np.conj(report.eigenvalues[j]), atol=1e-12)


def test_reality_report_parity_weight_changes_the_asymmetry_probe():
    g = grid_1d(16, 2 * np.pi, spectral=False)
    mat = np.diag(np.arange(16.0))
    mat[0:2, 0:2] = [[0.0, 1.0], [-1.0, 0.0]]
    op = OperatorMatrix(mat, g)
    default = reality_report(op)
    weighted = reality_report(op, parity_weight=np.sin(2 * g.axis(0)))
    # the mode lives on nodes 0 and 1, on the same side of both probes,
    # but the two probes weight them differently
    assert abs(default.localization_asymmetry) <= 1.0
    assert abs(weighted.localization_asymmetry) <= 1.0


def test_spectral_report_asymmetry_bounds():
    with pytest.raises(ValueError):
        SpectralReport(
            eigenvalues=np.array([0.0 + 0j]),
            max_imag=0.0,
            spectral_radius=1.0,
            pt_broken=False,
            conjugate_pairs=(),
            eta_residual=None,
            localization_asymmetry=1.5,
        )
