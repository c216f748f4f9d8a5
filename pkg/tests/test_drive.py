import numpy as np
import pytest
import scipy.integrate

from curvedual.drive import (
    Constant,
    DriveMoments,
    Sawtooth,
    Sinusoid,
    SinusoidSquared,
    Tabulated,
    TemporalDrive,
    alpha_functionals,
    moments,
    profile_from_samples,
)
from curvedual.grid import grid_1d


def _alpha_oracle(drive, T):
    """Independent quadrature for the three commutator coefficients.

    a_ab = (1/T) int (t - T/2) f dt
    a_ac = (1/T) int (t - T/2) f^2 dt
    a_bc = (1/4T) int int sgn(t1 - t2) f(t1) f(t2) (f(t2) - f(t1)) dt1 dt2
    """
    a_ab = scipy.integrate.quad(lambda t: (t - T / 2) * drive(t), 0, T, limit=200)[0] / T
    a_ac = scipy.integrate.quad(lambda t: (t - T / 2) * drive(t) ** 2, 0, T, limit=200)[0] / T

    def kern(t2, t1):  # region t2 < t1, sgn = +1
        f1, f2 = drive(t1), drive(t2)
        return f1 * f2 * (f2 - f1)

    lower = scipy.integrate.dblquad(kern, 0, T, 0, lambda t1: t1, epsabs=1e-12)[0]
    upper = scipy.integrate.dblquad(kern, 0, T, lambda t1: t1, T, epsabs=1e-12)[0]
    a_bc = (lower - upper) / (4.0 * T)
    return a_ab, a_ac, a_bc


def test_closed_form_period_averages_against_quadrature():
    cases = [
        (Sinusoid(amplitude=0.7, offset=1.3), None),
        (SinusoidSquared(amplitude=2.1), None),
        (Constant(value=-0.4), None),
        (Sawtooth(amplitude=1.9), None),
    ]
    T = 0.37
    for shape, _ in cases:
        d = TemporalDrive(T, shape)
        m = moments(d)
        q1 = scipy.integrate.quad(d, 0, T, limit=200)[0] / T
        q2 = scipy.integrate.quad(lambda t: d(t) ** 2, 0, T, limit=200)[0] / T
        assert np.isclose(m.m1, q1, atol=1e-9), shape
        assert np.isclose(m.m2, q2, atol=1e-9), shape


def test_sawtooth_alpha_closed_forms_match_dblquad_oracle():
    a, T = 1.7, 0.9
    d = TemporalDrive(T, Sawtooth(amplitude=a))
    got = alpha_functionals(d)
    oracle = _alpha_oracle(d, T)
    assert np.allclose(got, oracle, atol=1e-9)
    # and the analytic values themselves
    assert np.isclose(got[0], a * T / 12.0, atol=1e-12)
    assert np.isclose(got[1], a**2 * T / 12.0, atol=1e-12)
    assert np.isclose(got[2], -(a**3) * T / 60.0, atol=1e-12)


def test_smooth_alpha_matches_dblquad_oracle_for_asymmetric_sinusoid():
    T = 1.3
    d = TemporalDrive(T, Sinusoid(amplitude=1.1, phase=0.7, offset=0.4))
    got = alpha_functionals(d)
    oracle = _alpha_oracle(d, T)
    assert np.allclose(got, oracle, atol=1e-9)
    assert np.abs(got).max() > 1e-3  # genuinely asymmetric: coefficients do not vanish


def test_tabulated_alpha_consistent_with_smooth_path():
    T = 2.0
    shape = Sinusoid(amplitude=0.8, phase=1.1, offset=0.2)
    smooth = TemporalDrive(T, shape)
    n = 4096
    samples = smooth(np.arange(n) * T / n)
    tab = TemporalDrive(T, Tabulated(tuple(samples)))
    a_s = alpha_functionals(smooth)
    a_t = alpha_functionals(tab, quadrature_points=4096)
    assert np.allclose(a_s, a_t, atol=5e-6)


def test_alphas_vanish_for_symmetric_drives():
    rng = np.random.default_rng(7)
    for _ in range(100):
        n = int(rng.integers(32, 128))
        T = float(rng.uniform(0.1, 5.0))
        raw = rng.normal(size=n)
        sym = 0.5 * (raw + raw[(-np.arange(n)) % n])  # f(T - t) = f(t) on the nodes
        d = TemporalDrive(T, Tabulated(tuple(sym)))
        m = moments(d, quadrature_points=n if n >= 128 else 128)
        # tabulated path must be sampled commensurately with the data
        a = alpha_functionals(d, quadrature_points=max(128, 4 * n))
        bound = 1e-12 * T * (1.0 + m.m2)
        assert np.abs(a).max() <= bound, (n, T, a)


def test_symmetric_smooth_shapes_have_zero_alphas():
    for shape in (Sinusoid(amplitude=1.5, offset=0.3), SinusoidSquared(2.0), Constant(0.7)):
        d = TemporalDrive(1.7, shape)
        assert np.abs(alpha_functionals(d)).max() < 1e-13


def test_moments_second_moment_inequality_enforced():
    with pytest.raises(ValueError):
        DriveMoments(m1=1.0, m2=0.5, alpha_ab=0.0, alpha_ac=0.0, alpha_bc=0.0, fbar=1.0)


def test_moments_fbar_default_and_override():
    d = TemporalDrive(1.0, Sinusoid(amplitude=1.0, offset=0.25))
    assert moments(d).fbar == 0.25
    assert moments(d, fbar=2.0).fbar == 2.0


def test_drive_periodicity_and_omega():
    d = TemporalDrive(0.5, Sinusoid(amplitude=1.0, phase=0.3))
    t = np.linspace(0, 0.5, 17)
    assert np.allclose(d(t), d(t + 3 * 0.5), atol=1e-12)
    assert np.isclose(d.omega, 4 * np.pi)


def test_validation_errors():
    with pytest.raises(ValueError):
        TemporalDrive(-1.0, Constant())
    with pytest.raises(ValueError):
        Tabulated(tuple(np.ones(8)))
    with pytest.raises(ValueError):
        Tabulated(tuple([np.nan] * 20))
    with pytest.raises(ValueError):
        moments(TemporalDrive(1.0, Constant()), quadrature_points=32)
    with pytest.raises(ValueError):
        alpha_functionals(TemporalDrive(1.0, Sinusoid()), quadrature_points=64)


def test_profile_from_samples_roundtrip_and_validation():
    g = grid_1d(16, 2 * np.pi, spectral=True)
    vals = np.sin(g.axis(0))
    p = profile_from_samples(g, vals)
    assert np.allclose(p.values, vals)
    with pytest.raises(ValueError):
        profile_from_samples(g, np.ones(8))
