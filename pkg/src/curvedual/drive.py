"""Time-periodic drive envelopes f(t), their period averages, and the
second-order commutator coefficients.

The named shapes carry closed-form period averages; tabulated drives fall
back to trapezoid quadrature on the periodic extension.  The commutator
coefficients (alpha functionals) use Gauss-Legendre quadrature for smooth
shapes and a tensor trapezoid rule with an explicitly zeroed diagonal for
tabulated drives, which removes the sgn(0) ambiguity in the double-integral
kernel exactly.

Convention: Sinusoid(amplitude, phase) is amplitude*cos(2 pi t/T + phase),
so that phase 0 is symmetric about T/2 and all alpha functionals vanish.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Sinusoid",
    "SinusoidSquared",
    "Constant",
    "Sawtooth",
    "Tabulated",
    "TemporalDrive",
    "DriveMoments",
    "DriveProfile",
    "moments",
    "alpha_functionals",
    "profile_from_samples",
]


@dataclass(frozen=True)
class Sinusoid:
    """offset + amplitude * cos(2 pi t / T + phase)."""

    amplitude: float = 1.0
    phase: float = 0.0
    offset: float = 0.0


@dataclass(frozen=True)
class SinusoidSquared:
    amplitude: float = 1.0


@dataclass(frozen=True)
class Constant:
    value: float = 1.0


@dataclass(frozen=True)
class Sawtooth:
    amplitude: float = 1.0


@dataclass(frozen=True)
class Tabulated:
    """Samples of one period at t_j = j T / len(samples)."""

    samples: tuple[float, ...]

    def __post_init__(self):
        samples = tuple(float(s) for s in np.asarray(self.samples).ravel())
        object.__setattr__(self, "samples", samples)
        if len(samples) < 16:
            raise ValueError("tabulated drives need at least 16 samples")
        if not np.all(np.isfinite(samples)):
            raise ValueError("tabulated drive samples must be finite")


Shape = Sinusoid | SinusoidSquared | Constant | Sawtooth | Tabulated


@dataclass(frozen=True)
class TemporalDrive:
    """Periodic envelope f(t) = f(t + T)."""

    period: float
    shape: Shape

    def __post_init__(self):
        if self.period <= 0:
            raise ValueError("drive period must be positive")

    @property
    def omega(self) -> float:
        return 2.0 * np.pi / self.period

    def __call__(self, t):
        tau = np.mod(np.asarray(t, dtype=float), self.period)
        s = self.shape
        if isinstance(s, Sinusoid):
            return s.offset + s.amplitude * np.cos(self.omega * tau + s.phase)
        if isinstance(s, SinusoidSquared):
            return s.amplitude * np.sin(np.pi * tau / self.period) ** 2
        if isinstance(s, Constant):
            return np.broadcast_to(s.value, tau.shape).copy() if tau.shape else s.value
        if isinstance(s, Sawtooth):
            return s.amplitude * tau / self.period
        # periodic linear interpolation between samples
        samples = np.asarray(s.samples)
        n = samples.size
        pos = tau / self.period * n
        j = np.floor(pos).astype(int) % n
        frac = pos - np.floor(pos)
        return (1.0 - frac) * samples[j] + frac * samples[(j + 1) % n]

@dataclass(frozen=True)
class DriveMoments:
    """Period averages m1 = <f>, m2 = <f^2> and the commutator coefficients."""

    m1: float
    m2: float
    alpha_ab: float
    alpha_ac: float
    alpha_bc: float
    fbar: float

    def __post_init__(self):
        if self.m2 < self.m1**2 - 1e-12 * (1.0 + self.m1**2):
            raise ValueError("m2 >= m1^2 must hold for any real drive")


def _trapezoid_period(samples: np.ndarray, period: float) -> float:
    """Integral over one period of the periodic extension of uniform samples."""
    return float(np.sum(samples)) * period / samples.size


def _closed_form_m1_m2(drive: TemporalDrive):
    s = drive.shape
    if isinstance(s, Sinusoid):
        return s.offset, s.offset**2 + s.amplitude**2 / 2.0
    if isinstance(s, SinusoidSquared):
        return s.amplitude / 2.0, 3.0 * s.amplitude**2 / 8.0
    if isinstance(s, Constant):
        return s.value, s.value**2
    if isinstance(s, Sawtooth):
        return s.amplitude / 2.0, s.amplitude**2 / 3.0
    return None


def moments(drive: TemporalDrive, quadrature_points: int = 256, fbar: float | None = None) -> DriveMoments:
    """Period averages plus alpha functionals for a drive.

    ``fbar`` defaults to m1; it is the effective drive strength entering the
    conformal-map formulas and may be overridden when m1 would be degenerate
    (e.g. a zero-mean drive).
    """
    if quadrature_points < 64:
        raise ValueError("need at least 64 quadrature points")
    cf = _closed_form_m1_m2(drive)
    if cf is not None:
        m1, m2 = cf
    else:
        samples = np.asarray(drive.shape.samples, dtype=float)
        m1 = _trapezoid_period(samples, drive.period) / drive.period
        m2 = _trapezoid_period(samples**2, drive.period) / drive.period
    a_ab, a_ac, a_bc = alpha_functionals(drive, max(quadrature_points, 128))
    return DriveMoments(
        m1=m1,
        m2=m2,
        alpha_ab=a_ab,
        alpha_ac=a_ac,
        alpha_bc=a_bc,
        fbar=m1 if fbar is None else float(fbar),
    )


def _gauss_nodes(n: int, a: float, b: float):
    x, w = np.polynomial.legendre.leggauss(n)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return mid + half * x, half * w


def _alpha_smooth(drive: TemporalDrive, n: int):
    """Gauss-Legendre evaluation for shapes smooth over the whole period."""
    T = drive.period
    t, w = _gauss_nodes(n, 0.0, T)
    f = drive(t)
    a_ab = np.sum(w * (t - T / 2.0) * f) / T
    a_ac = np.sum(w * (t - T / 2.0) * f**2) / T

    # alpha_BC reduces to single integrals over cumulative antiderivatives:
    # int int sgn(t1-t2) f1 f2 (f2-f1) = int f^2 (F(T)-2F) - int f (G(T)-2G),
    # with F = int f, G = int f^2.  Nested Gauss-Legendre keeps spectral
    # accuracy for analytic envelopes.
    xg, wg = np.polynomial.legendre.leggauss(n)

    def cumulative(power: int, upper: np.ndarray) -> np.ndarray:
        mid = 0.5 * upper[:, None] * (xg[None, :] + 1.0)
        vals = drive(mid) ** power
        return 0.5 * upper * np.sum(wg[None, :] * vals, axis=1)

    F = cumulative(1, t)
    G = cumulative(2, t)
    FT = cumulative(1, np.array([T]))[0]
    GT = cumulative(2, np.array([T]))[0]
    term1 = np.sum(w * f**2 * (FT - 2.0 * F))
    term2 = np.sum(w * f * (GT - 2.0 * G))
    a_bc = (term1 - term2) / (4.0 * T)
    return float(a_ab), float(a_ac), float(a_bc)


def _alpha_tabulated(drive: TemporalDrive, n: int):
    """Tensor trapezoid rule; the diagonal t1 = t2 is zeroed exactly."""
    T = drive.period
    t = np.linspace(0.0, T, n + 1)
    f = drive(t)
    f[-1] = f[0]
    w = np.full(n + 1, T / n)
    w[0] = w[-1] = T / (2 * n)
    a_ab = float(np.sum(w * (t - T / 2.0) * f) / T)
    a_ac = float(np.sum(w * (t - T / 2.0) * f**2) / T)
    sgn = np.sign(t[:, None] - t[None, :])
    kern = 0.5 * sgn * f[:, None] * f[None, :] * (f[None, :] - f[:, None])
    a_bc = float(np.sum(w[:, None] * w[None, :] * kern) / (2.0 * T))
    return a_ab, a_ac, a_bc


def alpha_functionals(drive: TemporalDrive, quadrature_points: int = 256):
    """Coefficients of [A,B], [A,C], [B,C] in the second commutator term.

    All three vanish identically for drives symmetric about T/2.  The
    sawtooth (discontinuous at the period boundary) uses closed forms.
    """
    if quadrature_points < 128:
        raise ValueError("need at least 128 quadrature points for alpha functionals")
    s = drive.shape
    if isinstance(s, Constant):
        return 0.0, 0.0, 0.0
    if isinstance(s, Sawtooth):
        a, T = s.amplitude, drive.period
        return a * T / 12.0, a**2 * T / 12.0, -(a**3) * T / 60.0
    if isinstance(s, Tabulated):
        return _alpha_tabulated(drive, quadrature_points)
    return _alpha_smooth(drive, quadrature_points)


@dataclass(frozen=True)
class DriveProfile:
    """Spatial log-amplitude profile of the separable drive (dimensionless)."""

    gamma_bar: "GridFunction"

    def __post_init__(self):
        if not self.gamma_bar.is_real:
            raise ValueError("drive profile must be real-valued")

    @property
    def grid(self):
        return self.gamma_bar.grid

    @property
    def values(self) -> np.ndarray:
        return self.gamma_bar.values.real


def profile_from_samples(grid, samples) -> DriveProfile:
    from .grid import GridFunction

    values = np.asarray(samples, dtype=float).ravel()
    if values.size != grid.size:
        raise ValueError("sample count does not match grid")
    return DriveProfile(GridFunction(grid, values))
