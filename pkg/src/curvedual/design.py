"""Inverse pipeline: from a prescribed conformal factor kappa_tar(z) to the
laboratory-frame drive profile gamma_bar(x).

The recipe is the composition gbar(x) = ln(kappa_tar(z(x))) / (4 fbar) with
x(z) the optical length int dz / sqrt(kappa_tar).  Conventions:

* the indefinite integrals are anchored so x and z coincide at the left
  domain endpoint;
* for periodic targets the total optical length defines the x-domain
  length, so the designed drive is again periodic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.interpolate
import scipy.optimize

from .drive import DriveProfile, profile_from_samples
from .floquet import NumericalFailure
from .geometry import ChartDirection, ConformalChart, forward_chart, torus_theta_of_u, torus_u_period, TorusParams
from .grid import PERIODIC, SpatialGrid, grid_1d

__all__ = [
    "TargetMetric",
    "DesignResult",
    "MonotoneMap",
    "gamma_in_z",
    "x_of_z",
    "invert_map",
    "design_drive",
    "design_grid",
]

_QUAD_TOL = 1e-12


@dataclass(frozen=True)
class TargetMetric:
    """Prescribed conformal factor kappa_tar on a z-interval."""

    kappa: Callable[[np.ndarray], np.ndarray]
    z_start: float
    z_length: float
    periodic: bool = True
    name: str = "custom"

    def __post_init__(self):
        if self.z_length <= 0:
            raise ValueError("target domain length must be positive")

    def sample(self, z) -> np.ndarray:
        vals = np.asarray(self.kappa(np.asarray(z, dtype=float)), dtype=float)
        if np.any(vals <= 0):
            raise ValueError("kappa_tar must be strictly positive")
        return vals

    @staticmethod
    def flat(z_start: float = 0.0, z_length: float = 2.0 * np.pi) -> "TargetMetric":
        return TargetMetric(lambda z: np.ones_like(z), z_start, z_length, True, "flat")

    @staticmethod
    def sinusoidal(lam: float, q: float, z_start: float = 0.0, z_length: float | None = None) -> "TargetMetric":
        """kappa_tar(z) = 1 + lam cos(q z), |lam| < 1."""
        if abs(lam) >= 1:
            raise ValueError("modulation depth must satisfy |lambda| < 1")
        if z_length is None:
            z_length = 2.0 * np.pi  # whole turns of the modulation on the default circle
        return TargetMetric(lambda z: 1.0 + lam * np.cos(q * z), z_start, z_length, True, "sinusoidal")

    @staticmethod
    def torus_isothermal(params: TorusParams) -> "TargetMetric":
        u_len = torus_u_period(params)
        R, r = params.major_r, params.minor_r

        def kappa(u):
            theta = torus_theta_of_u(params, u)
            return 1.0 / (R + r * np.cos(theta)) ** 2

        return TargetMetric(kappa, -u_len / 2.0, u_len, True, "torus")

    @staticmethod
    def from_table(z_values, kappa_values, periodic: bool = True) -> "TargetMetric":
        z_values = np.asarray(z_values, dtype=float)
        kappa_values = np.asarray(kappa_values, dtype=float)
        if np.any(kappa_values <= 0):
            raise ValueError("tabulated kappa_tar must be strictly positive")
        if np.any(np.diff(z_values) <= 0):
            raise ValueError("tabulated z values must be strictly increasing")
        if periodic:
            period = z_values[-1] - z_values[0] + np.mean(np.diff(z_values))
            z_ext = np.concatenate([z_values - period, z_values, z_values + period])
            k_ext = np.tile(kappa_values, 3)
            interp = scipy.interpolate.PchipInterpolator(z_ext, k_ext)
            length = period
        else:
            interp = scipy.interpolate.PchipInterpolator(z_values, kappa_values)
            length = z_values[-1] - z_values[0]
        return TargetMetric(interp, float(z_values[0]), float(length), periodic, "table")


@dataclass(frozen=True)
class MonotoneMap:
    """Strictly monotone map given by nodes plus a refinable callable."""

    source: np.ndarray
    image: np.ndarray
    forward: Callable[[float], float]

    def __post_init__(self):
        s = np.asarray(self.source, dtype=float)
        im = np.asarray(self.image, dtype=float)
        object.__setattr__(self, "source", s)
        object.__setattr__(self, "image", im)
        if np.any(np.diff(s) <= 0) or np.any(np.diff(im) <= 0):
            raise ValueError("map nodes must be strictly increasing")

    def __call__(self, value: float) -> float:
        return float(self.forward(value))


def gamma_in_z(target: TargetMetric, fbar: float, z_values) -> np.ndarray:
    """Drive profile in the curved frame: ln(kappa_tar) / (4 fbar)."""
    if fbar == 0.0:
        raise ValueError("fbar must be nonzero")
    return np.log(target.sample(z_values)) / (4.0 * fbar)


_GL_LOW = np.polynomial.legendre.leggauss(8)
_GL_HIGH = np.polynomial.legendre.leggauss(16)


def _gl_panel(f, a: np.ndarray, b: np.ndarray, rule) -> np.ndarray:
    """Vectorized Gauss-Legendre over a batch of panels [a_i, b_i]."""
    x, w = rule
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    vals = f(mid[:, None] + half[:, None] * x[None, :])
    return half * (vals @ w)


def _adaptive_panels(f, a: float, b: float, tol: float, n0: int = 256):
    """Panel edges and integrals with a nested 8/16-point error estimate;
    panels whose estimate exceeds the tolerance are bisected."""
    edges = np.linspace(a, b, n0 + 1)
    left, right = edges[:-1], edges[1:]
    for _ in range(40):
        low = _gl_panel(f, left, right, _GL_LOW)
        high = _gl_panel(f, left, right, _GL_HIGH)
        err = np.abs(high - low)
        bad = err > tol * (right - left) / (b - a)
        if not np.any(bad):
            return left, right, high
        mids = 0.5 * (left[bad] + right[bad])
        left = np.sort(np.concatenate([left, mids]))
        right = np.sort(np.concatenate([right, mids]))
    raise NumericalFailure("optical-length quadrature did not converge")


def x_of_z(target: TargetMetric, tol: float = _QUAD_TOL) -> MonotoneMap:
    """Optical-length map x(z) = int dz / sqrt(kappa_tar), anchored at the
    left endpoint (x(z_start) = z_start)."""

    def integrand(z):
        return 1.0 / np.sqrt(target.sample(z))

    a = target.z_start
    b = target.z_start + target.z_length
    left, right, integrals = _adaptive_panels(integrand, a, b, tol)
    z_nodes = np.concatenate([[a], right])
    x_nodes = a + np.concatenate([[0.0], np.cumsum(integrals)])

    def forward(z: float) -> float:
        j = int(np.clip(np.searchsorted(z_nodes, z) - 1, 0, z_nodes.size - 2))
        tail = _gl_panel(integrand, np.array([z_nodes[j]]), np.array([float(z)]), _GL_HIGH)[0]
        return float(x_nodes[j] + tail)

    return MonotoneMap(z_nodes, x_nodes, forward)


def invert_map(mapping: MonotoneMap, abscissa_tol: float = 1e-12) -> MonotoneMap:
    """Numerical inverse by monotone interpolation plus bisection refinement."""
    inv_interp = scipy.interpolate.PchipInterpolator(mapping.image, mapping.source)
    lo_s, hi_s = mapping.source[0], mapping.source[-1]

    def backward(x: float) -> float:
        guess = float(inv_interp(np.clip(x, mapping.image[0], mapping.image[-1])))
        span = max(1e-6 * (hi_s - lo_s), 10.0 * abscissa_tol)
        a = max(lo_s, guess - span)
        b = min(hi_s, guess + span)
        fa = mapping(a) - x
        fb = mapping(b) - x
        while fa * fb > 0.0:
            span *= 4.0
            a = max(lo_s, guess - span)
            b = min(hi_s, guess + span)
            fa = mapping(a) - x
            fb = mapping(b) - x
            if a == lo_s and b == hi_s and fa * fb > 0.0:
                raise ValueError("value outside the range of the monotone map")
        return float(scipy.optimize.brentq(lambda s: mapping(s) - x, a, b, xtol=abscissa_tol))

    return MonotoneMap(mapping.image, mapping.source, backward)


@dataclass(frozen=True)
class DesignResult:
    profile: DriveProfile
    chart: ConformalChart
    residual: float
    z_of_x_nodes: np.ndarray


def optical_length(target: TargetMetric) -> float:
    """Total x-extent of the designed drive for one period of the target."""
    mapping = x_of_z(target)
    return float(mapping.image[-1] - mapping.image[0])


def design_grid(target: TargetMetric, n: int, spectral: bool = True) -> SpatialGrid:
    """Uniform x-grid spanning the optical length of the target domain."""
    return grid_1d(n, optical_length(target), PERIODIC, origin=target.z_start, spectral=spectral)


def design_drive(target: TargetMetric, fbar: float, x_grid: SpatialGrid) -> DesignResult:
    """Full inverse pipeline with a built-in round-trip verification.

    The x-grid must span the optical length of the target (use
    :func:`design_grid`); the stored residual is the sup-norm mismatch of
    the recovered conformal factor against kappa_tar.
    """
    if fbar == 0.0:
        raise ValueError("fbar must be nonzero")
    if x_grid.ndim != 1:
        raise ValueError("inverse design is 1D")
    forward = x_of_z(target)
    x_extent = forward.image[-1] - forward.image[0]
    if target.periodic and abs(x_grid.lengths[0] - x_extent) > 1e-8 * x_extent:
        raise ValueError(
            f"x-grid length {x_grid.lengths[0]:.12g} does not match the optical length {x_extent:.12g}"
        )
    backward = invert_map(forward)
    x_nodes = x_grid.axis(0)
    z_nodes = np.array([backward(x) for x in x_nodes])
    gbar = gamma_in_z(target, fbar, z_nodes)
    profile = profile_from_samples(x_grid, gbar)

    chart = forward_chart(profile, fbar)
    residual = float(np.max(np.abs(chart.kappa_at_z - target.sample(_wrap_z(target, chart.z_nodes)))))
    return DesignResult(profile=profile, chart=chart, residual=residual, z_of_x_nodes=z_nodes)


def _wrap_z(target: TargetMetric, z: np.ndarray) -> np.ndarray:
    if not target.periodic:
        return z
    return target.z_start + np.mod(z - target.z_start, target.z_length)
