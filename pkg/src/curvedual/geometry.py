"""Forward conformal charts, curvature scalars, the curved-space operator,
and the torus-of-revolution isothermal chart.

Conventions (documented because the discrete statements depend on them):

* chart gauge: z and x coincide at the left domain endpoint;
* curved measure weight in the working chart is w(z) = 1/kappa(z), so
  "self-adjoint in the curved space" becomes the concrete matrix statement
  that diag(w) @ H is symmetric;
* two Gaussian-curvature formulas are provided and their discrepancy is a
  first-class diagnostic, not hidden (the exponent bookkeeping of the
  closed-form expression is checked against the standard conformal-factor
  curvature rather than assumed).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
import scipy.interpolate

from .drive import DriveProfile, profile_from_samples
from .grid import GridFunction, OperatorMatrix, SpatialGrid, derivative_matrix, grid_1d

__all__ = [
    "ChartDirection",
    "CurvatureMethod",
    "ConformalChart",
    "ManifoldData",
    "TorusParams",
    "forward_chart",
    "gauss_curvature",
    "curved_hamiltonian",
    "torus_chart",
    "torus_drive",
    "torus_theta_of_u",
    "torus_u_of_theta",
    "cumulative_integral",
]


class ChartDirection(enum.Enum):
    FROM_PROFILE = "from_profile"
    FROM_TARGET = "from_target"


class CurvatureMethod(enum.Enum):
    CLOSED_FORM = "closed-form"
    CHART_FORMULA = "chart"


@dataclass(frozen=True)
class ConformalChart:
    """Monotone coordinate pair x <-> z with conformal factor kappa(z) > 0."""

    x_nodes: np.ndarray
    z_nodes: np.ndarray
    kappa_at_z: np.ndarray
    fbar: float
    direction: ChartDirection
    z_period: float | None = None  # set for periodic charts only

    def __post_init__(self):
        x = np.asarray(self.x_nodes, dtype=float)
        z = np.asarray(self.z_nodes, dtype=float)
        k = np.asarray(self.kappa_at_z, dtype=float)
        object.__setattr__(self, "x_nodes", x)
        object.__setattr__(self, "z_nodes", z)
        object.__setattr__(self, "kappa_at_z", k)
        if not (x.size == z.size == k.size):
            raise ValueError("chart arrays must have equal length")
        if np.any(np.diff(z) <= 0):
            raise ValueError("z nodes must be strictly increasing (map not invertible)")
        if np.any(k <= 0):
            raise ValueError("conformal factor must be positive everywhere")

    def consistency_residual(self) -> float:
        """Max relative mismatch of finite-difference dz/dx against sqrt(kappa)."""
        dz_dx = np.gradient(self.z_nodes, self.x_nodes, edge_order=2)
        root_k = np.sqrt(self.kappa_at_z)
        interior = slice(1, -1)
        return float(np.max(np.abs(dz_dx[interior] - root_k[interior]) / root_k[interior]))


@dataclass(frozen=True)
class ManifoldData:
    """Curvature scalars and the static potential on the chart's z-nodes."""

    gauss_k: np.ndarray
    mean_m: np.ndarray
    v_static: np.ndarray
    v_sign: int = -1

    def __post_init__(self):
        for name in ("gauss_k", "mean_m", "v_static"):
            arr = np.asarray(getattr(self, name), dtype=float)
            object.__setattr__(self, name, arr)
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} must be finite everywhere")


@dataclass(frozen=True)
class TorusParams:
    major_r: float
    minor_r: float

    def __post_init__(self):
        if not (self.major_r > self.minor_r > 0):
            raise ValueError("torus requires R > r > 0")


def cumulative_integral(values: np.ndarray, grid: SpatialGrid) -> np.ndarray:
    """Antiderivative on the grid nodes, zero at the first node.

    Periodic spectral grids integrate the Fourier series exactly (mean mode
    becomes the linear ramp); otherwise composite trapezoid.
    """
    values = np.asarray(values, dtype=float)
    h = grid.spacings[0]
    if grid.spectral and grid.bcs[0].periodic:
        n = values.size
        k = 2.0 * np.pi * np.fft.fftfreq(n, d=h)
        vhat = np.fft.fft(values)
        mean = vhat[0].real / n
        with np.errstate(divide="ignore", invalid="ignore"):
            anti = np.where(k != 0.0, vhat / (1j * k), 0.0)
        osc = np.fft.ifft(anti).real
        x = h * np.arange(n)
        return mean * x + (osc - osc[0])
    out = np.zeros_like(values)
    out[1:] = np.cumsum(0.5 * (values[1:] + values[:-1])) * h
    return out


def forward_chart(profile: DriveProfile, fbar: float) -> ConformalChart:
    """Chart generated by a 1D drive profile: dz/dx = exp(2 fbar gbar)."""
    grid = profile.grid
    if grid.ndim != 1:
        raise ValueError("forward_chart is defined for 1D profiles")
    x = grid.axis(0)
    gbar = profile.values
    integrand = np.exp(2.0 * fbar * gbar)
    z = x[0] + cumulative_integral(integrand, grid)
    kappa = np.exp(4.0 * fbar * gbar)
    z_period = float(np.mean(integrand) * grid.lengths[0]) if grid.bcs[0].periodic else None
    return ConformalChart(x, z, kappa, float(fbar), ChartDirection.FROM_PROFILE, z_period)


def _z_derivative_ops(profile: DriveProfile, fbar: float):
    """d/dz and d2/dz2 applied via the chain rule on the x-grid."""
    grid = profile.grid
    d1x = derivative_matrix(grid, 0, 1)
    root_k_inv = np.exp(-2.0 * fbar * profile.values)  # dx/dz at nodes

    def d_dz(values: np.ndarray) -> np.ndarray:
        return root_k_inv * (d1x @ values)

    return d_dz


def gauss_curvature(
    chart: ConformalChart,
    profile: DriveProfile,
    fbar: float,
    method: CurvatureMethod = CurvatureMethod.CHART_FORMULA,
) -> np.ndarray:
    """Intrinsic curvature on the chart nodes.

    CHART_FORMULA is the standard conformal-factor curvature
    K = (kappa/2) d2(ln kappa)/dz2 for ds^2 = kappa^{-1} dz^2 (flat in the
    second isothermal direction).  CLOSED_FORM evaluates the closed-form
    expression exp(4 gbar) fbar d2z(gbar) + exp(8 gbar) (fbar dz(gbar))^2;
    the two are reported side by side as a diagnostic.
    """
    d_dz = _z_derivative_ops(profile, fbar)
    gbar = profile.values
    if method is CurvatureMethod.CLOSED_FORM:
        g_z = d_dz(gbar)
        g_zz = d_dz(g_z)
        return np.exp(4.0 * gbar) * fbar * g_zz + np.exp(8.0 * gbar) * (fbar * g_z) ** 2
    ln_kappa = 4.0 * fbar * gbar
    return 0.5 * chart.kappa_at_z * d_dz(d_dz(ln_kappa))


def curvature_discrepancy(chart: ConformalChart, profile: DriveProfile, fbar: float) -> float:
    k_closed = gauss_curvature(chart, profile, fbar, CurvatureMethod.CLOSED_FORM)
    k_chart = gauss_curvature(chart, profile, fbar, CurvatureMethod.CHART_FORMULA)
    return float(np.max(np.abs(k_closed - k_chart)))


def curved_hamiltonian(
    kappa: np.ndarray,
    scalar_term: np.ndarray,
    grid_z: SpatialGrid,
    label: str = "Hgeom",
) -> OperatorMatrix:
    """-kappa(z) d2/dz2 + diag(scalar_term) on a uniform z-grid.

    With weight w = 1/kappa, diag(w) @ H is symmetric by construction when
    the second-derivative matrix is, which is the discrete statement of
    self-adjointness in the curved measure.
    """
    kappa = np.asarray(kappa, dtype=float)
    scalar_term = np.asarray(scalar_term, dtype=float)
    if np.any(kappa <= 0):
        raise ValueError("conformal factor must be positive")
    d2 = derivative_matrix(grid_z, 0, 2)
    mat = -(kappa[:, None] * d2) + np.diag(scalar_term)
    return OperatorMatrix(mat, grid_z, label=label)


def curved_measure_weights(kappa: np.ndarray) -> np.ndarray:
    return 1.0 / np.asarray(kappa, dtype=float)


# -- torus of revolution -----------------------------------------------------


def torus_u_of_theta(params: TorusParams, theta) -> np.ndarray:
    """Isothermal coordinate u(theta), branch-continuous on (-pi, pi]."""
    R, r = params.major_r, params.minor_r
    root = np.sqrt(R**2 - r**2)
    theta = np.asarray(theta, dtype=float)
    # evaluate per half-period and unwrap additively at +-pi: reduce theta
    # to (-pi, pi] first, add the accumulated full turns afterwards
    turns = np.round(theta / (2.0 * np.pi))
    theta0 = theta - 2.0 * np.pi * turns
    u0 = (2.0 * r / root) * np.arctan(np.sqrt((R - r) / (R + r)) * np.tan(theta0 / 2.0))
    u_period = 2.0 * np.pi * r / root
    return u0 + turns * u_period


def torus_theta_of_u(params: TorusParams, u) -> np.ndarray:
    """Inverse of u(theta), branch-continuous."""
    R, r = params.major_r, params.minor_r
    root = np.sqrt(R**2 - r**2)
    u = np.asarray(u, dtype=float)
    u_period = 2.0 * np.pi * r / root
    turns = np.round(u / u_period)
    u0 = u - turns * u_period
    theta0 = 2.0 * np.arctan(np.sqrt((R + r) / (R - r)) * np.tan(root * u0 / (2.0 * r)))
    return theta0 + turns * 2.0 * np.pi


def torus_mean_curvature(params: TorusParams, theta) -> np.ndarray:
    R, r = params.major_r, params.minor_r
    theta = np.asarray(theta, dtype=float)
    return 0.5 * (1.0 / r + np.cos(theta) / (R + r * np.cos(theta)))


def torus_gauss_curvature(params: TorusParams, theta) -> np.ndarray:
    R, r = params.major_r, params.minor_r
    theta = np.asarray(theta, dtype=float)
    return np.cos(theta) / (r * (R + r * np.cos(theta)))


def torus_u_period(params: TorusParams) -> float:
    R, r = params.major_r, params.minor_r
    return 2.0 * np.pi * r / np.sqrt(R**2 - r**2)


def torus_chart(params: TorusParams, n_points: int, v_sign: int = -1, fbar: float = 1.0):
    """Isothermal chart and curvature data on a uniform periodic u-grid.

    Returns (chart, manifold, grid_u).  The chart's laboratory coordinate is
    the optical length x = r * theta; kappa_tar(u) = (R + r cos theta(u))^-2.
    The static potential is v_sign * M^2 (default -1, the convention fixed
    by the duality check).
    """
    if n_points < 64:
        raise ValueError("need at least 64 points for the torus chart")
    R, r = params.major_r, params.minor_r
    u_len = torus_u_period(params)
    grid_u = grid_1d(n_points, u_len, origin=-u_len / 2.0, spectral=True)
    u = grid_u.axis(0)
    theta = torus_theta_of_u(params, u)
    omega2 = (R + r * np.cos(theta)) ** 2
    kappa = 1.0 / omega2
    x = r * theta  # optical length: dx = du / sqrt(kappa) = Omega du = r dtheta
    chart = ConformalChart(x, u, kappa, float(fbar), ChartDirection.FROM_TARGET, z_period=u_len)
    mean_m = torus_mean_curvature(params, theta)
    gauss_k = torus_gauss_curvature(params, theta)
    manifold = ManifoldData(gauss_k=gauss_k, mean_m=mean_m, v_static=v_sign * mean_m**2, v_sign=v_sign)
    return chart, manifold, grid_u


def torus_drive(params: TorusParams, fbar: float, grid_u: SpatialGrid) -> DriveProfile:
    """Drive profile in isothermal coordinates realizing the torus metric."""
    if fbar == 0.0:
        raise ValueError("fbar must be nonzero: the profile scales as 1/fbar")
    u_len = torus_u_period(params)
    if abs(grid_u.lengths[0] - u_len) > 1e-9 * u_len:
        raise ValueError("grid must span one full isothermal period of the torus")
    R, r = params.major_r, params.minor_r
    theta = torus_theta_of_u(params, grid_u.axis(0))
    gbar = -np.log(R + r * np.cos(theta)) / (2.0 * fbar)
    return profile_from_samples(grid_u, gbar)


def resample_to_uniform_z(chart: ConformalChart, values_at_x: np.ndarray, grid_z: SpatialGrid) -> np.ndarray:
    """Monotone cubic resampling from chart z-nodes to a uniform z-grid.

    Periodic charts are extended by one period on each side before fitting
    so the interpolant has no boundary artifacts.
    """
    z = chart.z_nodes
    vals = np.asarray(values_at_x, dtype=float)
    if chart.z_period is None:
        raise ValueError("resampling requires a periodic chart with a known z period")
    period = chart.z_period
    z_ext = np.concatenate([z - period, z, z + period])
    v_ext = np.concatenate([vals, vals, vals])
    interp = scipy.interpolate.PchipInterpolator(z_ext, v_ext)
    return interp(grid_z.axis(0))
