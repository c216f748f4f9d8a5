"""Dense eigensolves, quasienergy-reality diagnostics, and the geometric
metric operator behind pseudo-Hermiticity.

The breaking diagnostic is spectral: a report flags the broken phase when
the largest imaginary part exceeds a threshold scaled by the spectral
radius.  At finite drive frequency the exact effective Hamiltonian need not
have an exactly real spectrum even in the symmetric phase, so callers
should compare ``max_imag`` against a measured truncation estimate rather
than against zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .drive import DriveProfile, TemporalDrive
from .floquet import NumericalFailure
from .geometry import ConformalChart
from .grid import OperatorMatrix

__all__ = [
    "SpectralReport",
    "eigensolve",
    "metric_operator",
    "reality_report",
    "eta_residual",
]

_DEFAULT_MAX_N = 4096
_DEFAULT_REALITY_FACTOR = 1e-8


@dataclass(frozen=True)
class SpectralReport:
    eigenvalues: np.ndarray  # sorted by real part, ties by imaginary part
    max_imag: float
    spectral_radius: float
    pt_broken: bool
    conjugate_pairs: tuple[tuple[int, int], ...]
    eta_residual: float | None
    localization_asymmetry: float

    def __post_init__(self):
        if abs(self.localization_asymmetry) > 1.0 + 1e-12:
            raise ValueError("localization asymmetry must lie in [-1, 1]")


def eigensolve(op: OperatorMatrix, max_n: int = _DEFAULT_MAX_N):
    """Full dense eigendecomposition; Hermitian-flagged operators take the
    symmetric path and return exactly real eigenvalues."""
    if op.n > max_n:
        raise ValueError(f"matrix size {op.n} exceeds configured maximum {max_n}")
    if op.hermitian_hint:
        vals, vecs = scipy.linalg.eigh(op.matrix)
        return vals, vecs
    vals, vecs = scipy.linalg.eig(op.matrix)
    if not np.all(np.isfinite(vals)):
        raise NumericalFailure("eigensolver returned non-finite eigenvalues")
    return vals, vecs


def metric_operator(
    chart: ConformalChart,
    profile: DriveProfile,
    drive: TemporalDrive,
    t0: float = 0.0,
) -> OperatorMatrix:
    """Positive metric eta = S^dag S from the geometric similarity.

    S = P(t0) . U_measure, where P(t0) = exp(f(t0) gbar) is the micromotion
    at the chosen stroboscopic phase and U_measure = diag(kappa^(1/4)) is
    the square-root-of-Jacobian weight that gives the x -> z change of
    variables unit curved norm.  Everything is diagonal on the shared
    nodes, so eta = exp(2 (f(t0) + fbar) gbar).

    The phase t0 entering the metric is a genuine modeling choice; pick it
    so that f(t0) = m1 - fbar (for fbar = m1: a zero of f) to reproduce the
    exact first-order pseudo-Hermiticity law.
    """
    gbar = profile.values
    exponent = (float(drive(t0)) + chart.fbar) * gbar
    if np.abs(exponent).max() > 150.0:
        raise ValueError("metric-operator exponent exceeds overflow guard")
    eta = np.diag(np.exp(2.0 * exponent))
    return OperatorMatrix(eta, profile.grid, label="eta", hermitian_hint=True)


def eta_residual(op: OperatorMatrix, eta: OperatorMatrix) -> float:
    """Relative pseudo-Hermiticity defect |H^dag eta - eta H| / |eta H|."""
    h = op.matrix
    e = eta.matrix
    num = np.linalg.norm(h.conj().T @ e - e @ h)
    den = np.linalg.norm(e @ h)
    return float(num / den) if den > 0 else float(num)


def _conjugate_pairs(vals: np.ndarray, mask: np.ndarray, tol: float):
    """Greedy matching of non-real eigenvalues into conjugate pairs."""
    idx = [int(i) for i in np.flatnonzero(mask)]
    pairs: list[tuple[int, int]] = []
    used: set[int] = set()
    for i in idx:
        if i in used:
            continue
        best_j, best_d = -1, np.inf
        for j in idx:
            if j == i or j in used:
                continue
            d = abs(vals[i] - np.conj(vals[j]))
            if d < best_d:
                best_j, best_d = j, d
        if best_j >= 0 and best_d <= tol:
            pairs.append((min(i, best_j), max(i, best_j)))
            used.update((i, best_j))
    return tuple(pairs)


def reality_report(
    op: OperatorMatrix,
    eta: OperatorMatrix | None = None,
    coordinates: np.ndarray | None = None,
    reality_factor: float = _DEFAULT_REALITY_FACTOR,
    pair_tol: float | None = None,
    parity_weight: np.ndarray | None = None,
) -> SpectralReport:
    """Quasienergy reality and symmetry-breaking diagnostics for an operator.

    ``coordinates`` are the curved-frame node positions used for the
    localization asymmetry of the most-complex eigenvector; the grid axis is
    used when omitted.  ``parity_weight`` selects the reflection whose
    breaking is probed: it should be a node function odd under that
    reflection (for a metric modulated at wavenumber Q in z, sin(Q z)).
    The asymmetry is the density-weighted sign of this function.  Without
    it the sign of (coordinate - midpoint) is used, which is blind to
    reflections whose period divides half the domain.
    """
    vals, vecs = eigensolve(op)
    vals = np.asarray(vals, dtype=complex)
    order = np.lexsort((vals.imag, vals.real))
    vals = vals[order]
    vecs = vecs[:, order]

    radius = float(np.max(np.abs(vals))) if vals.size else 0.0
    max_imag = float(np.max(np.abs(vals.imag))) if vals.size else 0.0
    threshold = reality_factor * max(radius, 1e-300)
    broken = max_imag > threshold

    mask = np.abs(vals.imag) > threshold
    if pair_tol is None:
        pair_tol = 1e-6 * (1.0 + radius)
    pairs = _conjugate_pairs(vals, mask, pair_tol) if broken else ()

    if coordinates is None:
        coordinates = op.grid.axis(0) if getattr(op.grid, "ndim", 1) == 1 else np.arange(op.n)
    coordinates = np.asarray(coordinates, dtype=float)
    if parity_weight is None:
        z_mid = 0.5 * (coordinates.min() + coordinates.max())
        signs = np.sign(coordinates - z_mid)
    else:
        signs = np.sign(np.asarray(parity_weight, dtype=float))
    if broken:
        which = int(np.argmax(np.abs(vals.imag)))
        density = np.abs(vecs[:, which]) ** 2
        density = density / density.sum()
        asymmetry = float(np.sum(signs * density))
    else:
        asymmetry = 0.0

    residual = eta_residual(op, eta) if eta is not None else None
    return SpectralReport(
        eigenvalues=vals,
        max_imag=max_imag,
        spectral_radius=radius,
        pt_broken=bool(broken),
        conjugate_pairs=pairs,
        eta_residual=residual,
        localization_asymmetry=asymmetry,
    )
