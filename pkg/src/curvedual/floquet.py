"""One-period time-ordered propagation and effective-Hamiltonian extraction.

The monodromy matrix is built from a midpoint product formula: one full
matrix exponential per slice, second-order accurate for the time-ordered
exponential.  The effective Hamiltonian comes from the principal matrix
logarithm of the monodromy via dense eigendecomposition; quasienergies are
folded into the strip Re(eps) in (-pi/T, pi/T], ties resolved to +pi/T.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .drive import DriveProfile, TemporalDrive
from .grid import GridFunction, OperatorMatrix

__all__ = [
    "NumericalFailure",
    "MonodromyResult",
    "micromotion",
    "monodromy",
    "extract_hf",
    "evolve_state",
    "fold_quasienergy",
]

_MICROMOTION_EXPONENT_CAP = 300.0
_EIGVEC_CONDITION_CAP = 1e8


class NumericalFailure(RuntimeError):
    """Raised when a dense linear-algebra step cannot be trusted."""


@dataclass
class MonodromyResult:
    """One-period propagator and (once extracted) its effective Hamiltonian."""

    u_matrix: np.ndarray
    slices: int
    period: float
    grid: object
    h_f: OperatorMatrix | None = None
    quasienergies: np.ndarray | None = None

    @property
    def branch_width(self) -> float:
        return 2.0 * np.pi / self.period


def micromotion(profile: DriveProfile, drive: TemporalDrive, t: float) -> OperatorMatrix:
    """Diagonal similarity exp(f(t) * gbar), periodic in t."""
    exponent = float(drive(t)) * profile.values
    if np.abs(exponent).max() > _MICROMOTION_EXPONENT_CAP:
        raise ValueError("micromotion exponent exceeds overflow guard (|f*gbar| > 300)")
    return OperatorMatrix(np.diag(np.exp(exponent)), profile.grid, label=f"P(t={t:g})")


def monodromy(
    a: OperatorMatrix,
    b: OperatorMatrix,
    c: OperatorMatrix,
    drive: TemporalDrive,
    slices: int = 256,
) -> MonodromyResult:
    """Time-ordered one-period propagator, midpoint-sampled.

    U(T) ~ prod_k exp(-i H'(t_k) dt), t_k = (k + 1/2) dt, earliest slice
    applied first (rightmost factor).
    """
    if slices < 64:
        raise ValueError("need at least 64 slices")
    T = drive.period
    dt = T / slices
    t_mid = (np.arange(slices) + 0.5) * dt
    f_vals = np.asarray(drive(t_mid), dtype=float)

    n = a.n
    u = np.eye(n, dtype=complex)
    # cache per distinct f value: symmetric drives repeat slice generators
    cache: dict[float, np.ndarray] = {}
    for k, f in enumerate(f_vals):
        key = float(f)
        step = cache.get(key)
        if step is None:
            h = a.matrix + f * b.matrix + f**2 * c.matrix
            step = scipy.linalg.expm(-1j * dt * h)
            if not np.all(np.isfinite(step)):
                raise NumericalFailure(f"matrix exponential overflowed at slice {k}")
            cache[key] = step
        u = step @ u
    return MonodromyResult(u_matrix=u, slices=slices, period=T, grid=a.grid)


def fold_quasienergy(eps: np.ndarray, period: float) -> np.ndarray:
    """Map Re(eps) into the principal strip (-pi/T, pi/T], ties to +pi/T."""
    eps = np.asarray(eps, dtype=complex)
    half = np.pi / period
    re = np.mod(eps.real + half, 2.0 * half) - half
    re = np.where(np.isclose(re, -half, atol=1e-14 * half), half, re)
    return re + 1j * eps.imag


def extract_hf(result: MonodromyResult, period: float | None = None) -> OperatorMatrix:
    """Effective Hamiltonian (i/T) log U(T) with the principal branch.

    Fails loudly near defective monodromies (exceptional-point vicinity),
    where the eigenvector basis is too ill-conditioned for a trustworthy
    logarithm.
    """
    T = result.period if period is None else float(period)
    lam, vecs = scipy.linalg.eig(result.u_matrix)
    cond = np.linalg.cond(vecs)
    if not np.isfinite(cond) or cond > _EIGVEC_CONDITION_CAP:
        gaps = np.abs(lam[:, None] - lam[None, :]) + np.diag(np.full(lam.size, np.inf))
        i, _ = np.unravel_index(np.argmin(gaps), gaps.shape)
        raise NumericalFailure(
            f"monodromy eigenbasis is near-defective (cond {cond:.2e}) "
            f"near the eigenvalue cluster at {lam[i]:.6g}"
        )
    # principal log: eps = (i/T) ln lam, then fold into the principal strip
    eps = (1j / T) * np.log(lam)
    eps = fold_quasienergy(eps, T)
    h_f = (vecs * eps[None, :]) @ np.linalg.inv(vecs)
    order = np.lexsort((eps.imag, eps.real))
    result.quasienergies = eps[order]
    result.h_f = OperatorMatrix(h_f, result.grid, label="HF")
    return result.h_f


def evolve_state(
    psi0: GridFunction,
    a: OperatorMatrix,
    b: OperatorMatrix,
    c: OperatorMatrix,
    drive: TemporalDrive,
    n_periods: int,
    slices: int = 256,
):
    """Stroboscopic evolution over n_periods; norm is not conserved in general.

    Returns the raw final state and the norm history (length n_periods + 1).
    Aborts with a range error if the norm leaves [1e-150, 1e150].
    """
    result = monodromy(a, b, c, drive, slices=slices)
    u = result.u_matrix
    psi = psi0.values.astype(complex)
    norms = [float(np.linalg.norm(psi))]
    for _ in range(n_periods):
        psi = u @ psi
        norm = float(np.linalg.norm(psi))
        if not np.isfinite(norm) or norm > 1e150 or norm < 1e-150:
            raise NumericalFailure(
                f"state norm {norm:.3g} left the representable range after "
                f"{len(norms)} periods (overflow guard 1e+-150)"
            )
        norms.append(norm)
    return GridFunction(psi0.grid, psi), np.asarray(norms)
