"""Assembly of the driven-frame operators and their Magnus approximants.

In the frame of the periodic similarity the instantaneous generator is
H'(t) = A + f(t) B + f(t)^2 C with

    A = -del^2 - V            (Hermitian)
    B = -2 grad(gbar).grad - del^2(gbar)   (real, non-symmetric)
    C = -(grad gbar)^2        (real diagonal)

B uses the same differentiation scheme as the Laplacian; mixing schemes
breaks the similarity-transform identities at finite resolution.  Dense
storage throughout: downstream monodromy and matrix-log work need dense
eigendecompositions anyway at this scale.
"""

from __future__ import annotations

import numpy as np

from .drive import DriveMoments, DriveProfile, TemporalDrive
from .grid import GridFunction, OperatorMatrix, derivative_matrix, laplacian_matrix

__all__ = [
    "OperatorMatrix",
    "build_abc",
    "h_prime",
    "commutator",
    "magnus1",
    "magnus1_via_similarity",
    "magnus2",
]


def build_abc(profile: DriveProfile, potential: GridFunction):
    """Assemble (A, B, C) from a spatial drive profile and static potential."""
    grid = profile.grid
    if potential.grid is not grid and potential.grid != grid:
        raise ValueError("potential and profile must share a grid")
    if not potential.is_real:
        raise ValueError("static potential must be real-valued")
    v = potential.values.real

    lap = laplacian_matrix(grid).matrix
    gbar = profile.values

    a_mat = -lap - np.diag(v)

    grad_ops = [derivative_matrix(grid, dim=d, order=1) for d in range(grid.ndim)]
    grad_gbar = [op @ gbar for op in grad_ops]
    lap_gbar = lap @ gbar

    b_mat = -np.diag(lap_gbar)
    for g_d, op in zip(grad_gbar, grad_ops):
        b_mat = b_mat - 2.0 * np.diag(g_d) @ op

    c_diag = -sum(g_d**2 for g_d in grad_gbar)
    c_mat = np.diag(c_diag)

    a = OperatorMatrix(a_mat, grid, label="A", hermitian_hint=True)
    b = OperatorMatrix(b_mat, grid, label="B")
    c = OperatorMatrix(c_mat, grid, label="C", hermitian_hint=True)
    return a, b, c


def h_prime(a: OperatorMatrix, b: OperatorMatrix, c: OperatorMatrix, drive: TemporalDrive, t: float) -> OperatorMatrix:
    """Instantaneous driven-frame generator A + f(t) B + f(t)^2 C."""
    f = float(drive(t))
    mat = a.matrix + f * b.matrix + f**2 * c.matrix
    return OperatorMatrix(mat, a.grid, label=f"Hprime(t={t:g})")


def commutator(x: OperatorMatrix | np.ndarray, y: OperatorMatrix | np.ndarray) -> np.ndarray:
    xm = x.matrix if isinstance(x, OperatorMatrix) else np.asarray(x)
    ym = y.matrix if isinstance(y, OperatorMatrix) else np.asarray(y)
    if xm is ym or (xm.shape == ym.shape and np.array_equal(xm, ym)):
        return np.zeros_like(xm)
    return xm @ ym - ym @ xm


def magnus1(a: OperatorMatrix, b: OperatorMatrix, c: OperatorMatrix, m: DriveMoments) -> OperatorMatrix:
    """First Magnus term: the period average A + m1 B + m2 C."""
    mat = a.matrix + m.m1 * b.matrix + m.m2 * c.matrix
    return OperatorMatrix(mat, a.grid, label="HF1")


def magnus1_via_similarity(
    profile: DriveProfile,
    potential: GridFunction,
    m: DriveMoments,
) -> OperatorMatrix:
    """Structure-preserving discretization of the first-order term.

    The continuum first-order operator is an exact similarity transform of
    the Hermitian operator -del^2 + (m1^2 - m2)(grad gbar)^2 - V by
    exp(-m1 gbar).  Building the matrix through that same discrete
    similarity keeps the pseudo-Hermiticity law H^dag eta = eta H with
    eta = exp(2 m1 gbar) exact to rounding, whereas direct assembly of
    A + m1 B + m2 C carries an O(1e-3) defect concentrated in the highest
    grid modes, independent of resolution.  The two discretizations agree
    to spectral accuracy on well-resolved modes.
    """
    grid = profile.grid
    if not potential.is_real:
        raise ValueError("static potential must be real-valued")
    gbar = profile.values
    grad_gbar2 = sum(
        (derivative_matrix(grid, dim=d, order=1) @ gbar) ** 2 for d in range(grid.ndim)
    )
    lap = laplacian_matrix(grid).matrix
    s = -lap + np.diag((m.m1**2 - m.m2) * grad_gbar2 - potential.values.real)
    e = np.exp(m.m1 * gbar)
    mat = (s * e[np.newaxis, :]) / e[:, np.newaxis]
    return OperatorMatrix(mat, grid, label="HF1~")


def magnus2(a: OperatorMatrix, b: OperatorMatrix, c: OperatorMatrix, m: DriveMoments) -> OperatorMatrix:
    """Second-order approximant: HF1 plus the commutator corrections.

    The corrections vanish identically for drives symmetric about T/2.
    """
    mat = magnus1(a, b, c, m).matrix.astype(complex)
    if m.alpha_ab != 0.0:
        mat = mat + m.alpha_ab * commutator(a, b)
    if m.alpha_ac != 0.0:
        mat = mat + m.alpha_ac * commutator(a, c)
    if m.alpha_bc != 0.0:
        mat = mat + m.alpha_bc * commutator(b, c)
    return OperatorMatrix(mat, a.grid, label="HF2")
