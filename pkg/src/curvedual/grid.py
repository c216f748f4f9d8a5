"""Uniform spatial grids, boundary conditions, and discrete differential operators.

Two interchangeable discretizations sit behind one interface: second-order
central stencils (all boundary conditions) and Fourier-spectral differentiation
(periodic grids only).  Spectral mode gives machine-precision duality checks;
stencils cover Dirichlet/Neumann/Robin terminations.  All grids are uniform;
2D grids are tensor products and operators are assembled as Kronecker sums.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np


class BCKind(enum.Enum):
    PERIODIC = "periodic"
    DIRICHLET = "dirichlet"
    NEUMANN = "neumann"
    ROBIN = "robin"


@dataclass(frozen=True)
class BoundaryCondition:
    """Boundary condition tag for one grid dimension.

    For ROBIN, ``coefficient`` is the real constant c in the outward-normal
    condition du/dn + c u = 0; it must be finite so the discrete Laplacian
    stays symmetric (self-adjoint termination).
    """

    kind: BCKind = BCKind.PERIODIC
    coefficient: float = 0.0

    def __post_init__(self):
        if self.kind is BCKind.ROBIN and not np.isfinite(self.coefficient):
            raise ValueError("Robin coefficient must be finite and real")

    @property
    def periodic(self) -> bool:
        return self.kind is BCKind.PERIODIC


PERIODIC = BoundaryCondition(BCKind.PERIODIC)
DIRICHLET = BoundaryCondition(BCKind.DIRICHLET)
NEUMANN = BoundaryCondition(BCKind.NEUMANN)


def robin(coefficient: float) -> BoundaryCondition:
    return BoundaryCondition(BCKind.ROBIN, float(coefficient))


_MIN_POINTS = 8


@dataclass(frozen=True)
class SpatialGrid:
    """Uniform 1D or 2D grid.

    Periodic dimensions exclude the duplicate endpoint (nodes at j*h,
    j = 0..N-1, h = L/N); non-periodic dimensions include both endpoints
    (h = L/(N-1)).  ``spectral`` selects Fourier differentiation, which is
    only available when every dimension is periodic.
    """

    shape: tuple[int, ...]
    lengths: tuple[float, ...]
    bcs: tuple[BoundaryCondition, ...]
    origins: tuple[float, ...] = ()
    spectral: bool = False

    def __post_init__(self):
        if len(self.shape) not in (1, 2):
            raise ValueError("only 1D and 2D grids are supported")
        if len(self.lengths) != len(self.shape) or len(self.bcs) != len(self.shape):
            raise ValueError("shape, lengths, bcs must have equal length")
        if not self.origins:
            object.__setattr__(self, "origins", (0.0,) * len(self.shape))
        for n, length in zip(self.shape, self.lengths):
            if n < _MIN_POINTS:
                raise ValueError(f"need at least {_MIN_POINTS} points per dimension, got {n}")
            if length <= 0:
                raise ValueError("grid extent must be positive")
        if self.spectral and not all(bc.periodic for bc in self.bcs):
            raise ValueError("spectral differentiation requires periodic boundaries")

    @property
    def ndim(self) -> int:
        return len(self.shape)

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))

    @property
    def spacings(self) -> tuple[float, ...]:
        return tuple(
            length / n if bc.periodic else length / (n - 1)
            for n, length, bc in zip(self.shape, self.lengths, self.bcs)
        )

    def axis(self, dim: int = 0) -> np.ndarray:
        """Node coordinates along one dimension."""
        h = self.spacings[dim]
        return self.origins[dim] + h * np.arange(self.shape[dim])

    def coordinates(self) -> list[np.ndarray]:
        """Flattened coordinate arrays, one per dimension, length ``size``."""
        axes = [self.axis(d) for d in range(self.ndim)]
        if self.ndim == 1:
            return axes
        uu, vv = np.meshgrid(axes[0], axes[1], indexing="ij")
        return [uu.ravel(), vv.ravel()]


def grid_1d(
    n: int,
    length: float,
    bc: BoundaryCondition = PERIODIC,
    origin: float = 0.0,
    spectral: bool = False,
) -> SpatialGrid:
    return SpatialGrid((n,), (float(length),), (bc,), (float(origin),), spectral)


def grid_2d(
    shape: tuple[int, int],
    lengths: tuple[float, float],
    bcs: tuple[BoundaryCondition, BoundaryCondition] = (PERIODIC, PERIODIC),
    origins: tuple[float, float] = (0.0, 0.0),
    spectral: bool = False,
) -> SpatialGrid:
    return SpatialGrid(tuple(shape), tuple(map(float, lengths)), tuple(bcs), tuple(map(float, origins)), spectral)


@dataclass(frozen=True)
class GridFunction:
    """Scalar field sampled on a grid; values are flattened C-order."""

    grid: SpatialGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values).ravel()
        object.__setattr__(self, "values", values)
        if values.size != self.grid.size:
            raise ValueError(f"value count {values.size} does not match grid size {self.grid.size}")
        if not np.all(np.isfinite(values)):
            raise ValueError("grid function values must be finite")

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.values) or np.allclose(self.values.imag, 0.0)


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense matrix acting on grid functions, with provenance metadata."""

    matrix: np.ndarray
    grid: SpatialGrid
    label: str = ""
    hermitian_hint: bool = False

    def __post_init__(self):
        m = np.asarray(self.matrix)
        object.__setattr__(self, "matrix", m)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("operator matrix must be square")
        if m.shape[0] != self.grid.size:
            raise ValueError("operator dimension does not match grid size")
        if self.hermitian_hint:
            scale = np.abs(m).max() or 1.0
            if np.abs(m - m.conj().T).max() > 1e-12 * scale:
                raise ValueError(f"operator '{self.label}' flagged hermitian but is not")

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


def _spectral_wavenumbers(n: int, h: float) -> np.ndarray:
    return 2.0 * np.pi * np.fft.fftfreq(n, d=h)


def _spectral_derivative_matrix(n: int, h: float, order: int) -> np.ndarray:
    k = _spectral_wavenumbers(n, h)
    if order == 1:
        sym = 1j * k
        if n % 2 == 0:
            sym[n // 2] = 0.0  # Nyquist mode has no well-defined odd derivative
    elif order == 2:
        sym = -(k**2)
    else:
        raise ValueError("order must be 1 or 2")
    eye = np.eye(n)
    mat = np.fft.ifft(sym[:, None] * np.fft.fft(eye, axis=0), axis=0)
    return np.ascontiguousarray(mat.real)


def _stencil_second_derivative(n: int, h: float, bc: BoundaryCondition) -> np.ndarray:
    mat = np.zeros((n, n))
    inv_h2 = 1.0 / h**2
    idx = np.arange(n)
    mat[idx, idx] = -2.0 * inv_h2
    mat[idx[:-1], idx[:-1] + 1] = inv_h2
    mat[idx[1:], idx[1:] - 1] = inv_h2
    if bc.kind is BCKind.PERIODIC:
        mat[0, n - 1] = inv_h2
        mat[n - 1, 0] = inv_h2
    elif bc.kind is BCKind.DIRICHLET:
        pass  # homogeneous data beyond the boundary nodes; matrix already symmetric
    elif bc.kind is BCKind.NEUMANN:
        # finite-volume half-cell rows keep the matrix exactly symmetric
        mat[0, 0] = -inv_h2
        mat[n - 1, n - 1] = -inv_h2
    elif bc.kind is BCKind.ROBIN:
        c = bc.coefficient
        mat[0, 0] = -(1.0 + h * c) * inv_h2
        mat[n - 1, n - 1] = -(1.0 + h * c) * inv_h2
    return mat


def _stencil_first_derivative(n: int, h: float, bc: BoundaryCondition) -> np.ndarray:
    mat = np.zeros((n, n))
    inv_2h = 0.5 / h
    idx = np.arange(1, n - 1)
    mat[idx, idx + 1] = inv_2h
    mat[idx, idx - 1] = -inv_2h
    if bc.kind is BCKind.PERIODIC:
        mat[0, 1] = inv_2h
        mat[0, n - 1] = -inv_2h
        mat[n - 1, 0] = inv_2h
        mat[n - 1, n - 2] = -inv_2h
    else:
        # one-sided second-order differences at the walls
        mat[0, 0], mat[0, 1], mat[0, 2] = -3.0 * inv_2h, 4.0 * inv_2h, -inv_2h
        mat[n - 1, n - 1], mat[n - 1, n - 2], mat[n - 1, n - 3] = (
            3.0 * inv_2h,
            -4.0 * inv_2h,
            inv_2h,
        )
    return mat


def _derivative_1d(grid: SpatialGrid, dim: int, order: int) -> np.ndarray:
    n = grid.shape[dim]
    h = grid.spacings[dim]
    bc = grid.bcs[dim]
    if grid.spectral:
        return _spectral_derivative_matrix(n, h, order)
    if order == 2:
        return _stencil_second_derivative(n, h, bc)
    return _stencil_first_derivative(n, h, bc)


def _lift(grid: SpatialGrid, mat: np.ndarray, dim: int) -> np.ndarray:
    """Embed a per-dimension matrix into the full tensor-product space."""
    if grid.ndim == 1:
        return mat
    if dim == 0:
        return np.kron(mat, np.eye(grid.shape[1]))
    return np.kron(np.eye(grid.shape[0]), mat)


def derivative_matrix(grid: SpatialGrid, dim: int = 0, order: int = 1) -> np.ndarray:
    """Dense differentiation matrix along ``dim`` on the full grid."""
    return _lift(grid, _derivative_1d(grid, dim, order), dim)


def laplacian_matrix(grid: SpatialGrid) -> OperatorMatrix:
    """Discretized +del^2 (callers negate for kinetic terms).

    Symmetric for every supported boundary condition; spectral on periodic
    grids flagged ``spectral``.
    """
    mat = sum(_lift(grid, _derivative_1d(grid, d, 2), d) for d in range(grid.ndim))
    return OperatorMatrix(mat, grid, label="laplacian", hermitian_hint=True)


def gradient_apply(f: GridFunction, dim: int = 0) -> GridFunction:
    """First derivative of a grid function along one dimension.

    Uses the same discretization (stencil or spectral) as
    :func:`laplacian_matrix`, so downstream operator identities hold at
    finite resolution.
    """
    mat = derivative_matrix(f.grid, dim=dim, order=1)
    return GridFunction(f.grid, mat @ f.values)


def gradient_components(f: GridFunction) -> list[np.ndarray]:
    return [gradient_apply(f, dim=d).values for d in range(f.grid.ndim)]
