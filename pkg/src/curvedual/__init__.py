"""curvedual: exact duality between imaginary Floquet drives in flat space
and free quantum motion on curved embedded manifolds.

Forward direction: drive profile -> stroboscopic effective Hamiltonian ->
comparison with the curved-space operator.  Inverse direction: target
conformal metric -> laboratory drive profile and static potential.
"""

from .drive import (
    Constant,
    DriveMoments,
    DriveProfile,
    Sawtooth,
    Sinusoid,
    SinusoidSquared,
    Tabulated,
    TemporalDrive,
    alpha_functionals,
    moments,
    profile_from_samples,
)
from .design import DesignResult, TargetMetric, design_drive, design_grid, gamma_in_z, invert_map, x_of_z
from .floquet import MonodromyResult, NumericalFailure, evolve_state, extract_hf, micromotion, monodromy
from .geometry import (
    ConformalChart,
    CurvatureMethod,
    ManifoldData,
    TorusParams,
    curved_hamiltonian,
    forward_chart,
    gauss_curvature,
    torus_chart,
    torus_drive,
)
from .grid import (
    BoundaryCondition,
    DIRICHLET,
    GridFunction,
    NEUMANN,
    OperatorMatrix,
    PERIODIC,
    SpatialGrid,
    gradient_apply,
    grid_1d,
    grid_2d,
    laplacian_matrix,
    robin,
)
from .operators import build_abc, commutator, h_prime, magnus1, magnus1_via_similarity, magnus2
from .spectral import SpectralReport, eigensolve, eta_residual, metric_operator, reality_report

__version__ = "0.1.0"
