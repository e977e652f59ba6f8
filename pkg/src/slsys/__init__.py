"""slsys: sector classification of half-line Schroedinger boundary systems.

Evaluates the impedance and transfer functions of the boundary triple
(h, mu, m) built on the Weyl function of -y'' + q(x) y on [a, +inf),
classifies the impedance into the sectorial Stieltjes / inverse-Stieltjes
families, and computes every derived angle (limit angles, operator sector
angles, the branch-wide angle) together with the critical extension
parameters where sectoriality is lost.
"""

from .backend import backend_name
from .branchcut import INF, sqrt_cut
from .errors import (
    AccuracyError,
    ClassError,
    ConvergenceError,
    DomainError,
    EvaluationError,
    InputError,
    IntegrationError,
    InternalConsistencyError,
    NoLimitError,
    NotAccretiveError,
    PoleError,
    SingularRelationError,
    SlsysError,
)
from .herglotz import (
    AnalyticFunction,
    AngleEstimate,
    CheckResult,
    IntegralRepresentation,
    PsdVerdict,
    SectorKernel,
    angle_from_measure,
    build_sector_kernel,
    extract_representation,
    herglotz_check,
    is_psd,
    limit_neg_infinity,
    limit_neg_zero,
    measure_angle_integral,
    min_sector_angle,
    random_upper_points,
    stieltjes_check,
    stieltjes_inversion_slice,
)
from .lsystem import (
    BoundaryParameter,
    ExtensionParameter,
    MuScanRow,
    OperatorStatus,
    ScanResult,
    ScanSummary,
    SchrodingerLSystem,
    SectorReport,
    THReport,
    UniversalBeta,
    alpha_from_class,
    class_angles,
    classify_extension,
    f_mu,
    full_report,
    impedance,
    impedance_from_transfer,
    impedance_function,
    mu0_inverse,
    mu0_stieltjes,
    scan_mu,
    t_h_report,
    transfer,
    transfer_function,
    universal_beta,
)
from .weyl import (
    CauchySolution,
    Potential,
    SolverSettings,
    WeylFunction,
    solve_cauchy,
    weyl_m,
    weyl_m_dirichlet,
    weyl_m_neg_zero,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
