"""Local randomized-neural-network bases glued by discontinuous Galerkin forms.

Solves Poisson/Helmholtz model problems and the heat equation (space-time, no
time marching) with per-element random-feature bases whose output layers are
obtained by one dense least-squares solve.
"""

from ._kernels import USING_NUMBA
from .assembly_elliptic import (
    AssembledSystem,
    EllipticProblem,
    PenaltySpec,
    assemble_lrnn_c0dg,
    assemble_lrnn_c1dg,
    assemble_lrnn_dg,
)
from .assembly_spacetime import (
    HeatProblem,
    assemble_st_lrnn_c0dg,
    assemble_st_lrnn_c1dg,
    assemble_st_lrnn_dg,
)
from .basis import (
    FeatureBasis,
    FeatureEval,
    PolyBasis,
    polynomial_bases,
    polynomial_features,
    sample_bases,
    sample_basis,
)
from .collocation import CollocationSet, build_collocation
from .geometry import Domain, Element, Face, Partition, build_partition, faces_of
from .harness import ExperimentConfig, ResultRow, run_experiment, run_to_dir
from .linsolve import LstsqReport, NotSpdError, solve_lstsq, solve_spd, solve_system
from .postprocess import (
    ErrorReport,
    Solution,
    boundary_mismatch,
    build_error_report,
    error_norms,
    final_time_error_norms,
    jump_norms,
)
from .problems import heat_1d, helmholtz_1d, make_problem, poisson_2d
from .quadrature import QuadRule, face_rule, gauss_legendre, map_to_element, tensor_rule

__version__ = "0.1.0"

__all__ = [
    "AssembledSystem", "CollocationSet", "Domain", "Element", "EllipticProblem",
    "ErrorReport", "ExperimentConfig", "Face", "FeatureBasis", "FeatureEval",
    "HeatProblem", "LstsqReport", "NotSpdError", "Partition", "PenaltySpec",
    "PolyBasis", "QuadRule", "ResultRow", "Solution", "USING_NUMBA",
    "assemble_lrnn_c0dg", "assemble_lrnn_c1dg", "assemble_lrnn_dg",
    "assemble_st_lrnn_c0dg", "assemble_st_lrnn_c1dg", "assemble_st_lrnn_dg",
    "boundary_mismatch", "build_collocation", "build_error_report",
    "build_partition", "error_norms",
    "face_rule", "faces_of", "final_time_error_norms", "gauss_legendre",
    "heat_1d", "helmholtz_1d", "jump_norms", "make_problem", "map_to_element",
    "poisson_2d", "polynomial_bases", "polynomial_features", "run_experiment",
    "run_to_dir", "sample_bases", "sample_basis", "solve_lstsq", "solve_spd",
    "solve_system", "tensor_rule",
]
