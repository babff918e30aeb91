"""Numerical verification of non-commutative Brascamp-Lieb inequalities and
entropy subadditivity, in tensor-product, Clifford and Gaussian settings."""

__version__ = "0.1.0"

from .linalg import (
    Density,
    DomainError,
    EigensolverError,
    TraceFunctional,
    entropy,
    log_trace_exp,
    matrix_exp,
    matrix_log,
    random_density,
    random_hermitian,
    relative_entropy,
)
from .report import VerificationReport
from .tensor import CoverSpec, FactorSystem, embed, partial_trace, verify_ssa, verify_tensor_bl
from .clifford import CliffordAlgebra, CliffordElement, conditional_expectation, rho_a, verify_clifford_bl
from .frames import FrameSpec, SubspaceSpec, check_frame_condition, verify_cosh_inequality, verify_psi_subadditivity
from .flow import entropy_production, mehler_flow, verify_gross_formula, verify_production_monotonicity
from .gaussian import verify_gaussian_bl_quadrature, verify_gaussian_sa
from .duality import CliffordSetting, TensorSetting, verify_duality_equivalence

__all__ = [name for name in dir() if not name.startswith("_")]
