"""
latgap

Exact lattice programming gaps, Frobenius numbers, gap bounds and
Gomory group relaxations.
"""

from .bounds import (
    Interval,
    bounds_report,
    covering_radius,
    grid_cover_check,
    inradius,
    lower_bound_factorial,
    lower_bound_rho,
    upper_bound,
)
from .frobenius import frobenius_number, lambda_a, oracle_frobenius
from .gomory import (
    build_relaxation,
    create_ip_instance,
    ip_bruteforce,
    lp_solve,
    relaxation_report,
    single_row_relaxation,
    solve_relaxation,
    witness_rhs,
)
from .groupsolve import GroupInstance, gap, oracle_m, solve_all, solve_m
from .intlat import coset_label, det_abs, hnf, is_member, kernel_lattice, snf
from .types import (
    BoundsReport,
    CostVector,
    GapCertificate,
    GroupSolution,
    IpInstance,
    LatticeBasis,
    LpBasisResult,
)
from .utils import LatGapError, ResourceLimitError, ValidationError

__version__ = "1.0.0"

__all__ = [
    "BoundsReport",
    "CostVector",
    "GapCertificate",
    "GroupInstance",
    "GroupSolution",
    "Interval",
    "IpInstance",
    "LatGapError",
    "LatticeBasis",
    "LpBasisResult",
    "ResourceLimitError",
    "ValidationError",
    "bounds_report",
    "build_relaxation",
    "coset_label",
    "covering_radius",
    "create_ip_instance",
    "det_abs",
    "frobenius_number",
    "gap",
    "grid_cover_check",
    "hnf",
    "inradius",
    "ip_bruteforce",
    "is_member",
    "kernel_lattice",
    "lambda_a",
    "lower_bound_factorial",
    "lower_bound_rho",
    "lp_solve",
    "oracle_frobenius",
    "oracle_m",
    "relaxation_report",
    "single_row_relaxation",
    "snf",
    "solve_all",
    "solve_m",
    "solve_relaxation",
    "upper_bound",
    "witness_rhs",
]
