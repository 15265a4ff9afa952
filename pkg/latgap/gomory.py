"""
Gomory group relaxations of integer programs.

For an optimal LP basis tau the relaxation drops x_tau >= 0 and keeps
only the congruence x_nb = u_nb (mod Lambda(A)), where Lambda(A) is the
projection of the integer kernel of A onto the nonbasic coordinates and
the costs are the LP reduced costs. The relaxation value plus the LP
constant is a lower bound on the integer optimum.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

from .config import resolve
from .groupsolve import GroupInstance, gap, solve_m
from .intlat import det_abs_rows, kernel_lattice, lattice_from_generators, solve_integer
from .lp import independent_columns, rational_inverse_times, rational_solve, solve_lp
from .types import GapCertificate, IntMatrix, IntVector, IpInstance, LpBasisResult, RatVector
from .utils import (
    DimensionMismatch,
    NonGenericReducedCosts,
    OracleLimitExceeded,
    ValidationError,
    dot,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GroupRelaxation:
    """The lattice program x = residue (mod lattice), x >= 0 with reduced costs."""
    group: GroupInstance
    residue: IntVector
    constant: Fraction
    basis: IntVector
    nonbasis: IntVector
    row: Optional[int] = None

    @property
    def dim(self) -> int:
        return self.group.dim


@dataclass(frozen=True)
class RelaxationSolution:
    """Relaxation bound and the nonbasic part of its minimizer."""
    bound: Fraction
    group_value: Fraction
    x_nonbasic: IntVector


@dataclass(frozen=True)
class GroupForm:
    """
    Congruences (D A_tau^-1 A_nb) x_nb = D A_tau^-1 b (mod D).

    A_hat and b_hat are reduced into [0, D).
    """
    D: int
    A_hat: IntMatrix
    b_hat: IntVector
    basis: IntVector
    nonbasis: IntVector


@dataclass(frozen=True)
class LiftedSolution:
    """Full vector x with x_tau = A_tau^-1 (b - A_nb x_nb)."""
    x: RatVector
    integral: bool
    nonnegative: bool

    @property
    def feasible(self) -> bool:
        return self.integral and self.nonnegative


@dataclass(frozen=True)
class RelaxationReport:
    """LP basis, relaxation and its solution with the lifted point."""
    lp: LpBasisResult
    relaxation: GroupRelaxation
    solution: RelaxationSolution
    lifted: LiftedSolution

    @property
    def ip_optimal(self) -> bool:
        """A feasible lift attains the lower bound, so it is an IP optimum."""
        return self.lifted.feasible


@dataclass(frozen=True)
class WitnessResult:
    """Right-hand side b' = A u whose IP optimum is the gap plus the LP constant."""
    b_prime: IntVector
    u: IntVector
    predicted: Fraction
    gap: Fraction
    constant: Fraction


@dataclass(frozen=True)
class IpSolution:
    """Brute-force IP optimum; value is None when the box holds no feasible point."""
    value: Optional[Fraction]
    x: Optional[IntVector]
    box: int

    @property
    def feasible(self) -> bool:
        return self.value is not None


def create_ip_instance(A: Sequence[Sequence[int]], b: Sequence[int], c: Sequence) -> IpInstance:
    """Build and validate an IP instance."""
    return IpInstance(tuple(tuple(row) for row in A), tuple(b), tuple(c))


def lp_solve(inst: IpInstance) -> LpBasisResult:
    """
    Optimal basis of the linear relaxation.

    Args:
        inst: Integer program

    Returns:
        Basis, LP value and reduced costs c'_nb = c_nb - c_tau A_tau^-1 A_nb
    """
    lp = solve_lp(inst.A, inst.b, inst.c)
    if not lp.unique:
        logger.warning(f"LP optimum is not unique: reduced costs {[str(v) for v in lp.reduced_costs]}")
    return lp


def _columns(A: Sequence[Sequence[int]], indices: Sequence[int]) -> IntMatrix:
    return tuple(tuple(row[j] for j in indices) for row in A)


def _require_nonbasic(lp: LpBasisResult) -> None:
    if not lp.nonbasis:
        raise DimensionMismatch("No nonbasic variables: the relaxation is zero-dimensional")
    if any(v == 0 for v in lp.reduced_costs):
        zeros = [j for j, v in zip(lp.nonbasis, lp.reduced_costs) if v == 0]
        raise NonGenericReducedCosts(f"Reduced costs vanish at nonbasic variables {zeros}")


def projected_kernel_lattice(A: Sequence[Sequence[int]], nonbasis: Sequence[int]):
    """Lambda(A): the integer kernel of A restricted to the nonbasic coordinates."""
    kernel = kernel_lattice(A)
    generators = [tuple(row[j] for j in nonbasis) for row in kernel]
    return lattice_from_generators(generators, len(nonbasis))


def build_relaxation(inst: IpInstance, lp: Optional[LpBasisResult] = None) -> GroupRelaxation:
    """
    Group relaxation x_nb = u_nb (mod Lambda(A)), x_nb >= 0 with reduced costs.

    Args:
        inst: Integer program
        lp: Optimal basis (computed when omitted)

    Returns:
        Relaxation; its constant is c_tau A_tau^-1 b
    """
    lp = lp or lp_solve(inst)
    _require_nonbasic(lp)
    lattice = projected_kernel_lattice(inst.A, lp.nonbasis)
    u = solve_integer(inst.A, inst.b)
    residue = tuple(u[j] for j in lp.nonbasis)
    group = GroupInstance.create(lattice, lp.reduced_costs)
    logger.info(f"Group relaxation: k={group.dim}, det={group.coset_count}, residue={residue}")
    return GroupRelaxation(
        group=group,
        residue=residue,
        constant=lp.lp_value,
        basis=lp.basis,
        nonbasis=lp.nonbasis,
    )


def solve_relaxation(rel: GroupRelaxation, max_cosets: Optional[int] = None) -> RelaxationSolution:
    """
    Lower bound m(Lambda(A), c', u_nb) + c_tau A_tau^-1 b.

    Args:
        rel: Group relaxation
        max_cosets: Coset limit

    Returns:
        Bound with the nonbasic minimizer
    """
    solution = solve_m(rel.group, rel.residue, max_cosets)
    return RelaxationSolution(
        bound=solution.value + rel.constant,
        group_value=solution.value,
        x_nonbasic=solution.minimizer,
    )


def group_form(inst: IpInstance, lp: Optional[LpBasisResult] = None) -> GroupForm:
    """
    Congruence presentation of the relaxation with denominator D = |det A_tau|.

    Args:
        inst: Integer program
        lp: Optimal basis (computed when omitted)

    Returns:
        D, D frac(A_tau^-1 A_nb) and D frac(A_tau^-1 b)
    """
    lp = lp or lp_solve(inst)
    A_tau = _columns(inst.A, lp.basis)
    D = det_abs_rows(A_tau)
    A_bar = rational_inverse_times(A_tau, _columns(inst.A, lp.nonbasis))
    b_bar = rational_solve(A_tau, inst.b)

    def scaled_fraction(q: Fraction) -> int:
        return int(D * (q - math.floor(q)))

    return GroupForm(
        D=D,
        A_hat=tuple(tuple(scaled_fraction(v) for v in row) for row in A_bar),
        b_hat=tuple(scaled_fraction(v) for v in b_bar),
        basis=lp.basis,
        nonbasis=lp.nonbasis,
    )


def single_row_relaxation(inst: IpInstance, i: int, lp: Optional[LpBasisResult] = None) -> GroupRelaxation:
    """
    Relaxation keeping only row i of the group form.

    The lattice is {x : (D a_hat_i).x = 0 (mod D)} and the residue solves
    (D a_hat_i).r = D b_hat_i (mod D).

    Args:
        inst: Integer program
        i: Row index (0-based)
        lp: Optimal basis (computed when omitted)

    Returns:
        Relaxation with the same costs and constant as build_relaxation
    """
    if not 0 <= i < inst.d:
        raise DimensionMismatch(f"Row index {i} outside [0, {inst.d})")
    lp = lp or lp_solve(inst)
    _require_nonbasic(lp)
    form = group_form(inst, lp)
    D = form.D
    row = list(form.A_hat[i])
    k = len(row)
    generators = [tuple(D if p == q else 0 for q in range(k)) for p in range(k)]
    generators += [g[:k] for g in kernel_lattice([row + [D]])]
    lattice = lattice_from_generators(generators, k)
    residue = tuple(solve_integer([row + [D]], [form.b_hat[i]])[:k])
    group = GroupInstance.create(lattice, lp.reduced_costs)
    logger.info(f"Single-row relaxation on row {i}: det={group.coset_count}, D={D}")
    return GroupRelaxation(
        group=group,
        residue=residue,
        constant=lp.lp_value,
        basis=lp.basis,
        nonbasis=lp.nonbasis,
        row=i,
    )


def lift_solution(inst: IpInstance, rel: GroupRelaxation, x_nonbasic: Sequence[int]) -> LiftedSolution:
    """
    Complete x_nb to a solution of A x = b.

    Args:
        inst: Integer program
        rel: Relaxation providing the basis split
        x_nonbasic: Values of the nonbasic variables

    Returns:
        Full vector and whether it is integral and nonnegative
    """
    if len(x_nonbasic) != len(rel.nonbasis):
        raise DimensionMismatch(f"Expected {len(rel.nonbasis)} nonbasic values, got {len(x_nonbasic)}")
    A_tau = _columns(inst.A, rel.basis)
    rest = [
        bi - sum(row[j] * v for j, v in zip(rel.nonbasis, x_nonbasic))
        for row, bi in zip(inst.A, inst.b)
    ]
    x_tau = rational_solve(A_tau, rest)
    x = [Fraction(0)] * inst.n
    for j, v in zip(rel.basis, x_tau):
        x[j] = v
    for j, v in zip(rel.nonbasis, x_nonbasic):
        x[j] = Fraction(v)
    return LiftedSolution(
        x=tuple(x),
        integral=all(v.denominator == 1 for v in x),
        nonnegative=all(v >= 0 for v in x),
    )


def relaxation_report(inst: IpInstance, row: Optional[int] = None,
                      max_cosets: Optional[int] = None) -> RelaxationReport:
    """
    Full relaxation pipeline for one instance.

    Args:
        inst: Integer program
        row: Build the single-row relaxation of this row instead of the full one
        max_cosets: Coset limit

    Returns:
        LP basis, relaxation, bound and lifted minimizer
    """
    lp = lp_solve(inst)
    rel = build_relaxation(inst, lp) if row is None else single_row_relaxation(inst, row, lp)
    solution = solve_relaxation(rel, max_cosets)
    lifted = lift_solution(inst, rel, solution.x_nonbasic)
    return RelaxationReport(lp=lp, relaxation=rel, solution=solution, lifted=lifted)


def witness_rhs(A: Sequence[Sequence[int]], c: Sequence, cert: Optional[GapCertificate] = None,
                max_cosets: Optional[int] = None) -> WitnessResult:
    """
    Right-hand side whose IP optimum equals gap(Lambda(A), c') plus the LP constant.

    Takes u with u_nb = witness_x and u_tau = 0 and returns b' = A u.

    Args:
        A: 1 x n knapsack row
        c: Costs
        cert: Gap certificate of the relaxation lattice (computed when omitted)
        max_cosets: Coset limit

    Returns:
        b', u and the predicted optimum
    """
    if len(A) != 1:
        raise DimensionMismatch(f"Witness construction needs a single row, got {len(A)}")
    trial = create_ip_instance(A, [sum(A[0])], c)
    lp = lp_solve(trial)
    rel = build_relaxation(trial, lp)
    if cert is None:
        cert = gap(rel.group, max_cosets)
    if len(cert.witness_x) != len(lp.nonbasis):
        raise DimensionMismatch("Certificate does not match the relaxation dimension")
    u = [0] * trial.n
    for j, v in zip(lp.nonbasis, cert.witness_x):
        u[j] = v
    b_prime = tuple(dot(row, u) for row in trial.A)
    A_tau = _columns(trial.A, lp.basis)
    x_tau = rational_solve(A_tau, b_prime)
    constant = sum((trial.c[j] * v for j, v in zip(lp.basis, x_tau)), Fraction(0))
    logger.info(f"Witness right-hand side b'={b_prime}, predicted optimum {cert.gap + constant}")
    return WitnessResult(
        b_prime=b_prime,
        u=tuple(u),
        predicted=cert.gap + constant,
        gap=cert.gap,
        constant=constant,
    )


def default_box(inst: IpInstance) -> int:
    """
    Coordinate bound implied by a row with positive entries.

    Raises:
        ValidationError: If no row is entrywise positive
    """
    bounds = [
        max(max(bi, 0) // a for a in row)
        for row, bi in zip(inst.A, inst.b)
        if all(a > 0 for a in row)
    ]
    if not bounds:
        raise ValidationError("No positive row bounds the variables; pass an explicit box")
    return min(bounds)


def ip_bruteforce(inst: IpInstance, box: Optional[int] = None, limit: Optional[int] = None) -> IpSolution:
    """
    Exact IP optimum over the box [0, box]^n.

    Enumerates the free coordinates depth first and solves for the pivot
    coordinates. Rows with positive entries prune the search. Among
    optimal points the lexicographically smallest is returned.

    Args:
        inst: Integer program
        box: Per-coordinate upper bound (derived from a positive row when omitted)
        limit: Largest number of visited search nodes

    Returns:
        Optimum, or value None when no feasible point lies in the box
    """
    if box is None:
        box = default_box(inst)
    if box < 0:
        raise ValidationError(f"Box must be nonnegative, got {box}")
    pivots = independent_columns(inst.A)
    free = tuple(j for j in range(inst.n) if j not in pivots)
    positive_rows = [i for i, row in enumerate(inst.A) if all(a > 0 for a in row)]
    point_limit = resolve(limit, "oracle_points")
    if box + 1 > point_limit:
        raise OracleLimitExceeded(f"IP box [0, {box}] is wider than the limit {point_limit}")
    if not positive_rows and (box + 1) ** len(free) > point_limit:
        raise OracleLimitExceeded(f"IP search over {(box + 1) ** len(free)} points exceeds limit {point_limit}")

    identity = [[1 if p == q else 0 for q in range(inst.d)] for p in range(inst.d)]
    piv_inverse = rational_inverse_times(_columns(inst.A, pivots), identity)
    best = None
    visited = 0
    values = [0] * len(free)

    def complete():
        rest = [
            bi - sum(row[j] * v for j, v in zip(free, values))
            for row, bi in zip(inst.A, inst.b)
        ]
        x_piv = [sum((a * v for a, v in zip(inv_row, rest)), Fraction(0)) for inv_row in piv_inverse]
        if any(v.denominator != 1 or v < 0 or v > box for v in x_piv):
            return None
        x = [0] * inst.n
        for j, v in zip(pivots, x_piv):
            x[j] = int(v)
        for j, v in zip(free, values):
            x[j] = v
        return dot(inst.c, x), tuple(x)

    def search(position: int, partial: List[int]) -> None:
        nonlocal best, visited
        visited += 1
        if visited > point_limit:
            raise OracleLimitExceeded(f"IP search visited more than {point_limit} nodes")
        if position == len(free):
            candidate = complete()
            if candidate is not None and (best is None or candidate < best):
                best = candidate
            return
        j = free[position]
        for v in range(box + 1):
            sums = [s + inst.A[i][j] * v for s, i in zip(partial, positive_rows)]
            if any(s > inst.b[i] for s, i in zip(sums, positive_rows)):
                break
            values[position] = v
            search(position + 1, sums)
        values[position] = 0

    search(0, [0] * len(positive_rows))
    if best is None:
        logger.info(f"No feasible point in [0, {box}]^{inst.n}")
        return IpSolution(value=None, x=None, box=box)
    logger.debug(f"IP brute force visited {visited} nodes")
    return IpSolution(value=Fraction(best[0]), x=best[1], box=box)
