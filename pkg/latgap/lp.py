"""
Exact rational linear programming.

A two-phase tableau simplex over Fractions with Bland's rule, plus the
small pieces of rational linear algebra the relaxation code needs.
"""

import logging
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .types import LpBasisResult
from .utils import DimensionMismatch, LpInfeasible, LpUnbounded, RankDeficient, SingularBasis

logger = logging.getLogger(__name__)

OPTIMAL = "optimal"
UNBOUNDED = "unbounded"
CONTINUE = "continue"


class SimplexTableau:
    """
    Tableau B^-1 [A | I] for min c.x s.t. A x = b, x >= 0.

    Columns n .. n + m - 1 are artificial variables; they start basic and
    are never allowed to re-enter once phase one is over.
    """

    def __init__(self, A: Sequence[Sequence[int]], b: Sequence[int]):
        self.m = len(A)
        self.n = len(A[0])
        self.rows: List[List[Fraction]] = []
        self.rhs: List[Fraction] = []
        for i, (row, value) in enumerate(zip(A, b)):
            sign = -1 if value < 0 else 1
            artificial = [Fraction(1 if j == i else 0) for j in range(self.m)]
            self.rows.append([Fraction(sign * a) for a in row] + artificial)
            self.rhs.append(Fraction(sign * value))
        self.basis = list(range(self.n, self.n + self.m))
        self.allowed = self.n + self.m

    def reduced_costs(self, cost: Sequence[Fraction]) -> List[Fraction]:
        """r_j = c_j - c_B B^-1 A_j for every column."""
        width = self.n + self.m
        result = list(cost) + [Fraction(0)] * (width - len(cost))
        for i, var in enumerate(self.basis):
            c_b = cost[var] if var < len(cost) else Fraction(0)
            if c_b:
                row = self.rows[i]
                for j in range(width):
                    result[j] -= c_b * row[j]
        return result

    def pivot(self, i: int, j: int) -> None:
        logger.debug(f"Pivot: x{self.basis[i]} leaves, x{j} enters")
        piv = self.rows[i][j]
        self.rows[i] = [v / piv for v in self.rows[i]]
        self.rhs[i] /= piv
        for r in range(self.m):
            if r != i and self.rows[r][j]:
                f = self.rows[r][j]
                self.rows[r] = [a - f * p for a, p in zip(self.rows[r], self.rows[i])]
                self.rhs[r] -= f * self.rhs[i]
        self.basis[i] = j

    def bland_step(self, cost: Sequence[Fraction]) -> str:
        r = self.reduced_costs(cost)
        basic = set(self.basis)
        entering = next((j for j in range(self.allowed) if j not in basic and r[j] < 0), None)
        if entering is None:
            return OPTIMAL
        candidates = [
            (self.rhs[i] / self.rows[i][entering], self.basis[i], i)
            for i in range(self.m)
            if self.rows[i][entering] > 0
        ]
        if not candidates:
            return UNBOUNDED
        _, _, leaving = min(candidates)
        self.pivot(leaving, entering)
        return CONTINUE

    def run(self, cost: Sequence[Fraction]) -> str:
        while True:
            status = self.bland_step(cost)
            if status != CONTINUE:
                return status

    def drive_out_artificials(self) -> None:
        """Pivot zero-level artificials out of the basis."""
        for i in range(self.m):
            if self.basis[i] < self.n:
                continue
            j = next((j for j in range(self.n) if self.rows[i][j] != 0), None)
            if j is None:
                raise RankDeficient("Constraint rows are linearly dependent")
            self.pivot(i, j)

    def solution(self) -> List[Fraction]:
        x = [Fraction(0)] * self.n
        for i, var in enumerate(self.basis):
            if var < self.n:
                x[var] = self.rhs[i]
        return x


def solve_lp(A: Sequence[Sequence[int]], b: Sequence[int], c: Sequence[Fraction]) -> LpBasisResult:
    """
    Solve min{c.x : A x = b, x >= 0} exactly.

    Args:
        A: d x n integer matrix of rank d
        b: Right-hand side
        c: Rational costs

    Returns:
        First optimal basis reached under Bland's rule
    """
    if len(b) != len(A) or len(c) != len(A[0]):
        raise DimensionMismatch(f"LP of shape {len(A)}x{len(A[0])} with |b|={len(b)}, |c|={len(c)}")
    tableau = SimplexTableau(A, b)
    n, m = tableau.n, tableau.m
    phase_one = [Fraction(0)] * n + [Fraction(1)] * m
    tableau.run(phase_one)
    infeasibility = sum(tableau.rhs[i] for i, var in enumerate(tableau.basis) if var >= n)
    if infeasibility > 0:
        raise LpInfeasible(f"No x >= 0 with A x = {list(b)}")
    tableau.drive_out_artificials()
    tableau.allowed = n

    cost = [Fraction(v) for v in c]
    if tableau.run(cost) == UNBOUNDED:
        raise LpUnbounded("Linear relaxation is unbounded")

    basis = tuple(sorted(tableau.basis))
    nonbasis = tuple(j for j in range(n) if j not in basis)
    r = tableau.reduced_costs(cost)
    reduced = tuple(r[j] for j in nonbasis)
    x = tuple(tableau.solution())
    value = sum((cj * xj for cj, xj in zip(cost, x)), Fraction(0))
    unique = all(v > 0 for v in reduced)
    logger.info(f"LP optimum {value} with basis {basis}")
    return LpBasisResult(
        basis=basis,
        nonbasis=nonbasis,
        lp_value=value,
        x=x,
        reduced_costs=reduced,
        unique=unique,
    )


def check_pointed(A: Sequence[Sequence[int]]) -> bool:
    """
    Whether the kernel of A meets the nonnegative orthant only at 0.

    Solves max sum(x) s.t. A x = 0, 0 <= x <= 1. A positive optimum is a
    nonzero nonnegative kernel vector. When the optimum is 0 some y has
    y A > 0, so cone(A) is pointed as well.
    """
    d, n = len(A), len(A[0])
    rows = [list(row) + [0] * n for row in A]
    for i in range(n):
        rows.append([1 if j == i or j == n + i else 0 for j in range(2 * n)])
    b = [0] * d + [1] * n
    c = [Fraction(-1)] * n + [Fraction(0)] * n
    result = solve_lp(rows, b, c)
    pointed = result.lp_value == 0
    logger.debug(f"Pointedness check: max sum(x) = {-result.lp_value}")
    return pointed


def rational_solve(M: Sequence[Sequence], rhs: Sequence) -> Tuple[Fraction, ...]:
    """
    Solve M y = rhs for square nonsingular M over the rationals.

    Args:
        M: Square matrix
        rhs: Right-hand side

    Returns:
        Exact solution
    """
    n = len(M)
    if any(len(row) != n for row in M) or len(rhs) != n:
        raise DimensionMismatch("rational_solve needs a square system")
    T = [[Fraction(v) for v in row] + [Fraction(r)] for row, r in zip(M, rhs)]
    for col in range(n):
        pivot = next((i for i in range(col, n) if T[i][col] != 0), None)
        if pivot is None:
            raise SingularBasis("Basis matrix is singular")
        T[col], T[pivot] = T[pivot], T[col]
        p = T[col][col]
        T[col] = [v / p for v in T[col]]
        for i in range(n):
            if i != col and T[i][col]:
                f = T[i][col]
                T[i] = [a - f * q for a, q in zip(T[i], T[col])]
    return tuple(T[i][n] for i in range(n))


def rational_inverse_times(M: Sequence[Sequence], B: Sequence[Sequence]) -> Tuple[Tuple[Fraction, ...], ...]:
    """M^-1 B, column by column."""
    columns = [rational_solve(M, [row[j] for row in B]) for j in range(len(B[0]))]
    return tuple(tuple(col[i] for col in columns) for i in range(len(M)))


def independent_columns(A: Sequence[Sequence[int]]) -> Optional[Tuple[int, ...]]:
    """Pivot columns of the row echelon form of A, or None when rank < rows."""
    T = [[Fraction(v) for v in row] for row in A]
    m, n = len(T), len(T[0])
    pivots = []
    r = 0
    for col in range(n):
        if r == m:
            break
        pivot = next((i for i in range(r, m) if T[i][col] != 0), None)
        if pivot is None:
            continue
        T[r], T[pivot] = T[pivot], T[r]
        for i in range(r + 1, m):
            if T[i][col]:
                f = T[i][col] / T[r][col]
                T[i] = [a - f * q for a, q in zip(T[i], T[r])]
        pivots.append(col)
        r += 1
    return tuple(pivots) if r == m else None
