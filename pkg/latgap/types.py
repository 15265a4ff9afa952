"""
Type definitions for latgap.

Matrices are tuples of integer rows. A lattice basis always stores its
basis vectors as ROWS; every function and file format in the package
follows that convention.
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, Mapping, Optional, Tuple

IntVector = Tuple[int, ...]
IntMatrix = Tuple[IntVector, ...]
RatVector = Tuple[Fraction, ...]


@dataclass(frozen=True)
class LatticeBasis:
    """Full-rank k x k integer basis; rows generate the lattice."""
    rows: IntMatrix

    def __post_init__(self):
        from .intlat import det_abs_rows
        from .utils import DimensionMismatch, SingularBasis

        rows = tuple(tuple(int(v) for v in row) for row in self.rows)
        object.__setattr__(self, "rows", rows)
        k = len(rows)
        if k == 0 or any(len(row) != k for row in rows):
            raise DimensionMismatch(f"Lattice basis must be a non-empty square matrix, got {k} rows")
        if det_abs_rows(rows) == 0:
            raise SingularBasis("Lattice basis is singular")

    @property
    def dim(self) -> int:
        return len(self.rows)


@dataclass(frozen=True)
class SnfDecomposition:
    """
    Smith normal form U * B * V = diag(d) of a lattice basis B.

    The quotient Z^k / Lambda is presented as the product of Z_{d_i}. With
    rows as basis vectors, x lies in Lambda exactly when (V^T x)_i is
    divisible by d_i for every i, so V^T drives the coset labels.
    """
    U: IntMatrix
    V: IntMatrix
    V_inv: IntMatrix
    d: IntVector
    N: int

    @property
    def dim(self) -> int:
        return len(self.d)


@dataclass(frozen=True)
class CosetLabel:
    """Element of Z^k / Lambda in SNF coordinates, 0 <= u_i < d_i."""
    digits: IntVector
    index: int


@dataclass(frozen=True)
class CostVector:
    """Positive rational costs l and their integer scaling w = D_l * l."""
    l: RatVector
    weights: IntVector
    denominator: int

    @property
    def dim(self) -> int:
        return len(self.l)

    @property
    def total(self) -> Fraction:
        return sum(self.l, Fraction(0))


@dataclass(frozen=True)
class GroupSolution:
    """Minimum of l.x over x = r (mod Lambda), x >= 0."""
    value: Fraction
    minimizer: IntVector
    residue_label: CosetLabel


@dataclass(frozen=True)
class GapCertificate:
    """Lattice programming gap together with a coset attaining it."""
    gap: Fraction
    witness_label: CosetLabel
    witness_x: IntVector
    coset_count: int


@dataclass(frozen=True)
class IpInstance:
    """
    Integer program min{c.x : A x = b, x in Z^n_{>=0}}.

    A must have full row rank and a kernel meeting the nonnegative
    orthant only at the origin; both are checked on construction.
    """
    A: IntMatrix
    b: IntVector
    c: RatVector

    def __post_init__(self):
        from .intlat import hnf
        from .lp import check_pointed
        from .utils import DimensionMismatch, NotPointed, parse_int_vector, parse_rational

        A = tuple(tuple(parse_int_vector(list(row), "A")) for row in self.A)
        if not A or not A[0]:
            raise DimensionMismatch("Constraint matrix must be non-empty")
        n = len(A[0])
        if any(len(row) != n for row in A):
            raise DimensionMismatch("Constraint matrix rows have different lengths")
        b = tuple(parse_int_vector(list(self.b), "b"))
        c = tuple(parse_rational(v) for v in self.c)
        if len(b) != len(A):
            raise DimensionMismatch(f"b has length {len(b)}, A has {len(A)} rows")
        if len(c) != n:
            raise DimensionMismatch(f"c has length {len(c)}, A has {n} columns")
        hnf(A)
        if not check_pointed(A):
            raise NotPointed("Kernel of A contains a nonzero nonnegative vector")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    @property
    def d(self) -> int:
        return len(self.A)

    @property
    def n(self) -> int:
        return len(self.A[0])


@dataclass(frozen=True)
class LpBasisResult:
    """Optimal basis of the linear relaxation."""
    basis: IntVector
    nonbasis: IntVector
    lp_value: Fraction
    x: RatVector
    reduced_costs: RatVector
    unique: bool


@dataclass(frozen=True)
class BoundsReport:
    """Lower and upper bounds on the gap, outward rounded."""
    k: int
    det: int
    lower_rho: Optional[float]
    lower_factorial: Optional[float]
    upper: Optional[float]
    gap: Optional[Fraction] = None
    normalized_radius: Optional[Tuple[float, float]] = None
    inradius: Optional[Tuple[float, float]] = None

    def to_dict(self) -> Dict[str, object]:
        """Convert to the JSON payload layout."""
        from .utils import format_rational

        def tagged(value, rounding):
            if value is None:
                return None
            return {"value": value, "rounding": rounding}

        payload = {
            "k": self.k,
            "det": self.det,
            "lower_rho": tagged(self.lower_rho, "down"),
            "lower_factorial": tagged(self.lower_factorial, "down"),
            "upper": tagged(self.upper, "up"),
        }
        if self.gap is not None:
            payload["gap"] = format_rational(self.gap)
        if self.normalized_radius is not None:
            payload["normalized_radius"] = {"interval": list(self.normalized_radius), "rounding": "outward"}
        if self.inradius is not None:
            payload["inradius"] = {"interval": list(self.inradius), "rounding": "outward"}
        return {key: value for key, value in payload.items() if value is not None}


class InstanceKind(Enum):
    """Kinds of instance documents accepted by the CLI."""
    GROUP = "group"
    FROBENIUS = "frobenius"
    IP = "ip"


class ExitCode(Enum):
    """Process exit codes of the command-line tool."""
    SUCCESS = 0
    INTERNAL = 1
    INVALID_INPUT = 2
    RESOURCE_LIMIT = 3


# Known exact values of gamma_k^k for k = 1..8
HERMITE_GAMMA_POWER: Dict[int, Fraction] = {
    1: Fraction(1),
    2: Fraction(4, 3),
    3: Fraction(2),
    4: Fraction(4),
    5: Fraction(8),
    6: Fraction(64, 3),
    7: Fraction(64),
    8: Fraction(256),
}

# rho_k^k for the dimensions where the simplex covering constant is known
RHO_POWER: Dict[int, Fraction] = {
    1: Fraction(1),
    2: Fraction(3),
}

DEFAULT_MAX_COSETS = 10_000_000
DEFAULT_ORACLE_LIMIT = 10_000
DEFAULT_ORACLE_POINTS = 2_000_000
DEFAULT_MAX_GRID_POINTS = 2_000_000
DEFAULT_BOUND_DIGITS = 40
DEFAULT_LOG_LEVEL = "WARNING"


@dataclass
class CommandResult:
    """Outcome of one CLI command on one instance."""
    success: bool
    results: Optional[Mapping[str, object]] = None
    error: Optional[str] = None
    exit_code: ExitCode = ExitCode.SUCCESS
