"""
Bounds on the lattice programming gap and the covering radius of Delta_l.

Every irrational quantity is enclosed in an Interval with exact rational
endpoints; roots are rounded outward. Lower bounds report the lower
endpoint rounded down, upper bounds the upper endpoint rounded up, so a
comparison with the exact gap can never fail through rounding.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import sympy

from .config import resolve
from .groupsolve import GroupInstance, gap
from .intlat import det_abs, hnf
from .types import HERMITE_GAMMA_POWER, RHO_POWER, BoundsReport
from .utils import (
    DimensionMismatch,
    DimensionTooSmall,
    ResolutionTooFine,
    UnknownRhoK,
    ValidationError,
    float_down,
    float_up,
    parse_rational,
)

logger = logging.getLogger(__name__)


def _root_bounds(q: Fraction, n: int, digits: int) -> Tuple[Fraction, Fraction]:
    """Rational lower and upper bounds of q^(1/n), q >= 0."""
    if q < 0:
        raise ValidationError(f"Cannot take a root of the negative number {q}")
    if q == 0:
        return Fraction(0), Fraction(0)
    num_root, num_exact = sympy.integer_nthroot(q.numerator, n)
    den_root, den_exact = sympy.integer_nthroot(q.denominator, n)
    if num_exact and den_exact:
        exact = Fraction(int(num_root), int(den_root))
        return exact, exact
    scale = 10 ** digits
    scaled_num = q.numerator * scale ** n
    floor_value = scaled_num // q.denominator
    root, exact = sympy.integer_nthroot(floor_value, n)
    root = int(root)
    lower = Fraction(root, scale)
    if exact and scaled_num % q.denominator == 0:
        return lower, lower
    return lower, Fraction(root + 1, scale)


@dataclass(frozen=True)
class Interval:
    """Closed interval [lo, hi] with exact rational endpoints."""
    lo: Fraction
    hi: Fraction

    @classmethod
    def exact(cls, value) -> "Interval":
        q = Fraction(value)
        return cls(q, q)

    def __add__(self, other: Union["Interval", int, Fraction]) -> "Interval":
        other = _lift(other)
        return Interval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other: Union["Interval", int, Fraction]) -> "Interval":
        return self + (-_lift(other))

    def __rsub__(self, other) -> "Interval":
        return _lift(other) - self

    def __mul__(self, other: Union["Interval", int, Fraction]) -> "Interval":
        other = _lift(other)
        products = [a * b for a in (self.lo, self.hi) for b in (other.lo, other.hi)]
        return Interval(min(products), max(products))

    __rmul__ = __mul__

    def reciprocal(self) -> "Interval":
        if self.lo <= 0 <= self.hi:
            raise ValidationError("Interval contains zero")
        return Interval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other: Union["Interval", int, Fraction]) -> "Interval":
        return self * _lift(other).reciprocal()

    def root(self, n: int, digits: Optional[int] = None) -> "Interval":
        """Outward-rounded n-th root of a nonnegative interval."""
        digits = resolve(digits, "bound_digits")
        lo, _ = _root_bounds(self.lo, n, digits)
        _, hi = _root_bounds(self.hi, n, digits)
        return Interval(lo, hi)

    def contains(self, value) -> bool:
        return self.lo <= Fraction(value) <= self.hi

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    def to_floats(self) -> Tuple[float, float]:
        return float_down(self.lo), float_up(self.hi)


def _lift(value) -> Interval:
    return value if isinstance(value, Interval) else Interval.exact(value)


def pi_interval(digits: Optional[int] = None) -> Interval:
    """Rational enclosure of pi."""
    digits = resolve(digits, "bound_digits")
    approx = Fraction(str(sympy.pi.evalf(digits + 10)))
    eps = Fraction(1, 10 ** (digits + 5))
    return Interval(approx - eps, approx + eps)


def gamma_half_integer(k: int, digits: Optional[int] = None) -> Interval:
    """Enclosure of Gamma(k/2 + 1)."""
    coeff, rest = sympy.gamma(sympy.Rational(k + 2, 2)).as_coeff_Mul()
    value = Interval.exact(Fraction(int(coeff.p), int(coeff.q)))
    if rest == 1:
        return value
    if rest == sympy.sqrt(sympy.pi):
        return value * pi_interval(digits).root(2, digits)
    raise ValidationError(f"Unexpected Gamma value at {k}/2 + 1: {rest}")


def unit_ball_volume(k: int, digits: Optional[int] = None) -> Interval:
    """sigma_k = pi^(k/2) / Gamma(k/2 + 1)."""
    pi_power = pi_interval(digits)
    power = Interval.exact(1)
    for _ in range(k):
        power = power * pi_power
    return power.root(2, digits) / gamma_half_integer(k, digits)


def hermite_gamma_power(k: int, digits: Optional[int] = None) -> Interval:
    """
    Upper enclosure of gamma_k^(k/2).

    Exact table values for k <= 8, Blichfeldt's bound
    gamma_k^(k/2) <= 2^(k/2) (k + 2) / sigma_k beyond.
    """
    if k < 1:
        raise DimensionTooSmall(f"Hermite constant needs k >= 1, got {k}")
    if k in HERMITE_GAMMA_POWER:
        return Interval.exact(HERMITE_GAMMA_POWER[k]).root(2, digits)
    two_power = Interval.exact(2 ** k).root(2, digits)
    return two_power * (k + 2) / unit_ball_volume(k, digits)


def _prepare(k: int, det: int, l: Sequence) -> Tuple[Tuple[Fraction, ...], Fraction, Fraction]:
    values = tuple(parse_rational(v) for v in l)
    if len(values) != k:
        raise DimensionMismatch(f"Cost vector has length {len(values)}, expected {k}")
    if any(v <= 0 for v in values):
        raise ValidationError("Costs must be positive")
    if det < 1:
        raise ValidationError(f"Determinant must be positive, got {det}")
    product = Fraction(1)
    for v in values:
        product *= v
    return values, sum(values, Fraction(0)), product


def lower_bound_rho(k: int, det: int, l: Sequence, digits: Optional[int] = None) -> float:
    """
    rho_k (det * l_1 ... l_k)^(1/k) - sum(l), rounded down.

    Only available where rho_k is known (k = 1, 2).
    """
    if k not in RHO_POWER:
        raise UnknownRhoK(f"rho_k is not known for k = {k}")
    _, total, product = _prepare(k, det, l)
    value = Interval.exact(RHO_POWER[k] * det * product).root(k, digits) - total
    return float_down(value.lo)


def lower_bound_factorial(k: int, det: int, l: Sequence, digits: Optional[int] = None) -> float:
    """(k! * det * l_1 ... l_k)^(1/k) - sum(l), rounded down; a strict lower bound."""
    if k < 2:
        raise DimensionTooSmall(f"Factorial lower bound needs k >= 2, got {k}")
    _, total, product = _prepare(k, det, l)
    value = Interval.exact(math.factorial(k) * det * product).root(k, digits) - total
    return float_down(value.lo)


def upper_bound(k: int, det: int, l: Sequence, digits: Optional[int] = None) -> float:
    """
    k gamma_k^(k/2) det (sum(l) + |l|) / 2 - sum(l), rounded up.

    Args:
        k: Dimension (>= 2)
        det: Lattice determinant
        l: Cost vector
        digits: Decimal digits of the root enclosures

    Returns:
        Upper bound on the gap
    """
    if k < 2:
        raise DimensionTooSmall(f"Upper bound needs k >= 2, got {k}")
    values, total, _ = _prepare(k, det, l)
    norm = euclidean_norm(values, digits)
    value = hermite_gamma_power(k, digits) * (k * det) * (norm + total) / 2 - total
    return float_up(value.hi)


def euclidean_norm(l: Sequence, digits: Optional[int] = None) -> Interval:
    """|l|, exact when the sum of squares is a rational square."""
    values = tuple(parse_rational(v) for v in l)
    return Interval.exact(sum(v * v for v in values)).root(2, digits)


def inradius(l: Sequence, digits: Optional[int] = None) -> Union[Fraction, Interval]:
    """
    Inradius 1 / (sum(l) + |l|) of Delta_l.

    Returns:
        Exact rational when |l| is rational, otherwise an enclosing interval
    """
    values = tuple(parse_rational(v) for v in l)
    if any(v <= 0 for v in values):
        raise ValidationError("Costs must be positive")
    radius = (euclidean_norm(values, digits) + sum(values, Fraction(0))).reciprocal()
    return radius.lo if radius.is_exact else radius


def simplex_volume(l: Sequence) -> Fraction:
    """vol(Delta_l) = 1 / (k! l_1 ... l_k)."""
    values = tuple(parse_rational(v) for v in l)
    product = Fraction(1)
    for v in values:
        product *= v
    return 1 / (math.factorial(len(values)) * product)


def simplex_surface_area(l: Sequence, digits: Optional[int] = None) -> Interval:
    """Surface area (sum(l) + |l|) / ((k - 1)! l_1 ... l_k) of Delta_l."""
    values = tuple(parse_rational(v) for v in l)
    product = Fraction(1)
    for v in values:
        product *= v
    numerator = euclidean_norm(values, digits) + sum(values, Fraction(0))
    return numerator / (math.factorial(len(values) - 1) * product)


def covering_radius(inst: GroupInstance, max_cosets: Optional[int] = None) -> Fraction:
    """rho(Delta_l, Lambda) = gap(Lambda, l) + sum(l)."""
    return gap(inst, max_cosets).gap + inst.cost.total


def normalized_covering_radius(inst: GroupInstance, max_cosets: Optional[int] = None,
                               digits: Optional[int] = None,
                               radius: Optional[Fraction] = None) -> Interval:
    """
    Covering radius of the standard simplex w.r.t. the unimodular rescaling of Lambda.

    Equals rho(Delta_l, Lambda) / (det * l_1 ... l_k)^(1/k); never below rho_k.
    """
    if radius is None:
        radius = covering_radius(inst, max_cosets)
    return _normalize(radius, inst.dim, det_abs(inst.basis), inst.cost.l, digits)


def _normalize(radius: Fraction, k: int, det: int, l: Sequence[Fraction], digits: Optional[int]) -> Interval:
    product = Fraction(det)
    for v in l:
        product *= v
    return Interval.exact(radius) / Interval.exact(product).root(k, digits)


@dataclass(frozen=True)
class CoverReport:
    """Outcome of a grid check of rho * Delta_l + Lambda covering R^k."""
    rho: Fraction
    h: Fraction
    points_checked: int
    uncovered: Tuple[Tuple[Fraction, ...], ...]

    @property
    def covered(self) -> bool:
        return not self.uncovered

    @property
    def verdict(self) -> str:
        if self.covered:
            return "no uncovered grid point found"
        return "uncovered points found"


def _covered(H: Sequence[Sequence[int]], l: Sequence[Fraction], p: Tuple[Fraction, ...],
             rho: Fraction) -> bool:
    """
    Is there y in Lambda with y <= p and l.(p - y) <= rho?

    Walks the coordinates in HNF order: once the coefficients of the first
    j rows are fixed, y_j is pinned modulo H[j][j].
    """
    k = len(p)

    def search(j: int, offsets: List[int], budget: Fraction) -> bool:
        if j == k:
            return True
        step = H[j][j]
        value = offsets[j] + step * math.floor((p[j] - offsets[j]) / step)
        while l[j] * (p[j] - value) <= budget:
            c = (value - offsets[j]) // step
            shifted = [offsets[m] + c * H[j][m] if m > j else offsets[m] for m in range(k)]
            if search(j + 1, shifted, budget - l[j] * (p[j] - value)):
                return True
            value -= step
        return False

    return search(0, [0] * k, rho)


def grid_cover_check(inst: GroupInstance, rho, h, max_points: Optional[int] = None) -> CoverReport:
    """
    Look for grid points of h Z^k in a fundamental box not covered by rho Delta_l + Lambda.

    An empty result is evidence of coverage at this resolution, not a proof.

    Args:
        inst: Group instance with k <= 3
        rho: Candidate covering radius
        h: Grid spacing
        max_points: Largest number of grid points accepted

    Returns:
        Report listing the uncovered grid points
    """
    rho = parse_rational(rho)
    h = parse_rational(h)
    if h <= 0:
        raise ValidationError(f"Grid spacing must be positive, got {h}")
    if rho < 0:
        raise ValidationError(f"Radius must be nonnegative, got {rho}")
    if inst.dim > 3:
        raise ValidationError(f"Grid check supports k <= 3, got {inst.dim}")
    H = hnf(inst.basis.rows)
    counts = [math.ceil(Fraction(H[i][i]) / h) for i in range(inst.dim)]
    total = math.prod(counts)
    limit = resolve(max_points, "max_grid_points")
    if total > limit:
        raise ResolutionTooFine(f"grid of {total} points exceeds limit {limit}")
    logger.info(f"Grid check: {total} points, rho={rho}, h={h}")
    uncovered = []
    for steps in itertools.product(*(range(c) for c in counts)):
        p = tuple(h * s for s in steps)
        if not _covered(H, inst.cost.l, p, rho):
            uncovered.append(p)
    return CoverReport(rho=rho, h=h, points_checked=total, uncovered=tuple(uncovered))


def bounds_report(k: int, det: int, l: Sequence, gap_value: Optional[Fraction] = None,
                  digits: Optional[int] = None) -> BoundsReport:
    """
    Collect every bound available in dimension k.

    Args:
        k: Dimension
        det: Lattice determinant
        l: Cost vector
        gap_value: Exact gap, if known
        digits: Decimal digits of the root enclosures

    Returns:
        Bounds report; unavailable bounds are None
    """
    values, total, _ = _prepare(k, det, l)
    try:
        lower_rho = lower_bound_rho(k, det, values, digits)
    except UnknownRhoK:
        lower_rho = None
    lower_factorial = lower_bound_factorial(k, det, values, digits) if k >= 2 else None
    upper = upper_bound(k, det, values, digits) if k >= 2 else None
    radius = inradius(values, digits)
    radius_interval = (float_down(radius), float_up(radius)) if isinstance(radius, Fraction) else radius.to_floats()
    normalized = None
    if gap_value is not None:
        normalized = _normalize(gap_value + total, k, det, values, digits).to_floats()
    return BoundsReport(
        k=k,
        det=det,
        lower_rho=lower_rho,
        lower_factorial=lower_factorial,
        upper=upper,
        gap=gap_value,
        normalized_radius=normalized,
        inradius=radius_interval,
    )


def bounds_for_instance(inst: GroupInstance, with_gap: bool = False,
                        max_cosets: Optional[int] = None,
                        digits: Optional[int] = None) -> BoundsReport:
    """Bounds report for a concrete lattice, optionally with its exact gap."""
    gap_value = gap(inst, max_cosets).gap if with_gap else None
    return bounds_report(inst.dim, det_abs(inst.basis), inst.cost.l, gap_value, digits)
