"""
Utility functions for latgap.
"""

import logging
import math
from fractions import Fraction
from typing import Any, Iterable, List, Sequence, Union

logger = logging.getLogger(__name__)

RationalLike = Union[int, str, Fraction]


def parse_rational(value: RationalLike) -> Fraction:
    """
    Parse an exact rational from an int, a Fraction or a "p/q" string.

    Floats are rejected: a binary float cannot carry an exact cost.

    Args:
        value: Value to parse

    Returns:
        Exact rational
    """
    if isinstance(value, bool):
        raise InstanceFormatError(f"Boolean is not a rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text or any(ch in text for ch in ".eE"):
            raise InstanceFormatError(f"Rational must be written as p/q: {value!r}")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as e:
            raise InstanceFormatError(f"Invalid rational {value!r}: {e}")
    raise InstanceFormatError(f"Unsupported rational value: {value!r}")


def format_rational(value: Fraction) -> str:
    """
    Format an exact rational as "p/q" (or "p" for integers).

    Args:
        value: Rational to format

    Returns:
        String representation
    """
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_int_vector(values: Any, name: str = "vector") -> List[int]:
    """
    Parse a list of integers, rejecting floats and booleans.

    Args:
        values: Raw JSON value
        name: Field name used in error messages

    Returns:
        List of Python ints
    """
    if not isinstance(values, (list, tuple)):
        raise InstanceFormatError(f"{name} must be an array of integers")
    result = []
    for v in values:
        if isinstance(v, bool) or not isinstance(v, int):
            raise InstanceFormatError(f"{name} contains a non-integer entry: {v!r}")
        result.append(v)
    return result


def parse_int_list_arg(text: str) -> List[int]:
    """Parse a comma separated list such as "3,5,7"."""
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise InstanceFormatError(f"Invalid integer list: {text!r}")


def lcm_of_denominators(values: Iterable[Fraction]) -> int:
    """
    Least common denominator of a collection of rationals.

    Args:
        values: Rationals

    Returns:
        Positive integer D with D * v integral for every v
    """
    result = 1
    for v in values:
        result = result * v.denominator // math.gcd(result, v.denominator)
    return result


def dot(u: Sequence, v: Sequence):
    """Exact dot product of two equally long sequences."""
    if len(u) != len(v):
        raise DimensionMismatch(f"Vector lengths differ: {len(u)} != {len(v)}")
    return sum(a * b for a, b in zip(u, v))


def float_down(value: Fraction) -> float:
    """
    Largest float not exceeding an exact rational.

    Args:
        value: Rational to convert

    Returns:
        Float rounded toward -inf
    """
    f = float(value)
    if Fraction(f) > value:
        f = math.nextafter(f, -math.inf)
    return f


def float_up(value: Fraction) -> float:
    """
    Smallest float not below an exact rational.

    Args:
        value: Rational to convert

    Returns:
        Float rounded toward +inf
    """
    f = float(value)
    if Fraction(f) < value:
        f = math.nextafter(f, math.inf)
    return f


class LatGapError(Exception):
    """Base exception for latgap."""
    pass


class ValidationError(LatGapError):
    """Invalid, malformed or degenerate input."""
    pass


class ResourceLimitError(LatGapError):
    """A configured resource guard was hit."""
    pass


class RankDeficient(ValidationError):
    """Rows are linearly dependent."""
    pass


class SingularBasis(ValidationError):
    """Basis matrix has determinant zero."""
    pass


class DimensionMismatch(ValidationError):
    """Vector or matrix dimensions do not agree."""
    pass


class NotPrimitive(ValidationError):
    """Frobenius input has gcd different from one or a non-positive entry."""
    pass


class UnknownRhoK(ValidationError):
    """The simplex covering constant is not known in this dimension."""
    pass


class DimensionTooSmall(ValidationError):
    """Bound is only stated for larger dimensions."""
    pass


class LpInfeasible(ValidationError):
    """Linear relaxation has no feasible point."""
    pass


class LpUnbounded(ValidationError):
    """Linear relaxation is unbounded."""
    pass


class NonGenericReducedCosts(ValidationError):
    """Some nonbasic reduced cost is zero."""
    pass


class NoIntegerSolution(ValidationError):
    """Right-hand side is not in the integer image of the matrix."""
    pass


class NotPointed(ValidationError):
    """Kernel meets the nonnegative orthant away from the origin."""
    pass


class InstanceFormatError(ValidationError):
    """Instance document does not match the expected layout."""
    pass


class CosetLimitExceeded(ResourceLimitError):
    """Coset count is above the configured limit."""
    pass


class ResolutionTooFine(ResourceLimitError):
    """Covering grid has too many points."""
    pass


class OracleLimitExceeded(ResourceLimitError):
    """Brute-force oracle search space is too large."""
    pass
