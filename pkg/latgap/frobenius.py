"""
Frobenius numbers through the lattice programming gap.

For a primitive a = (a_1, ..., a_{k+1}) let Lambda_a be the lattice of
x in Z^k with a_1 x_1 + ... + a_k x_k = 0 (mod a_{k+1}) and l_a the
first k entries. Then frob(a) = gap(Lambda_a, l_a) - a_{k+1}.
"""

import logging
import math
from dataclasses import dataclass
from functools import reduce
from typing import Optional, Sequence, Tuple

import numpy as np

from .config import resolve
from .groupsolve import GroupInstance, gap, solve_all
from .intlat import coset_label, det_abs, kernel_lattice, lattice_from_generators, solve_integer
from .types import LatticeBasis
from .utils import NotPrimitive, OracleLimitExceeded, parse_int_vector

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FrobeniusResult:
    """Frobenius number together with the gap it was derived from."""
    frobenius: int
    gap: int
    det: int
    modulus: int
    order: Tuple[int, ...]


def validate_frobenius_input(a: Sequence[int]) -> Tuple[int, ...]:
    """
    Check that a is a primitive vector of at least two positive integers.

    Args:
        a: Candidate vector

    Returns:
        The vector as a tuple
    """
    values = tuple(parse_int_vector(list(a), "a"))
    if len(values) < 2:
        raise NotPrimitive(f"Need at least two entries, got {len(values)}")
    if any(v < 1 for v in values):
        raise NotPrimitive(f"Entries must be positive: {list(values)}")
    g = reduce(math.gcd, values)
    if g != 1:
        raise NotPrimitive(f"gcd{list(values)} = {g}, expected 1")
    return values


def lambda_a(a: Sequence[int]) -> LatticeBasis:
    """
    Basis of Lambda_a, with the last entry of a as the modulus.

    Args:
        a: Primitive vector

    Returns:
        Basis in HNF, of determinant a_{k+1}
    """
    values = validate_frobenius_input(a)
    *l, m = values
    k = len(l)
    generators = [tuple(m if i == j else 0 for j in range(k)) for i in range(k)]
    generators += [row[:k] for row in kernel_lattice([list(l) + [m]])]
    return lattice_from_generators(generators, k)


def _modulus_first(values: Tuple[int, ...]) -> Tuple[int, ...]:
    # smallest entry as modulus keeps the coset count minimal
    position = values.index(min(values))
    order = [i for i in range(len(values)) if i != position] + [position]
    return tuple(order)


def frobenius_report(a: Sequence[int], max_cosets: Optional[int] = None,
                     smallest_modulus: bool = True) -> FrobeniusResult:
    """
    Frobenius number via the gap of Lambda_a.

    Args:
        a: Primitive vector
        max_cosets: Coset limit (the modulus is the coset count)
        smallest_modulus: Move the smallest entry into the modulus position;
            otherwise the last entry of a is the modulus

    Returns:
        Frobenius number, gap, determinant and the reordering used
    """
    values = validate_frobenius_input(a)
    order = _modulus_first(values) if smallest_modulus else tuple(range(len(values)))
    arranged = tuple(values[i] for i in order)
    basis = lambda_a(arranged)
    inst = GroupInstance.create(basis, arranged[:-1])
    certificate = gap(inst, max_cosets)
    g = int(certificate.gap)
    modulus = arranged[-1]
    logger.info(f"frob{list(values)}: gap {g} over {modulus} cosets")
    return FrobeniusResult(
        frobenius=g - modulus,
        gap=g,
        det=det_abs(basis),
        modulus=modulus,
        order=order,
    )


def frobenius_number(a: Sequence[int], max_cosets: Optional[int] = None) -> int:
    """Largest integer that is not a nonnegative combination of the a_i (-1 if none)."""
    return frobenius_report(a, max_cosets).frobenius


def frobenius_via_covering_radius(a: Sequence[int], max_cosets: Optional[int] = None) -> int:
    """
    Frobenius number as rho(Delta_{l_a}, Lambda_a) - sum(a).

    Args:
        a: Primitive vector
        max_cosets: Coset limit

    Returns:
        Frobenius number
    """
    from .bounds import covering_radius

    values = validate_frobenius_input(a)
    arranged = tuple(values[i] for i in _modulus_first(values))
    inst = GroupInstance.create(lambda_a(arranged), arranged[:-1])
    rho = covering_radius(inst, max_cosets)
    result = rho - sum(values)
    return int(result)


def representable(a: Sequence[int], t: int, max_cosets: Optional[int] = None) -> bool:
    """
    Whether t is a nonnegative integer combination of the a_i.

    The smallest representable number in the residue class of t modulo
    the modulus is the distance of the matching coset of Lambda_a.
    """
    if t < 0:
        return False
    return representable_values(a, [t], max_cosets)[0]


def representable_values(a: Sequence[int], ts: Sequence[int],
                         max_cosets: Optional[int] = None) -> Tuple[bool, ...]:
    """
    Representability of several integers from a single shortest path table.

    Args:
        a: Primitive vector
        ts: Integers to test
        max_cosets: Coset limit

    Returns:
        One flag per entry of ts
    """
    values = validate_frobenius_input(a)
    arranged = tuple(values[i] for i in _modulus_first(values))
    *l, m = arranged
    inst = GroupInstance.create(lambda_a(arranged), l)
    table = solve_all(inst, max_cosets)
    flags = []
    for t in ts:
        if t < 0:
            flags.append(False)
            continue
        x = solve_integer([list(l) + [m]], [t])[:len(l)]
        flags.append(table.value(coset_label(inst.snf, x).index) <= t)
    return tuple(flags)


def oracle_frobenius(a: Sequence[int], limit: Optional[int] = None) -> int:
    """
    Frobenius number by a representability table over [0, a_min * a_max).

    Args:
        a: Primitive vector
        limit: Largest table size accepted

    Returns:
        Largest non-representable integer, or -1 when every integer is representable
    """
    values = validate_frobenius_input(a)
    size = min(values) * max(values)
    table_limit = resolve(limit, "oracle_points")
    if size > table_limit:
        raise OracleLimitExceeded(f"representability table of {size} entries exceeds limit {table_limit}")
    reachable = np.zeros(size, dtype=bool)
    reachable[0] = True
    for step in sorted(set(values)):
        for start in range(min(step, size)):
            reachable[start::step] = np.logical_or.accumulate(reachable[start::step])
    missing = np.flatnonzero(~reachable)
    return int(missing[-1]) if missing.size else -1
