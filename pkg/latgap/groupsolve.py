"""
Group problems and the lattice programming gap.

The minimum of l.x over x = r (mod Lambda), x >= 0 depends only on the
coset of r. All N cosets are solved at once as single-source shortest
paths in the quotient lattice digraph: vertex c has an edge of weight
w_j to c + label(e_j) for every unit vector e_j. The gap is the largest
of these distances.
"""

import heapq
import itertools
import logging
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from .config import resolve
from .intlat import (
    coset_from_index,
    coset_label,
    hnf,
    is_member,
    label_increments,
    reduce_mod_basis,
    snf,
)
from .types import (
    CostVector,
    GapCertificate,
    GroupSolution,
    IntVector,
    LatticeBasis,
    SnfDecomposition,
)
from .utils import (
    CosetLimitExceeded,
    DimensionMismatch,
    ValidationError,
    lcm_of_denominators,
    parse_rational,
)

logger = logging.getLogger(__name__)

# float64 adds integers exactly up to this magnitude
FLOAT_EXACT_LIMIT = 2 ** 53


def make_cost_vector(l: Sequence) -> CostVector:
    """
    Build a cost vector from exact rationals.

    Args:
        l: Positive rationals (ints, Fractions or "p/q" strings)

    Returns:
        Cost vector with integer-scaled weights
    """
    values = tuple(parse_rational(v) for v in l)
    if not values:
        raise ValidationError("Cost vector must not be empty")
    if any(v <= 0 for v in values):
        raise ValidationError(f"Costs must be positive, got {[str(v) for v in values]}")
    D = lcm_of_denominators(values)
    weights = tuple(int(v * D) for v in values)
    return CostVector(l=values, weights=weights, denominator=D)


@dataclass(frozen=True)
class GroupInstance:
    """A lattice together with a cost vector."""
    basis: LatticeBasis
    cost: CostVector
    snf: SnfDecomposition

    @classmethod
    def create(cls, basis: LatticeBasis, l: Sequence) -> "GroupInstance":
        cost = l if isinstance(l, CostVector) else make_cost_vector(l)
        if cost.dim != basis.dim:
            raise DimensionMismatch(f"Cost vector has length {cost.dim}, lattice has dimension {basis.dim}")
        return cls(basis=basis, cost=cost, snf=snf(basis))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], l: Sequence) -> "GroupInstance":
        return cls.create(LatticeBasis(tuple(tuple(r) for r in rows)), l)

    @property
    def dim(self) -> int:
        return self.basis.dim

    @property
    def coset_count(self) -> int:
        return self.snf.N


@dataclass(frozen=True)
class ShortestPathTable:
    """
    Distances from the zero coset to every coset, indexed by linear label.

    distances holds integer-scaled values (divide by denominator);
    predecessors holds the edge index j of the last step, -1 at the source.
    """
    distances: np.ndarray
    predecessors: np.ndarray
    increments: Tuple[IntVector, ...]
    weights: IntVector
    denominator: int
    shape: IntVector

    def value(self, index: int) -> Fraction:
        return Fraction(int(self.distances[index]), self.denominator)


def _check_limit(N: int, max_cosets: Optional[int]) -> None:
    limit = resolve(max_cosets, "max_cosets")
    if N > limit:
        raise CosetLimitExceeded(f"coset count {N} exceeds limit {limit}")


def _shifted_indices(shape: IntVector, shift: Sequence[int]) -> np.ndarray:
    """result[c] = linear index of the label c + shift."""
    N = int(np.prod(shape, dtype=object))
    idx = np.arange(N, dtype=np.int64).reshape(shape)
    return np.roll(idx, shift=tuple(-s for s in shift), axis=tuple(range(len(shape)))).ravel()


def _distinct_edges(increments, weights):
    """Cheapest weight per distinct nonzero increment."""
    best: Dict[IntVector, int] = {}
    for inc, w in zip(increments, weights):
        if any(inc) and (inc not in best or w < best[inc]):
            best[inc] = w
    return best


def _increment_order(shape: IntVector, inc: IntVector) -> int:
    """Order of the label increment in Z_d1 x ... x Z_dk."""
    return math.lcm(*(d // math.gcd(d, s) for d, s in zip(shape, inc)))


def _shortest_paths_float(shape, N, edges) -> np.ndarray:
    """
    Single-source shortest paths on one float array of N entries.

    Edges are closed one increment at a time by doubling: after the pass
    for (inc, w), dist[c] is the cheapest cost of reaching c with the
    increments seen so far. Apart from dist only one rolled copy is alive.
    """
    dist = np.full(N, np.inf)
    dist[0] = 0.0
    grid = dist.reshape(shape)
    axes = tuple(range(len(shape)))
    for inc, w in edges.items():
        order = _increment_order(shape, inc)
        span, step = 1, w
        while span < order:
            # moved[c] = grid[c - span * inc]
            moved = np.roll(grid, tuple(span * s % d for s, d in zip(inc, shape)), axis=axes)
            moved += step
            np.minimum(grid, moved, out=grid)
            del moved
            span, step = 2 * span, 2 * step
    np.rint(dist, out=dist)
    return dist.astype(np.int64)


def _dijkstra_exact(shape, N, edges) -> np.ndarray:
    adjacency = [(w, _shifted_indices(shape, inc).tolist()) for inc, w in edges.items()]
    dist = [None] * N
    dist[0] = 0
    heap = [(0, 0)]
    done = bytearray(N)
    while heap:
        du, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = 1
        for w, succ in adjacency:
            v = succ[u]
            nd = du + w
            if dist[v] is None or nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return np.array(dist, dtype=object)


def solve_all(inst: GroupInstance, max_cosets: Optional[int] = None) -> ShortestPathTable:
    """
    Exact distances m(Lambda, l, .) for every coset.

    Args:
        inst: Group instance
        max_cosets: Coset limit; None uses the configured value

    Returns:
        Shortest path table over all N cosets
    """
    S = inst.snf
    N = S.N
    _check_limit(N, max_cosets)
    increments = label_increments(S)
    weights = inst.cost.weights
    shape = S.d
    logger.info(f"Solving group problem: k={inst.dim}, cosets={N}, invariant factors={shape}")

    edges = _distinct_edges(increments, weights)
    if N == 1:
        distances = np.zeros(1, dtype=np.int64)
    elif (N - 1) * max(weights) < FLOAT_EXACT_LIMIT:
        distances = _shortest_paths_float(shape, N, edges)
    else:
        logger.info("Distance bound exceeds float64 exactness, using arbitrary precision")
        distances = _dijkstra_exact(shape, N, edges)

    # smallest edge index among equal-cost predecessors
    predecessors = np.full(N, -1, dtype=np.int32)
    axes = tuple(range(len(shape)))
    for j, (inc, w) in enumerate(zip(increments, weights)):
        if not any(inc):
            continue
        # previous[c] = distances[c - inc]
        previous = np.roll(distances.reshape(shape), inc, axis=axes).ravel()
        previous += w
        mask = np.asarray(previous == distances, dtype=bool)
        del previous
        mask &= predecessors == -1
        mask[0] = False
        predecessors[mask] = j
        del mask

    return ShortestPathTable(
        distances=distances,
        predecessors=predecessors,
        increments=increments,
        weights=weights,
        denominator=inst.cost.denominator,
        shape=shape,
    )


def minimizer_path(S: SnfDecomposition, table: ShortestPathTable, index: int) -> IntVector:
    """
    Nonnegative minimizer read off the predecessor structure.

    Args:
        S: Smith decomposition used to build the table
        table: Shortest path table
        index: Linear label of the target coset

    Returns:
        x with x_j = number of e_j steps on the shortest path
    """
    x = [0] * len(table.weights)
    digits = list(coset_from_index(S, index).digits)
    current = index
    while current != 0:
        j = int(table.predecessors[current])
        if j < 0:
            raise ValidationError(f"Coset {current} has no predecessor")
        x[j] += 1
        digits = [(u - s) % d for u, s, d in zip(digits, table.increments[j], S.d)]
        current = 0
        for u, d in zip(digits, S.d):
            current = current * d + u
    return tuple(x)


def solve_m(inst: GroupInstance, r: Sequence[int], max_cosets: Optional[int] = None,
            table: Optional[ShortestPathTable] = None) -> GroupSolution:
    """
    Solve min{l.x : x = r (mod Lambda), x >= 0}.

    Args:
        inst: Group instance
        r: Residue vector
        max_cosets: Coset limit
        table: Precomputed shortest path table (optional)

    Returns:
        Exact minimum with a minimizer
    """
    label = coset_label(inst.snf, r)
    if table is None:
        table = solve_all(inst, max_cosets)
    x = minimizer_path(inst.snf, table, label.index)
    return GroupSolution(value=table.value(label.index), minimizer=x, residue_label=label)


def gap(inst: GroupInstance, max_cosets: Optional[int] = None,
        table: Optional[ShortestPathTable] = None) -> GapCertificate:
    """
    Lattice programming gap: the largest m(Lambda, l, r) over all r.

    Args:
        inst: Group instance
        max_cosets: Coset limit
        table: Precomputed shortest path table (optional)

    Returns:
        Certificate with the smallest-index coset attaining the maximum
    """
    if table is None:
        table = solve_all(inst, max_cosets)
    index = int(np.argmax(table.distances))
    witness = minimizer_path(inst.snf, table, index)
    value = table.value(index)
    logger.info(f"Gap {value} attained at coset {index} by x={witness}")
    return GapCertificate(
        gap=value,
        witness_label=coset_from_index(inst.snf, index),
        witness_x=witness,
        coset_count=inst.snf.N,
    )


def distance_distribution(inst: GroupInstance, max_cosets: Optional[int] = None) -> Dict[Fraction, int]:
    """Number of cosets attaining each value of m(Lambda, l, .)."""
    table = solve_all(inst, max_cosets)
    counts = Counter(int(v) for v in table.distances)
    return {Fraction(v, table.denominator): n for v, n in sorted(counts.items())}


def _oracle_box(inst: GroupInstance, limit: Optional[int], points: Optional[int]):
    N = inst.snf.N
    oracle_limit = resolve(limit, "oracle_limit")
    if N > oracle_limit:
        raise CosetLimitExceeded(f"coset count {N} exceeds oracle limit {oracle_limit}")
    point_limit = resolve(points, "oracle_points")
    if N ** inst.dim > point_limit:
        raise CosetLimitExceeded(f"oracle box of {N ** inst.dim} points exceeds limit {point_limit}")
    # a shortest path uses at most N - 1 edges
    return itertools.product(range(N), repeat=inst.dim)


def oracle_m(inst: GroupInstance, r: Sequence[int], limit: Optional[int] = None,
             points: Optional[int] = None) -> Fraction:
    """
    Brute-force m(Lambda, l, r) over the box [0, N - 1]^k.

    Args:
        inst: Group instance
        r: Residue vector
        limit: Largest coset count accepted
        points: Largest box size accepted

    Returns:
        Exact minimum
    """
    if len(r) != inst.dim:
        raise DimensionMismatch(f"Residue has length {len(r)}, expected {inst.dim}")
    best = None
    for x in _oracle_box(inst, limit, points):
        value = sum(w * v for w, v in zip(inst.cost.weights, x))
        if best is not None and value >= best:
            continue
        if is_member(inst.basis, [a - b for a, b in zip(x, r)]):
            best = value
    return Fraction(best, inst.cost.denominator)


def oracle_table(inst: GroupInstance, limit: Optional[int] = None,
                 points: Optional[int] = None) -> Dict[IntVector, Fraction]:
    """
    Brute-force minima for every coset in one scan of the box.

    Cosets are keyed by their reduced representative in the HNF box, so
    the grouping does not depend on the Smith labels used by the solver.
    """
    H = hnf(inst.basis.rows)
    best: Dict[IntVector, int] = {}
    for x in _oracle_box(inst, limit, points):
        key = reduce_mod_basis(H, x)
        value = sum(w * v for w, v in zip(inst.cost.weights, x))
        if key not in best or value < best[key]:
            best[key] = value
    return {key: Fraction(v, inst.cost.denominator) for key, v in best.items()}
