"""
Exact integer linear algebra for lattices in Z^k.

Hermite and Smith normal forms, determinants, membership, integer kernels
and the coset indexing of Z^k / Lambda. All arithmetic is done with
Python integers, so no result is ever rounded.
"""

import logging
import math
from functools import lru_cache
from typing import List, Sequence, Tuple

from .types import CosetLabel, IntMatrix, IntVector, LatticeBasis, SnfDecomposition
from .utils import DimensionMismatch, NoIntegerSolution, RankDeficient, SingularBasis

logger = logging.getLogger(__name__)


def _as_rows(M: Sequence[Sequence[int]]) -> List[List[int]]:
    rows = [[int(v) for v in row] for row in M]
    if not rows or not rows[0]:
        raise DimensionMismatch("Matrix must have positive dimensions")
    width = len(rows[0])
    if any(len(row) != width for row in rows):
        raise DimensionMismatch("Matrix rows have different lengths")
    return rows


def _freeze(rows: Sequence[Sequence[int]]) -> IntMatrix:
    return tuple(tuple(row) for row in rows)


def _identity(n: int) -> List[List[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def det_abs_rows(M: Sequence[Sequence[int]]) -> int:
    """
    Absolute determinant of a square integer matrix (Bareiss elimination).

    Args:
        M: Square matrix

    Returns:
        |det M| as a Python int
    """
    A = _as_rows(M)
    n = len(A)
    if any(len(row) != n for row in A):
        raise DimensionMismatch("Determinant needs a square matrix")
    sign = 1
    prev = 1
    for t in range(n - 1):
        if A[t][t] == 0:
            swap = next((i for i in range(t + 1, n) if A[i][t] != 0), None)
            if swap is None:
                return 0
            A[t], A[swap] = A[swap], A[t]
            sign = -sign
        for i in range(t + 1, n):
            for j in range(t + 1, n):
                A[i][j] = (A[i][j] * A[t][t] - A[i][t] * A[t][j]) // prev
        prev = A[t][t]
    return abs(sign * A[n - 1][n - 1])


def det_abs(B: LatticeBasis) -> int:
    """|det B| of a lattice basis, i.e. the index of Lambda in Z^k."""
    return det_abs_rows(B.rows)


def _hnf_generators(M: Sequence[Sequence[int]]) -> List[List[int]]:
    """
    Row-style Hermite normal form of the lattice generated by the rows of M.

    Zero rows produced by the reduction are dropped, so the result is a
    basis of the generated lattice even when M has dependent rows.
    """
    A = _as_rows(M)
    m, n = len(A), len(A[0])
    r = 0
    for col in range(n):
        if r == m:
            break
        while True:
            nonzero = [i for i in range(r, m) if A[i][col] != 0]
            if not nonzero:
                break
            pivot = min(nonzero, key=lambda i: abs(A[i][col]))
            A[r], A[pivot] = A[pivot], A[r]
            finished = True
            for i in range(r + 1, m):
                if A[i][col] != 0:
                    q = A[i][col] // A[r][col]
                    A[i] = [a - q * b for a, b in zip(A[i], A[r])]
                    if A[i][col] != 0:
                        finished = False
            if finished:
                break
        if A[r][col] == 0:
            continue
        if A[r][col] < 0:
            A[r] = [-a for a in A[r]]
        p = A[r][col]
        for i in range(r):
            q = A[i][col] // p
            if q:
                A[i] = [a - q * b for a, b in zip(A[i], A[r])]
        r += 1
    return [row for row in A[:r]]


def hnf(M: Sequence[Sequence[int]]) -> IntMatrix:
    """
    Row-style Hermite normal form.

    Pivots are positive and every entry above a pivot lies in [0, pivot).
    The row span over Z is preserved.

    Args:
        M: Matrix with linearly independent rows

    Returns:
        HNF as a tuple of rows
    """
    rows = _as_rows(M)
    H = _hnf_generators(rows)
    if len(H) < len(rows):
        raise RankDeficient(f"Rows are dependent: rank {len(H)} < {len(rows)}")
    return _freeze(H)


def lattice_from_generators(generators: Sequence[Sequence[int]], k: int) -> LatticeBasis:
    """
    Basis (in HNF) of the lattice generated by an arbitrary set of vectors.

    Args:
        generators: Generating vectors of length k
        k: Ambient dimension

    Returns:
        Full-rank lattice basis
    """
    if any(len(g) != k for g in generators):
        raise DimensionMismatch(f"Generators must have length {k}")
    H = _hnf_generators(generators) if generators else []
    if len(H) != k:
        raise RankDeficient(f"Generators span a lattice of rank {len(H)} < {k}")
    return LatticeBasis(_freeze(H))


@lru_cache(maxsize=512)
def _cached_hnf(rows: IntMatrix) -> IntMatrix:
    return _freeze(_hnf_generators(rows))


def is_member(B: LatticeBasis, x: Sequence[int]) -> bool:
    """
    Decide whether x lies in the row span of B over Z.

    Args:
        B: Lattice basis
        x: Integer vector

    Returns:
        True iff x is an integer combination of the rows of B
    """
    if len(x) != B.dim:
        raise DimensionMismatch(f"Vector of length {len(x)} against lattice of dimension {B.dim}")
    return _in_row_span(_cached_hnf(B.rows), x)


def _in_row_span(H: IntMatrix, x: Sequence[int]) -> bool:
    rest = list(x)
    for row in H:
        col = next(j for j, v in enumerate(row) if v != 0)
        q, rem = divmod(rest[col], row[col])
        if rem:
            return False
        if q:
            rest = [a - q * b for a, b in zip(rest, row)]
    return not any(rest)


def reduce_mod_basis(H: Sequence[Sequence[int]], x: Sequence) -> tuple:
    """
    Canonical representative of x + Lambda in the box prod [0, H_ii).

    Args:
        H: Square upper-triangular HNF basis
        x: Integer or rational vector

    Returns:
        Reduced vector of the same type as the entries of x
    """
    rest = list(x)
    for i, row in enumerate(H):
        q = math.floor(rest[i] / row[i]) if not isinstance(rest[i], int) else rest[i] // row[i]
        if q:
            rest = [a - q * b for a, b in zip(rest, row)]
    return tuple(rest)


def _smith(M: Sequence[Sequence[int]]):
    """
    Smith normal form with transforms: U * M * V = D.

    Returns:
        (U, D, V, V_inv, rank) as lists of rows
    """
    A = _as_rows(M)
    m, n = len(A), len(A[0])
    U = _identity(m)
    V = _identity(n)
    V_inv = _identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        V_inv[i], V_inv[j] = V_inv[j], V_inv[i]

    def add_row(dst, src, q):
        # row dst += q * row src
        A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        # col dst += q * col src
        for row in A:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]
        V_inv[src] = [a - q * b for a, b in zip(V_inv[src], V_inv[dst])]

    t = 0
    while t < min(m, n):
        candidates = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j] != 0]
        if not candidates:
            break
        _, i0, j0 = min(candidates)
        swap_rows(t, i0)
        swap_cols(t, j0)
        while True:
            line = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t] != 0]
            line += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j] != 0]
            _, i0, j0 = min(line)
            if i0 != t:
                swap_rows(t, i0)
            if j0 != t:
                swap_cols(t, j0)
            p = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    clean = clean and A[i][t] == 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    clean = clean and A[t][j] == 0
            if not clean:
                continue
            offender = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p != 0),
                None,
            )
            if offender is None:
                break
            add_row(t, offender, 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
        logger.debug(f"SNF step {t}: pivot {A[t][t]}")
        t += 1
    return U, A, V, V_inv, t


def snf(B: LatticeBasis) -> SnfDecomposition:
    """
    Smith normal form of a lattice basis.

    Args:
        B: Nonsingular basis

    Returns:
        Decomposition with U * B * V = diag(d), d_1 | d_2 | ... | d_k
    """
    U, D, V, V_inv, rank = _smith(B.rows)
    if rank < B.dim:
        raise SingularBasis("Lattice basis is singular")
    d = tuple(D[i][i] for i in range(B.dim))
    N = 1
    for v in d:
        N *= v
    return SnfDecomposition(U=_freeze(U), V=_freeze(V), V_inv=_freeze(V_inv), d=d, N=N)


def smith_diagonal(B: LatticeBasis) -> IntVector:
    """Invariant factors of Z^k / Lambda."""
    return snf(B).d


def kernel_lattice(A: Sequence[Sequence[int]]) -> IntMatrix:
    """
    Basis of the saturated integer kernel {x in Z^n : A x = 0}.

    Args:
        A: d x n integer matrix of rank d

    Returns:
        (n - d) rows in HNF; empty when d == n
    """
    rows = _as_rows(A)
    m, n = len(rows), len(rows[0])
    _, _, V, _, rank = _smith(rows)
    if rank < m:
        raise RankDeficient(f"Matrix has rank {rank} < {m}")
    kernel = [[V[i][j] for i in range(n)] for j in range(rank, n)]
    if not kernel:
        return ()
    return hnf(kernel)


def solve_integer(A: Sequence[Sequence[int]], b: Sequence[int]) -> IntVector:
    """
    Some integer solution u of A u = b.

    Args:
        A: m x n integer matrix
        b: Right-hand side of length m

    Returns:
        Integer vector u of length n
    """
    rows = _as_rows(A)
    m, n = len(rows), len(rows[0])
    if len(b) != m:
        raise DimensionMismatch(f"Right-hand side has length {len(b)}, expected {m}")
    U, D, V, _, rank = _smith(rows)
    c = [sum(u * v for u, v in zip(U[i], b)) for i in range(m)]
    z = [0] * n
    for i in range(m):
        if i < rank:
            q, rem = divmod(c[i], D[i][i])
            if rem:
                raise NoIntegerSolution(f"Right-hand side {list(b)} is not in the integer image of the matrix")
            z[i] = q
        elif c[i] != 0:
            raise NoIntegerSolution(f"Right-hand side {list(b)} is not in the image of the matrix")
    return tuple(sum(V[r][j] * z[j] for j in range(n)) for r in range(n))


def coset_index(S: SnfDecomposition, digits: Sequence[int]) -> int:
    """Mixed-radix linear index of a label; the last coordinate runs fastest."""
    index = 0
    for u, d in zip(digits, S.d):
        index = index * d + u
    return index


def coset_from_index(S: SnfDecomposition, index: int) -> CosetLabel:
    """Inverse of coset_index."""
    if not 0 <= index < S.N:
        raise DimensionMismatch(f"Coset index {index} outside [0, {S.N})")
    digits = []
    rest = index
    for d in reversed(S.d):
        rest, u = divmod(rest, d)
        digits.append(u)
    return CosetLabel(digits=tuple(reversed(digits)), index=index)


def coset_label(S: SnfDecomposition, x: Sequence[int]) -> CosetLabel:
    """
    Label of the coset x + Lambda.

    Args:
        S: Smith decomposition of the lattice basis
        x: Integer vector

    Returns:
        Label (V^T x mod d) and its linear index
    """
    if len(x) != S.dim:
        raise DimensionMismatch(f"Vector of length {len(x)} against lattice of dimension {S.dim}")
    digits = tuple(
        sum(S.V[r][i] * x[r] for r in range(S.dim)) % S.d[i]
        for i in range(S.dim)
    )
    return CosetLabel(digits=digits, index=coset_index(S, digits))


def coset_lift(S: SnfDecomposition, label: CosetLabel) -> IntVector:
    """
    Integer vector with the given label.

    Args:
        S: Smith decomposition
        label: Coset label

    Returns:
        x with coset_label(S, x) == label
    """
    if len(label.digits) != S.dim or any(not 0 <= u < d for u, d in zip(label.digits, S.d)):
        raise DimensionMismatch(f"Label {label.digits} out of range for invariant factors {S.d}")
    return tuple(
        sum(S.V_inv[i][r] * label.digits[i] for i in range(S.dim))
        for r in range(S.dim)
    )


def label_increments(S: SnfDecomposition) -> Tuple[IntVector, ...]:
    """Labels of the unit vectors e_1, ..., e_k (row j of V reduced mod d)."""
    return tuple(
        tuple(S.V[j][i] % S.d[i] for i in range(S.dim))
        for j in range(S.dim)
    )
