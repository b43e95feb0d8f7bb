"""
Exact rank of sparse rational matrices.

Ranks are computed by Gaussian elimination modulo a 31-bit prime on a dense
numpy array. A second prime certifies the result; when the two disagree the
rank is recomputed over the rationals with sympy.
"""

import logging
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import numpy as np
import sympy
from scipy.sparse.csgraph import structural_rank

from .config import DEFAULT_PRIMES
from .exceptions import InternalConsistencyError
from .models import SparseMatrix


logger = logging.getLogger(__name__)


def reduce_mod(value: Fraction, p: int) -> int:
    """Image of a rational number in Z/p; the denominator must be prime to p."""
    numerator = value.numerator % p
    denominator = value.denominator % p
    if denominator == 0:
        raise ZeroDivisionError(f"denominator of {value} vanishes modulo {p}")
    return numerator * pow(denominator, p - 2, p) % p


def to_dense_mod(matrix: SparseMatrix, p: int) -> np.ndarray:
    dense = np.zeros(matrix.shape, dtype=np.int64)
    for (r, c), value in matrix.entries.items():
        dense[r, c] = reduce_mod(Fraction(value), p)
    return dense


def rank_mod_p(matrix: SparseMatrix, p: int) -> int:
    """
    Rank of the reduction of a matrix modulo p.

    Args:
        matrix: Sparse rational matrix
        p: Prime below 2**31

    Returns:
        Rank over Z/p
    """
    if not matrix.entries:
        return 0
    a = to_dense_mod(matrix, p)
    rows, cols = a.shape
    rank = 0
    for col in range(cols):
        if rank == rows:
            break
        pivots = np.nonzero(a[rank:, col])[0]
        if pivots.size == 0:
            continue
        pivot = rank + int(pivots[0])
        if pivot != rank:
            a[[rank, pivot]] = a[[pivot, rank]]
        inverse = pow(int(a[rank, col]), p - 2, p)
        a[rank] = a[rank] * inverse % p
        below = np.nonzero(a[rank + 1:, col])[0] + rank + 1
        if below.size:
            factors = a[below, col].reshape(-1, 1)
            a[below] = (a[below] - factors * a[rank]) % p
        rank += 1
    return rank


def rank_exact(matrix: SparseMatrix) -> int:
    """Rank over the rationals by sympy's fraction-free elimination."""
    if not matrix.entries:
        return 0
    dense = sympy.zeros(matrix.rows, matrix.cols)
    for (r, c), value in matrix.entries.items():
        dense[r, c] = sympy.Rational(value.numerator, value.denominator)
    return dense.rank()


def rank_bound(matrix: SparseMatrix) -> int:
    """Structural rank of the nonzero pattern, an upper bound for the rank over any field."""
    if matrix.is_zero():
        return 0
    return int(structural_rank(matrix.to_scipy(pattern=True)))


def rank(
    matrix: SparseMatrix,
    primes: Sequence[int] = DEFAULT_PRIMES,
    crosscheck_limit: int = 0,
) -> int:
    """
    Exact rank with two-prime certification.

    Args:
        matrix: Sparse rational matrix
        primes: Two distinct primes
        crosscheck_limit: Also run the rational elimination when both sides are
            at most this large

    Returns:
        The rank over the rationals

    Raises:
        InternalConsistencyError: If the certified modular rank disagrees with
            the rational cross-check or exceeds the structural rank
    """
    if not matrix.entries:
        return 0
    first, second = (rank_mod_p(matrix, p) for p in primes[:2])
    bound = rank_bound(matrix)
    if max(first, second) > bound:
        raise InternalConsistencyError(
            f"modular rank {max(first, second)} exceeds the structural rank {bound} on a {matrix.rows}x{matrix.cols} matrix"
        )
    if first != second:
        logger.warning(
            "Modular ranks disagree on a %dx%d matrix (%d vs %d); falling back to rational elimination",
            matrix.rows, matrix.cols, first, second,
        )
        return rank_exact(matrix)
    if crosscheck_limit and max(matrix.shape) <= crosscheck_limit:
        exact = rank_exact(matrix)
        if exact != first:
            raise InternalConsistencyError(
                f"modular rank {first} differs from rational rank {exact} on a {matrix.rows}x{matrix.cols} matrix"
            )
    return first


def null_space(matrix: SparseMatrix) -> Tuple[Tuple[Fraction, ...], ...]:
    """Basis of the kernel over the rationals, as column vectors of Fractions."""
    if matrix.cols == 0:
        return ()
    dense = sympy.zeros(matrix.rows, matrix.cols)
    for (r, c), value in matrix.entries.items():
        dense[r, c] = sympy.Rational(value.numerator, value.denominator)
    vectors = []
    for vector in dense.nullspace():
        vectors.append(tuple(Fraction(int(x.p), int(x.q)) for x in vector))
    return tuple(vectors)


def restrict_columns(matrix: SparseMatrix, vectors: Sequence[Sequence[Fraction]]) -> SparseMatrix:
    """Matrix whose column k is matrix applied to vectors[k]."""
    entries = {}
    for k, vector in enumerate(vectors):
        for (r, c), value in matrix.entries.items():
            if vector[c]:
                entries[(r, k)] = entries.get((r, k), Fraction(0)) + value * vector[c]
    return SparseMatrix(
        rows=matrix.rows, cols=len(vectors), entries={key: v for key, v in entries.items() if v}
    )


def matrix_product_is_zero(after: SparseMatrix, before: SparseMatrix) -> bool:
    """True when after @ before vanishes exactly."""
    return after.multiply(before).is_zero()


def identity(size: int, scale: Optional[Fraction] = None) -> SparseMatrix:
    value = Fraction(1) if scale is None else Fraction(scale)
    return SparseMatrix(rows=size, cols=size, entries={(k, k): value for k in range(size)})
