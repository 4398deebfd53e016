"""Top-dimensional homology over prime fields.

Since the complexes have no ``(d+1)``-cells, ``h_d`` is the dimension of the
kernel of the boundary map ``\\partial_d``, and everything else follows from
its rank:

- ``h_d = f_d - rank``,
- ``z^{d-1} = C(n, d) - rank`` (dimension of the ``(d-1)``-cocycles),
- ``h_{d-1} = z^{d-1} - C(n-1, d-1)`` (reduced).

The module also computes the cocycle counts ``a``, ``alpha_j`` and the lower
bounds ``u <= z^{d-1}`` and ``v <= h_d`` that only need face degrees.
"""

from math import comb
from dataclasses import dataclass

import numpy as np
from sympy import isprime

from rcutils.complexlib.complex import faces_of
from rcutils.complexlib.log import debug


DEFAULT_PRIMES = (2, 3, 5)


class NotPrime(Exception):
    """Exception raised when a field characteristic is not a supported prime."""

    def __init__(self, p):
        self.message = '{} is not a prime in [2, 2**31).'.format(p)
        super().__init__('NotPrime: {}'.format(self.message))

    def __str__(self):
        return self.message


class FieldPrime(int):
    """The characteristic ``p`` of the field ``F_p``, checked at construction.

    Raises:
        NotPrime: if ``p`` is not a prime below ``2**31``.
    """

    def __new__(cls, p):
        p = int(p)
        if not (2 <= p < 2**31 and isprime(p)):
            raise NotPrime(p)
        return super().__new__(cls, p)


@dataclass
class BoundaryMatrix:
    """Sparse matrix of ``\\partial_d`` over ``F_p``, one row per simplex.

    Attributes:
        p (:py:class:`FieldPrime`): field characteristic
        faces (:py:class:`list`)  : column labels, the faces of positive degree
        rows (:py:class:`list`)   : for every simplex, the list of
                                    ``(column, value)`` pairs
    """
    p: FieldPrime
    faces: list
    rows: list

    @property
    def shape(self):
        return (len(self.rows), len(self.faces))

    def to_dense(self):
        """Returns the matrix as a dense :py:class:`numpy.ndarray`."""
        dense = np.zeros(self.shape, dtype=np.int64)
        for i, row in enumerate(self.rows):
            for j, value in row:
                dense[i, j] = value
        return dense


@dataclass(frozen=True)
class HomologySummary:
    """Betti numbers of ``Y`` over ``F_p`` in the top two dimensions.

    Attributes:
        p (:py:class:`int`)          : field characteristic
        n (:py:class:`int`)          : number of vertices
        d (:py:class:`int`)          : dimension
        f_d (:py:class:`int`)        : number of simplices
        rank_d (:py:class:`int`)     : rank of the boundary matrix
        h_d (:py:class:`int`)        : top Betti number
        h_d_minus_1 (:py:class:`int`): reduced Betti number in dimension ``d-1``
        z_d_minus_1 (:py:class:`int`): dimension of the ``(d-1)``-cocycles
    """
    p: int
    n: int
    d: int
    f_d: int
    rank_d: int
    h_d: int
    h_d_minus_1: int
    z_d_minus_1: int


@dataclass(frozen=True)
class CocycleCounts:
    """Degree-based cocycle counts and the bounds derived from them.

    Attributes:
        a (:py:class:`int`)      : number of faces of degree 0
        alpha (:py:class:`tuple`): ``alpha[j]`` is the number of simplices with
                                   exactly ``d+1-j`` faces of degree 1, for
                                   ``j = 0..d``
        u (:py:class:`int`)      : lower bound on ``z^{d-1}``
        v (:py:class:`int`)      : lower bound on ``h_d``
    """
    a: int
    alpha: tuple
    u: int
    v: int


def boundary_matrix(Y, p):
    """Builds the boundary matrix of ``Y`` over ``F_p``.

    For a sorted simplex the face dropping its ``i``-th vertex gets the
    coefficient ``(-1)**i`` reduced modulo ``p``. Faces of degree 0 give zero
    columns and are left out.

    Args:
        Y (Complex)     : the complex
        p (int)         : field characteristic

    Returns:
        BoundaryMatrix: the sparse matrix.
    """
    p = FieldPrime(p)
    faces = sorted(Y.degree_index())
    column = {tau: j for j, tau in enumerate(faces)}
    signs = (1, (p - 1) % p)
    rows = [[(column[tau], signs[i % 2]) for i, tau in enumerate(faces_of(sigma))]
            for sigma in Y.simplices]
    return BoundaryMatrix(p=p, faces=faces, rows=rows)


def _rank_gf2(rows):
    """Rank over ``F_2`` with rows packed into integer bitsets."""
    pivots = {}
    for row in rows:
        bits = 0
        for j, value in row:
            if value & 1:
                bits ^= 1 << j
        while bits:
            lead = bits.bit_length() - 1
            pivot = pivots.get(lead)
            if pivot is None:
                pivots[lead] = bits
                break
            bits ^= pivot
    return len(pivots)


def _peel_singletons(rows, ncols):
    """Drops rows owning a column no other row touches.

    Each such row is independent of the others, so it adds exactly one to
    the rank. Returns the number of dropped rows and the remaining ones.
    """
    weight = [0] * ncols
    owners = [set() for _ in range(ncols)]
    for i, row in enumerate(rows):
        for j, value in row:
            if value:
                weight[j] += 1
                owners[j].add(i)
    alive = [True] * len(rows)
    stack = [j for j in range(ncols) if weight[j] == 1]
    dropped = 0
    while stack:
        j = stack.pop()
        if weight[j] != 1:
            continue
        (i,) = owners[j]
        alive[i] = False
        dropped += 1
        for k, value in rows[i]:
            if value:
                weight[k] -= 1
                owners[k].discard(i)
                if weight[k] == 1:
                    stack.append(k)
    return dropped, [row for row, keep in zip(rows, alive) if keep]


def _dense_dtype(p):
    if p < 2**7:
        return np.int16
    if p < 2**15:
        return np.int32
    return np.int64


def _rank_dense(A, p):
    """Rank over ``F_p`` of a dense matrix by row reduction."""
    A = np.array(A, dtype=_dense_dtype(p)) % p
    nrows, ncols = A.shape
    rank = 0
    for col in range(ncols):
        if rank == nrows:
            break
        nonzero = np.flatnonzero(A[rank:, col])
        if nonzero.size == 0:
            continue
        pivot = rank + int(nonzero[0])
        if pivot != rank:
            A[[rank, pivot]] = A[[pivot, rank]]
        inverse = pow(int(A[rank, col]), p - 2, p)
        A[rank, col:] = (A[rank, col:].astype(np.int64) * inverse % p).astype(A.dtype)
        below = rank + 1 + np.flatnonzero(A[rank + 1:, col])
        if below.size:
            factors = A[below, col].astype(np.int64)
            update = np.outer(factors, A[rank, col:].astype(np.int64)) % p
            A[below, col:] = ((A[below, col:] - update) % p).astype(A.dtype)
        rank += 1
    return rank


def rank_mod_p(M):
    """Rank of a boundary matrix over ``F_p``.

    For ``p = 2`` rows are packed into integer bitsets and reduced with XOR.
    For odd ``p`` rows owning a private column are peeled off first (each
    contributes one to the rank) and the remainder is reduced densely.

    Args:
        M (BoundaryMatrix): the matrix

    Returns:
        int: the rank.
    """
    p = int(M.p)
    if not M.rows:
        return 0
    if p == 2:
        return _rank_gf2(M.rows)
    dropped, rest = _peel_singletons(M.rows, len(M.faces))
    if not rest:
        return dropped
    used = sorted({j for row in rest for j, _ in row})
    column = {j: k for k, j in enumerate(used)}
    dense = np.zeros((len(rest), len(used)), dtype=np.int64)
    for i, row in enumerate(rest):
        for j, value in row:
            dense[i, column[j]] = value
    debug('rank mod {}: {} rows peeled, dense block {}x{}\n'.format(
        p, dropped, dense.shape[0], dense.shape[1]))
    return dropped + _rank_dense(dense, p)


def betti(Y, p):
    """Computes the top homology of ``Y`` over ``F_p``.

    Args:
        Y (Complex): the complex
        p (int)    : field characteristic

    Returns:
        HomologySummary: ranks and Betti numbers.
    """
    n, d = Y.n, Y.d
    rank = rank_mod_p(boundary_matrix(Y, p))
    z = comb(n, d) - rank
    return HomologySummary(p=int(p), n=n, d=d, f_d=Y.f_d, rank_d=rank,
                           h_d=Y.f_d - rank,
                           h_d_minus_1=z - comb(n - 1, d - 1),
                           z_d_minus_1=z)


def cocycle_counts(Y):
    """Counts the cocycles exhibited by face degrees alone.

    Args:
        Y (Complex): the complex

    Returns:
        CocycleCounts: ``a``, ``alpha_0..alpha_d``, ``u`` and ``v``.
    """
    n, d = Y.n, Y.d
    degrees = Y.degree_index()
    a = comb(n, d) - len(degrees)
    alpha = [0] * (d + 1)
    for sigma in Y.simplices:
        j = d + 1 - sum(1 for tau in faces_of(sigma) if degrees[tau] == 1)
        if j <= d:
            alpha[j] += 1
    u = a + sum(count * (d - j) for j, count in enumerate(alpha))
    return CocycleCounts(a=a, alpha=tuple(alpha), u=u, v=Y.f_d + u - comb(n, d))
