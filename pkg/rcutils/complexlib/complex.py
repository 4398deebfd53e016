"""Canonical representation of the complexes handled by *rcutils*.

A complex lives on the vertex set ``{0, ..., n-1}`` and always contains the
full ``(d-1)``-skeleton, which is never stored: only its ``d``-simplices are.
Simplices and faces are sorted integer tuples and lexicographic order is the
canonical order used for every iteration and tie-break, so that results do
not depend on hashing or on the number of worker processes.

Example::

    >>> from rcutils.complexlib.complex import Complex, build_degree_index
    >>> Y = Complex.boundary(4, 2)
    >>> sorted(set(build_degree_index(Y).values()))
    [2]
"""

from math import comb
from itertools import combinations
from collections import Counter
from collections.abc import Mapping

import numpy as np


VIOLATIONS = ('arity', 'unsorted', 'out_of_range', 'duplicate')


class InvalidComplex(Exception):
    """Exception raised when a complex breaks one of its invariants.

    Args:
        violation (str): description returned by :py:func:`validate`
    """

    def __init__(self, violation):
        self.message = violation
        self.kind = violation.split(':', 1)[0]
        super().__init__('InvalidComplex: {}'.format(self.message))

    def __str__(self):
        return self.message


def num_simplices(n, d):
    """Number of ``d``-simplices on ``n`` vertices, i.e. ``C(n, d+1)``."""
    return comb(n, d + 1)


def all_simplices(n, d):
    """Iterates over every ``d``-simplex on ``n`` vertices in lexicographic order."""
    return combinations(range(n), d + 1)


def faces_of(sigma):
    """Returns the ``(d-1)``-faces of a simplex.

    Args:
        sigma (tuple): sorted vertex tuple

    Returns:
        list: the ``i``-th element is ``sigma`` without its ``i``-th vertex.
    """
    return [sigma[:i] + sigma[i + 1:] for i in range(len(sigma))]


def unrank_simplices(n, d, ranks):
    """Maps lexicographic ranks to simplices.

    The rank of a ``d``-simplex is its position in
    :py:func:`all_simplices`. The conversion works one coordinate at a time
    with :py:func:`numpy.searchsorted` over the cumulative counts of
    simplices sharing a prefix, so that large batches are converted without
    enumerating the skeleton.

    Args:
        n (int)            : number of vertices
        d (int)            : dimension
        ranks (array-like) : integer ranks in ``[0, C(n, d+1))``

    Returns:
        numpy.ndarray: array of shape ``(len(ranks), d+1)`` whose rows are
        sorted vertex tuples.
    """
    ranks = np.asarray(ranks, dtype=np.int64).reshape(-1)
    k = d + 1
    out = np.empty((ranks.size, k), dtype=np.int64)
    if ranks.size == 0:
        return out
    # offsets[j][v]: number of j-subsets of [n] whose smallest element is < v
    offsets = {}
    for j in range(1, k + 1):
        counts = np.array([comb(n - 1 - v, j - 1) for v in range(n)], dtype=np.int64)
        offsets[j] = np.concatenate(([0], np.cumsum(counts)))
    rest = ranks.copy()
    base = np.zeros(ranks.size, dtype=np.int64)
    for pos in range(k):
        j = k - pos
        table = offsets[j]
        target = rest + table[base]
        v = np.searchsorted(table, target, side='right') - 1
        out[:, pos] = v
        rest = target - table[v]
        base = v + 1
    return out


def validate(n, d, simplices):
    """Checks the invariants of a complex.

    Args:
        n (int)          : number of vertices
        d (int)          : dimension
        simplices (list) : candidate ``d``-simplices

    Returns:
        str: **None** if the complex is valid, otherwise a description of the
        first violation found, prefixed by its kind (``arity``, ``unsorted``,
        ``out_of_range`` or ``duplicate``).
    """
    if d < 1:
        return 'arity: dimension must be at least 1, got {}'.format(d)
    if n < 0:
        return 'out_of_range: vertex count must be nonnegative, got {}'.format(n)
    seen = set()
    for sigma in simplices:
        sigma = tuple(sigma)
        if len(sigma) != d + 1:
            return 'arity: simplex {} has {} vertices, expected {}'.format(
                list(sigma), len(sigma), d + 1)
        if any(sigma[i] >= sigma[i + 1] for i in range(d)):
            return 'unsorted: simplex {} is not strictly increasing'.format(list(sigma))
        if sigma[0] < 0 or sigma[-1] >= n:
            return 'out_of_range: vertex out of range in simplex {} (n={})'.format(
                list(sigma), n)
        if sigma in seen:
            return 'duplicate: simplex {} appears more than once'.format(list(sigma))
        seen.add(sigma)
    return None


class Complex:
    """An immutable ``d``-complex over the implicit full ``(d-1)``-skeleton.

    Args:
        n (int)          : number of vertices
        d (int)          : dimension of the stored simplices
        simplices (list) : ``d``-simplices as sorted vertex sequences
        check (bool)     : validate the input (internal callers that build
                           simplices canonically skip it)

    Raises:
        InvalidComplex: if ``check`` is set and an invariant is broken.
    """

    __slots__ = ('_n', '_d', '_simplices', '_members', '_degrees')

    def __init__(self, n, d, simplices=(), check=True):
        simplices = [tuple(int(v) for v in sigma) for sigma in simplices]
        if check:
            violation = validate(n, d, simplices)
            if violation is not None:
                raise InvalidComplex(violation)
        self._n = int(n)
        self._d = int(d)
        self._members = frozenset(simplices)
        self._simplices = tuple(sorted(self._members))
        self._degrees = None

    @classmethod
    def full(cls, n, d):
        """Returns the full ``d``-skeleton on ``n`` vertices."""
        return cls(n, d, all_simplices(n, d), check=False)

    @classmethod
    def boundary(cls, n, d, vertices=None):
        """Returns the boundary of a ``(d+1)``-simplex.

        Args:
            n (int)         : number of vertices of the ambient complex
            d (int)         : dimension
            vertices (list) : the ``d+2`` vertices (defaults to ``0..d+1``)
        """
        if vertices is None:
            vertices = range(d + 2)
        vertices = sorted(vertices)
        return cls(n, d, combinations(vertices, d + 1))

    @property
    def n(self):
        return self._n

    @property
    def d(self):
        return self._d

    @property
    def simplices(self):
        """tuple: the simplices in lexicographic order."""
        return self._simplices

    @property
    def f_d(self):
        """int: number of ``d``-simplices."""
        return len(self._simplices)

    def __len__(self):
        return len(self._simplices)

    def __iter__(self):
        return iter(self._simplices)

    def __contains__(self, sigma):
        return tuple(sigma) in self._members

    def __eq__(self, other):
        if not isinstance(other, Complex):
            return NotImplemented
        return (self._n, self._d, self._members) == (other._n, other._d, other._members)

    def __hash__(self):
        return hash((self._n, self._d, self._members))

    def __repr__(self):
        return 'Complex(n={}, d={}, f_d={})'.format(self._n, self._d, self.f_d)

    def issubset(self, other):
        """Checks whether every simplex of this complex belongs to ``other``."""
        return self._members <= other._members

    def with_simplices(self, simplices):
        """Returns a complex with the same ``n`` and ``d`` and the given
        simplices, which are assumed to be canonical.
        """
        return Complex(self._n, self._d, simplices, check=False)

    def union(self, simplices):
        """Returns a complex with the given simplices added."""
        extra = [tuple(sigma) for sigma in simplices]
        violation = validate(self._n, self._d, [s for s in extra if s not in self._members])
        if violation is not None:
            raise InvalidComplex(violation)
        return Complex(self._n, self._d, self._members.union(extra), check=False)

    def degree_index(self):
        """Returns the (cached) :py:class:`DegreeIndex` of the complex."""
        if self._degrees is None:
            self._degrees = build_degree_index(self)
        return self._degrees


class DegreeIndex(Mapping):
    """Read-only map from ``(d-1)``-faces to their degree.

    Faces missing from the map have degree 0: indexing them returns ``0``,
    but they are not reported by iteration, ``len`` or ``in``.
    """

    def __init__(self, counts):
        self._counts = dict(counts)

    def __getitem__(self, face):
        return self._counts.get(tuple(face), 0)

    def __contains__(self, face):
        return tuple(face) in self._counts

    def __iter__(self):
        return iter(self._counts)

    def __len__(self):
        return len(self._counts)

    def total(self):
        """Sum of all degrees, equal to ``(d+1) * f_d``."""
        return sum(self._counts.values())

    def faces_with_degree(self, degree):
        """Returns the sorted list of faces with the given positive degree."""
        return sorted(face for face, count in self._counts.items() if count == degree)


def build_degree_index(Y):
    """Counts, for every ``(d-1)``-face, the simplices of ``Y`` containing it.

    Args:
        Y (Complex): the complex

    Returns:
        DegreeIndex: the face degrees.
    """
    counts = Counter()
    for sigma in Y.simplices:
        counts.update(faces_of(sigma))
    return DegreeIndex(counts)
