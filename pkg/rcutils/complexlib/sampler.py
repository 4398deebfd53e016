"""Random complexes: the binomial model ``Y_d(n, p)``, the uniform simplex
stream ``Y_d(n, M)`` and the seeding contract shared by every Monte Carlo
routine of *rcutils*.

Seeding contract
----------------
Every random routine takes a nonnegative 64-bit integer seed and builds a
:py:class:`numpy.random.Generator` over ``PCG64`` from it. Experiments
composed of many trials never share a generator: trial ``t`` of an
experiment with master seed ``s`` is run with
``derive_trial_seed(s, t)``, which is a pure function of ``(s, t)``. Results
are therefore identical whatever the number of worker processes.
"""

from math import comb
from dataclasses import dataclass

import numpy as np

from rcutils.complexlib.complex import Complex, num_simplices, unrank_simplices
from rcutils.complexlib.log import debug


SEED_MASK = (1 << 64) - 1


class InvalidParameters(Exception):
    """Exception raised when sampling or experiment parameters are invalid."""

    def __init__(self, message):
        self.message = message
        super().__init__('InvalidParameters: {}'.format(self.message))

    def __str__(self):
        return self.message


def make_rng(seed):
    """Returns the generator used for the given 64-bit seed."""
    return np.random.Generator(np.random.PCG64(int(seed) & SEED_MASK))


def derive_trial_seed(master_seed, trial_index):
    """Derives the seed of a single trial from the master seed.

    The derivation is :py:class:`numpy.random.SeedSequence` with the master
    seed as entropy and the trial index as spawn key, whose first 64-bit
    output word is returned. It is stateless and avalanching, and its
    algorithm is frozen by *numpy*'s stream-compatibility policy, so the
    mapping is reproducible across versions and worker counts.

    Args:
        master_seed (int): experiment seed (reduced modulo ``2**64``)
        trial_index (int): nonnegative trial index

    Returns:
        int: the trial seed in ``[0, 2**64)``.
    """
    if trial_index < 0:
        raise InvalidParameters('trial index must be nonnegative, got {}.'.format(trial_index))
    seq = np.random.SeedSequence(int(master_seed) & SEED_MASK, spawn_key=(int(trial_index),))
    return int(seq.generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class SampleParams:
    """Parameters of the binomial model ``Y_d(n, p)``.

    Exactly one of ``c`` (with ``p = c/n``) and ``p`` must be given.

    Attributes:
        n (:py:class:`int`)    : number of vertices, at least ``d+1``
        d (:py:class:`int`)    : dimension, at least 1
        seed (:py:class:`int`) : 64-bit seed
        c (:py:class:`float`)  : scaled density
        p (:py:class:`float`)  : explicit inclusion probability
    """
    n: int
    d: int
    seed: int = 0
    c: float = None
    p: float = None

    def __post_init__(self):
        if self.d < 1:
            raise InvalidParameters('d must be at least 1, got {}.'.format(self.d))
        if self.n < self.d + 1:
            raise InvalidParameters('n must be at least d+1={}, got {}.'.format(self.d + 1, self.n))
        if (self.c is None) == (self.p is None):
            raise InvalidParameters('exactly one of c and p must be given.')
        if self.c is not None and self.c < 0:
            raise InvalidParameters('c must be nonnegative, got {}.'.format(self.c))
        if not 0.0 <= self.prob <= 1.0:
            raise InvalidParameters('p={} is outside [0, 1].'.format(self.prob))

    @property
    def prob(self):
        """float: the inclusion probability ``p``."""
        if self.p is not None:
            return float(self.p)
        return float(self.c) / self.n


def sample_complex(params):
    """Draws ``Y`` from ``Y_d(n, p)``.

    One uniform variate is consumed per ``d``-simplex, in lexicographic
    order, and the simplex is kept when the variate is below ``p``.

    Args:
        params (SampleParams): model parameters and seed

    Returns:
        Complex: the sampled complex.
    """
    n, d, p = params.n, params.d, params.prob
    m = num_simplices(n, d)
    rng = make_rng(params.seed)
    kept = np.flatnonzero(rng.random(m) < p)
    debug('sampled {} of {} simplices (n={}, d={}, p={:.6g})\n'.format(kept.size, m, n, d, p))
    return Complex(n, d, unrank_simplices(n, d, kept), check=False)


class ProcessStream:
    """A uniformly random ordering of all ``d``-simplices on ``n`` vertices.

    The prefix of length ``M`` is the complex ``Y_d(n, M)`` of the process
    that adds one uniformly chosen new simplex at a time.

    Args:
        n (int)              : number of vertices
        d (int)              : dimension
        seed (int)           : 64-bit seed
        ordering (ndarray)   : permutation of the simplex ranks
    """

    def __init__(self, n, d, seed, ordering):
        self.n = n
        self.d = d
        self.seed = seed
        self.ordering = ordering
        self._simplices = None

    def __len__(self):
        return len(self.ordering)

    def _rows(self):
        if self._simplices is None:
            self._simplices = [tuple(int(v) for v in row)
                               for row in unrank_simplices(self.n, self.d, self.ordering)]
        return self._simplices

    def simplex_at(self, position):
        """Returns the simplex added at the given (0-based) step."""
        return self._rows()[position]

    def prefix(self, M):
        """Returns ``Y_d(n, M)``, the complex made of the first ``M`` simplices.

        Raises:
            InvalidParameters: if ``M`` is outside ``[0, C(n, d+1)]``.
        """
        if not 0 <= M <= len(self):
            raise InvalidParameters('M={} is outside [0, {}].'.format(M, len(self)))
        return Complex(self.n, self.d, self._rows()[:M], check=False)


def sample_stream(n, d, seed):
    """Draws the simplex stream of the random process ``Y_d(n, M)``.

    Args:
        n (int)   : number of vertices, at least ``d+1``
        d (int)   : dimension
        seed (int): 64-bit seed

    Returns:
        ProcessStream: the seeded permutation of all ``d``-simplices.
    """
    if d < 1 or n < d + 1:
        raise InvalidParameters('need d >= 1 and n >= d+1, got n={}, d={}.'.format(n, d))
    rng = make_rng(seed)
    return ProcessStream(n, d, seed, rng.permutation(comb(n, d + 1)))


def sample_complex_m(n, d, M, seed):
    """Draws ``Y_d(n, M)``, a uniformly random set of ``M`` simplices.

    It coincides with ``sample_stream(n, d, seed).prefix(M)``.
    """
    return sample_stream(n, d, seed).prefix(M)
