"""The ``d``-collapse engine.

A ``(d-1)``-face is *free* when exactly one simplex contains it. A collapse
round removes, simultaneously, every simplex containing a free face; the
core is the fixpoint of repeated rounds and the complex is
``d``-collapsible when the core is empty.

Peeling keeps, for every face, its degree and the XOR of the indices of the
simplices containing it: when the degree drops to 1 the XOR is the index of
the only remaining coface, so no coface lists are stored.
"""

from collections import deque
from dataclasses import dataclass
from itertools import combinations

from rcutils.complexlib.complex import Complex, faces_of
from rcutils.complexlib.sampler import make_rng
from rcutils.complexlib.log import debug


@dataclass(frozen=True)
class CoreResult:
    """Outcome of a peeling run.

    Attributes:
        core (:py:class:`Complex`)  : the simplices that survive peeling
        rounds (:py:class:`int`)    : collapse rounds until the fixpoint (for
                                      :py:func:`core_sequential`, the number
                                      of single-face peels)
        collapsible (:py:class:`bool`): whether the core is empty
    """
    core: Complex
    rounds: int
    collapsible: bool

    @property
    def r(self):
        """int: number of simplices of the core."""
        return self.core.f_d


class _PeelState:
    """Per-call scratch state: face degrees and coface XORs."""

    def __init__(self, Y):
        self.simplices = Y.simplices
        self.alive = [True] * len(self.simplices)
        self.degree = {}
        self.xor = {}
        for idx, sigma in enumerate(self.simplices):
            for tau in faces_of(sigma):
                self.degree[tau] = self.degree.get(tau, 0) + 1
                self.xor[tau] = self.xor.get(tau, 0) ^ idx

    def free_faces(self):
        return sorted(tau for tau, deg in self.degree.items() if deg == 1)

    def coface(self, tau):
        return self.xor[tau]

    def remove(self, idx):
        """Removes a simplex and returns its faces."""
        self.alive[idx] = False
        faces = faces_of(self.simplices[idx])
        for tau in faces:
            self.degree[tau] -= 1
            self.xor[tau] ^= idx
        return faces

    def survivors(self):
        return [sigma for sigma, alive in zip(self.simplices, self.alive) if alive]


def collapse_round(Y):
    """Applies one collapse round ``R(Y)``.

    Free faces are identified on ``Y`` itself, then all of their cofaces are
    removed at once.

    Args:
        Y (Complex): the complex

    Returns:
        Complex: the complex ``R(Y)``.
    """
    state = _PeelState(Y)
    doomed = {state.coface(tau) for tau in state.free_faces()}
    return Y.with_simplices(sigma for idx, sigma in enumerate(Y.simplices) if idx not in doomed)


def core(Y):
    """Computes the core ``R_inf(Y)`` with a worklist.

    Faces enter a FIFO queue tagged with the round in which they are free:
    the faces that are free in ``Y`` carry tag 1, and a face whose degree
    drops to 1 while processing round ``i`` carries tag ``i+1``. Processing
    a face that still has degree 1 removes its coface in the round of its
    tag, so the number of rounds equals the one of the simultaneous
    definition.

    Args:
        Y (Complex): the complex

    Returns:
        CoreResult: the core, the number of rounds and the verdict.
    """
    state = _PeelState(Y)
    queue = deque((tau, 1) for tau in state.free_faces())
    rounds = 0
    while queue:
        tau, tag = queue.popleft()
        if state.degree[tau] != 1:
            continue
        rounds = max(rounds, tag)
        for face in state.remove(state.coface(tau)):
            if state.degree[face] == 1:
                queue.append((face, tag + 1))
    survivors = state.survivors()
    debug('core: f_d={} -> r={} after {} rounds\n'.format(Y.f_d, len(survivors), rounds))
    return CoreResult(core=Y.with_simplices(survivors), rounds=rounds,
                      collapsible=not survivors)


def core_sequential(Y, order_seed):
    """Peels one free face at a time, in random order.

    At every step a face is chosen uniformly among the currently free ones
    and its coface is removed. The final simplex set does not depend on the
    order, which makes this an oracle for :py:func:`core`.

    Args:
        Y (Complex)     : the complex
        order_seed (int): seed of the peeling order

    Returns:
        CoreResult: the core; ``rounds`` counts the single peels performed.
    """
    rng = make_rng(order_seed)
    state = _PeelState(Y)
    free = state.free_faces()
    position = {tau: i for i, tau in enumerate(free)}

    def discard(tau):
        i = position.pop(tau, None)
        if i is None:
            return
        last = free.pop()
        if i < len(free):
            free[i] = last
            position[last] = i

    peels = 0
    while free:
        tau = free[int(rng.integers(len(free)))]
        for face in state.remove(state.coface(tau)):
            if state.degree[face] == 1:
                if face not in position:
                    position[face] = len(free)
                    free.append(face)
            else:
                discard(face)
        peels += 1
    survivors = state.survivors()
    return CoreResult(core=Y.with_simplices(survivors), rounds=peels,
                      collapsible=not survivors)


def iter_boundaries(Y):
    """Yields, without repetition, the vertex sets of the copies of the
    boundary of a ``(d+1)``-simplex contained in ``Y``.

    For every simplex ``sigma`` and vertex ``v`` outside it, the set
    ``S = sigma + {v}`` qualifies when the ``d+1`` simplices
    ``(sigma - {u}) + {v}`` all belong to ``Y``.
    """
    d = Y.d
    seen = set()
    for sigma in Y.simplices:
        members = set(sigma)
        for v in range(Y.n):
            if v in members:
                continue
            S = tuple(sorted(sigma + (v,)))
            if S in seen:
                continue
            seen.add(S)
            if all(rest in Y for rest in combinations(S, d + 1)):
                yield S


def find_boundaries(Y):
    """Lists the copies of the boundary of a ``(d+1)``-simplex in ``Y``.

    Args:
        Y (Complex): the complex

    Returns:
        list: sorted list of the ``(d+2)``-vertex tuples whose every
        ``(d+1)``-subset is a simplex of ``Y``.
    """
    return sorted(iter_boundaries(Y))


def in_family_F(Y):
    """Checks whether ``Y`` contains no boundary of a ``(d+1)``-simplex."""
    return next(iter_boundaries(Y), None) is None
