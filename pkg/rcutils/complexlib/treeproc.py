"""Rooted random ``d``-trees grown with Poisson offspring, and their pruning.

A tree of depth ``k`` starts from the root face ``(0, ..., d-1)``. For
``level = 0, ..., k-1`` every face at distance ``level`` from the root
receives ``J ~ Poisson(gamma)`` new vertices, each coned over it; the ``d``
other faces of each new simplex lie at distance ``level + 1``. Vertex ids
are allocated sequentially starting at ``d``.

Pruning removes every free face other than the root together with its
coface. The probability that a tree of depth ``k+1`` prunes down to its root
within ``k`` steps is estimated by :py:func:`estimate_rho`.
"""

from collections import Counter
from dataclasses import dataclass

import numpy as np
import networkx as nx

from rcutils.complexlib.complex import Complex, faces_of
from rcutils.complexlib.sampler import InvalidParameters, derive_trial_seed, make_rng
from rcutils.complexlib.log import debug
from rcutils.utils.task_pool import TaskPool


@dataclass(frozen=True)
class TreeParams:
    """Parameters of the tree process.

    Attributes:
        d (:py:class:`int`)      : dimension, at least 1
        k (:py:class:`int`)      : depth, at least 0
        gamma (:py:class:`float`): Poisson offspring rate
        seed (:py:class:`int`)   : 64-bit seed
    """
    d: int
    k: int
    gamma: float
    seed: int = 0

    def __post_init__(self):
        if self.d < 1:
            raise InvalidParameters('d must be at least 1, got {}.'.format(self.d))
        if self.k < 0:
            raise InvalidParameters('k must be nonnegative, got {}.'.format(self.k))
        if self.gamma < 0:
            raise InvalidParameters('gamma must be nonnegative, got {}.'.format(self.gamma))


@dataclass(frozen=True)
class TreeNode:
    """A simplex of a rooted tree: ``new_vertex`` coned over ``parent_face``,
    which lies at distance ``level`` from the root.
    """
    parent_face: tuple
    new_vertex: int
    level: int

    @property
    def simplex(self):
        return tuple(sorted(self.parent_face + (self.new_vertex,)))


class RootedTree:
    """A rooted ``d``-tree, stored as the list of its cone steps.

    Args:
        d (int)      : dimension
        nodes (list) : :py:class:`TreeNode` objects in creation order
    """

    def __init__(self, d, nodes=()):
        self.d = d
        self.root = tuple(range(d))
        self.nodes = list(nodes)

    def __len__(self):
        return len(self.nodes)

    def __repr__(self):
        return 'RootedTree(d={}, simplices={})'.format(self.d, len(self.nodes))

    @property
    def simplices(self):
        return [node.simplex for node in self.nodes]

    @property
    def num_vertices(self):
        """int: one more than the largest vertex id in use."""
        return max([self.d] + [node.new_vertex + 1 for node in self.nodes])

    def is_root_only(self):
        return not self.nodes

    def to_complex(self, offset=0, n=None):
        """Returns the complex made of the simplices of the tree.

        Args:
            offset (int): shift applied to every vertex id
            n (int)     : vertex count of the ambient complex (defaults to
                          the smallest one that fits)
        """
        if n is None:
            n = self.num_vertices + offset
        simplices = [tuple(v + offset for v in sigma) for sigma in self.simplices]
        return Complex(n, self.d, simplices)

    def face_graph(self):
        """Returns the graph whose vertices are the ``(d-1)``-faces of the tree
        and whose edges join two faces of a common simplex.
        """
        graph = nx.Graph()
        graph.add_node(self.root)
        for sigma in self.simplices:
            faces = faces_of(sigma)
            graph.add_nodes_from(faces)
            graph.add_edges_from((faces[i], faces[j])
                                 for i in range(len(faces)) for j in range(i + 1, len(faces)))
        return graph

    def levels(self):
        """Returns the distance from the root of every face reachable from it."""
        return nx.single_source_shortest_path_length(self.face_graph(), self.root)


def sample_tree(params):
    """Grows a random rooted ``d``-tree of depth ``k``.

    At each level one Poisson vector is drawn, with one entry per frontier
    face in creation order.

    Args:
        params (TreeParams): dimension, depth, rate and seed

    Returns:
        RootedTree: the sampled tree.
    """
    d = params.d
    rng = make_rng(params.seed)
    tree = RootedTree(d)
    frontier = [tree.root]
    next_vertex = d
    for level in range(params.k):
        if not frontier:
            break
        offspring = rng.poisson(params.gamma, size=len(frontier))
        new_frontier = []
        for face, count in zip(frontier, offspring):
            for _ in range(int(count)):
                node = TreeNode(face, next_vertex, level)
                next_vertex += 1
                tree.nodes.append(node)
                new_frontier.extend(tau for tau in faces_of(node.simplex) if tau != face)
        frontier = new_frontier
    return tree


def prune(tree):
    """Applies one pruning step.

    Every free face distinct from the root is removed with its coface,
    simultaneously; vertices left without simplices disappear with them.

    Args:
        tree (RootedTree): the tree

    Returns:
        RootedTree: the pruned tree.
    """
    degree = Counter()
    for node in tree.nodes:
        degree.update(faces_of(node.simplex))
    kept = [node for node in tree.nodes
            if not any(degree[tau] == 1 and tau != tree.root for tau in faces_of(node.simplex))]
    return RootedTree(tree.d, kept)


def collapses_within(tree, k):
    """Checks whether at most ``k`` pruning steps reduce the tree to its root."""
    for _ in range(k):
        if tree.is_root_only():
            break
        pruned = prune(tree)
        if len(pruned) == len(tree):
            return False
        tree = pruned
    return tree.is_root_only()


def collapse_time(d, gamma, depth, rng):
    """Samples a tree of the given depth and returns its pruning time.

    The tree is drawn level by level with the same variates, in the same
    order, as :py:func:`sample_tree`, but only offspring counts are kept.
    The pruning time of a face is 0 without children and otherwise the
    maximum, over its child simplices, of one plus the smallest pruning time
    among the child's other faces. The root's time is the step at which the
    last simplex containing the root is pruned. Every other simplex of a
    tree of depth ``k+1`` is gone after ``k`` steps, so such a tree prunes
    to its root within ``k`` steps exactly when the root's time is at most
    ``k``.

    Args:
        d (int)                   : dimension
        gamma (float)             : Poisson rate
        depth (int)               : tree depth
        rng (numpy.random.Generator): generator seeded as in :py:func:`sample_tree`

    Returns:
        int: pruning time of the root.
    """
    counts = []
    width = 1
    for _ in range(depth):
        if width == 0:
            break
        level = rng.poisson(gamma, size=width)
        counts.append(level)
        width = int(level.sum()) * d
    if not counts:
        return 0
    # faces of the deepest sampled level: children (if any) are leaves
    times = (counts[-1] > 0).astype(np.int64)
    for level in reversed(counts[:-1]):
        simplex_times = times.reshape(-1, d).min(axis=1) + 1
        face_times = np.zeros(level.size, dtype=np.int64)
        parents = level > 0
        if simplex_times.size:
            starts = np.cumsum(level) - level
            face_times[parents] = np.maximum.reduceat(simplex_times, starts[parents])
        times = face_times
    return int(times[0])


def estimate_rho(d, k, gamma, trials, seed, jobs=1):
    """Estimates the probability that a tree of depth ``k+1`` prunes to its
    root within ``k`` steps.

    Trial ``t`` uses the tree drawn from ``derive_trial_seed(seed, t)``.

    Args:
        d (int)      : dimension
        k (int)      : number of pruning steps
        gamma (float): Poisson rate
        trials (int) : number of trees
        seed (int)   : master seed
        jobs (int)   : worker processes

    Returns:
        tuple: ``(estimate, standard_error)``.
    """
    TreeParams(d, k + 1, gamma, seed)
    if trials < 1:
        raise InvalidParameters('trials must be at least 1, got {}.'.format(trials))
    tasks = [(d, k, gamma, derive_trial_seed(seed, t)) for t in range(trials)]
    hits = sum(TaskPool(jobs).imap(_rho_trial, tasks, chunksize=256))
    estimate = hits / trials
    error = float(np.sqrt(estimate * (1 - estimate) / trials))
    debug('rho estimate d={} k={} gamma={}: {}/{}\n'.format(d, k, gamma, hits, trials))
    return estimate, error


def _rho_trial(task):
    d, k, gamma, trial_seed = task
    return int(collapse_time(d, gamma, k + 1, make_rng(trial_seed)) <= k)
