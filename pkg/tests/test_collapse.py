from itertools import combinations

import networkx as nx
import pytest

from rcutils.complexlib.complex import Complex, all_simplices
from rcutils.complexlib.collapse import (collapse_round, core, core_sequential,
                                         find_boundaries, in_family_F)
from rcutils.complexlib.sampler import SampleParams, derive_trial_seed, make_rng, sample_complex


def iterate_rounds(Y):
    """Applies collapse rounds until nothing changes."""
    rounds = 0
    while True:
        Z = collapse_round(Y)
        if Z == Y:
            return Y, rounds
        Y, rounds = Z, rounds + 1


def random_complex(n, d, c, t, master=3):
    return sample_complex(SampleParams(n=n, d=d, c=c, seed=derive_trial_seed(master, t)))


def test_boundary_is_its_own_core():
    Y = Complex.boundary(4, 2)
    result = core(Y)
    assert not result.collapsible
    assert result.core == Y
    assert result.rounds == 0
    assert result.r == 4


def test_single_simplex_collapses_in_one_round():
    result = core(Complex(3, 2, [(0, 1, 2)]))
    assert result.collapsible
    assert result.rounds == 1
    assert result.r == 0


def test_empty_complex():
    result = core(Complex(5, 2))
    assert result.collapsible
    assert result.rounds == 0


def test_boundary_with_pendant_simplex():
    Y = Complex.boundary(6, 2).union([(2, 3, 4), (2, 4, 5), (3, 4, 5)])
    result = core(Y)
    assert result.core == Complex.boundary(6, 2)
    assert result.rounds == 2


def test_collapse_round_removes_all_free_cofaces():
    Y = Complex(5, 2, [(0, 1, 2), (0, 1, 3)])
    assert collapse_round(Y).f_d == 0


@pytest.mark.parametrize('t', range(20))
def test_worklist_matches_round_iteration(t):
    Y = random_complex(20, 2, 3.0, t)
    fixpoint, rounds = iterate_rounds(Y)
    result = core(Y)
    assert result.core == fixpoint
    assert result.rounds == rounds
    assert result.collapsible == (fixpoint.f_d == 0)


@pytest.mark.parametrize('t', range(200))
def test_core_is_idempotent_and_monotone(t):
    Y = random_complex(15, 2, 3.0, t, master=17)
    result = core(Y)
    assert result.rounds <= Y.f_d
    assert core(result.core).core == result.core
    assert core(result.core).rounds == 0
    missing = [sigma for sigma in all_simplices(Y.n, Y.d) if sigma not in Y]
    sigma = missing[int(make_rng(t).integers(len(missing)))]
    assert result.core.issubset(core(Y.union([sigma])).core)


@pytest.mark.parametrize('t', range(10))
def test_peeling_order_does_not_matter(t):
    Y = random_complex(20, 2, 3.0, t)
    expected = core(Y).core
    for order_seed in range(10):
        assert core_sequential(Y, order_seed).core == expected


@pytest.mark.slow
def test_peeling_order_does_not_matter_many_complexes():
    for t in range(100):
        Y = random_complex(20, 2, 3.0, t, master=99)
        expected = core(Y).core
        for order_seed in range(10):
            assert core_sequential(Y, derive_trial_seed(order_seed, t)).core == expected


def test_exhaustive_small_complexes():
    skeleton = list(all_simplices(5, 2))
    checked = 0
    for size in range(6):
        for simplices in combinations(skeleton, size):
            Y = Complex(5, 2, simplices, check=False)
            expected, rounds = iterate_rounds(Y)
            result = core(Y)
            assert result.core == expected
            assert result.rounds == rounds
            assert core_sequential(Y, checked).core == expected
            checked += 1
    assert checked == 638


def test_sequential_counts_peels():
    Y = Complex(5, 2, [(0, 1, 2), (0, 1, 3), (0, 1, 4)])
    result = core_sequential(Y, 1)
    assert result.collapsible
    assert result.rounds == 3


@pytest.mark.parametrize('t', range(10))
def test_graph_collapsible_iff_forest(t):
    Y = random_complex(60, 1, 1.0, t)
    graph = nx.Graph()
    graph.add_nodes_from(range(Y.n))
    graph.add_edges_from(Y.simplices)
    assert core(Y).collapsible == nx.is_forest(graph)


def test_find_boundaries():
    assert find_boundaries(Complex.boundary(4, 2)) == [(0, 1, 2, 3)]
    assert find_boundaries(Complex.full(5, 2)) == list(combinations(range(5), 4))
    assert find_boundaries(Complex(4, 1, [(0, 1), (1, 2), (0, 2)])) == [(0, 1, 2)]
    missing_one = Complex(4, 2, list(combinations(range(4), 3))[:3])
    assert find_boundaries(missing_one) == []


def test_in_family_F():
    assert not in_family_F(Complex.boundary(6, 2, [1, 2, 4, 5]))
    assert in_family_F(Complex(6, 2, [(0, 1, 2), (0, 1, 3), (0, 2, 3)]))
    assert in_family_F(Complex(6, 2))


@pytest.mark.parametrize('t', range(10))
def test_core_of_family_F_member_has_no_boundary_of_its_own(t):
    Y = random_complex(25, 2, 2.0, t)
    result = core(Y)
    if in_family_F(Y):
        assert find_boundaries(result.core) == []
    else:
        assert not result.collapsible
