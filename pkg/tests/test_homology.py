from math import comb

import numpy as np
import pytest
from sympy import GF
from sympy.polys.matrices import DomainMatrix

from rcutils.complexlib.complex import Complex
from rcutils.complexlib.collapse import core, find_boundaries
from rcutils.complexlib.homology import (BoundaryMatrix, FieldPrime, NotPrime, betti,
                                         boundary_matrix, cocycle_counts, rank_mod_p)
from rcutils.complexlib.sampler import SampleParams, derive_trial_seed, sample_complex


# six-vertex triangulation of the real projective plane
RP2 = [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 1, 5),
       (1, 2, 4), (2, 3, 5), (1, 3, 4), (2, 4, 5), (1, 3, 5)]


def oracle_rank(M):
    """Rank computed by sympy over GF(p) on the dense matrix."""
    nrows, ncols = M.shape
    if nrows == 0 or ncols == 0:
        return 0
    K = GF(int(M.p))
    dense = M.to_dense().tolist()
    return DomainMatrix([[K(int(x)) for x in row] for row in dense], (nrows, ncols), K).rank()


def random_complex(n, d, c, t, master=11):
    return sample_complex(SampleParams(n=n, d=d, c=c, seed=derive_trial_seed(master, t)))


@pytest.mark.parametrize('p', [0, 1, 4, 9, -3, 2**31 + 11])
def test_not_prime(p):
    with pytest.raises(NotPrime):
        FieldPrime(p)


def test_field_prime():
    assert FieldPrime(7) == 7
    assert FieldPrime(2**31 - 1) == 2**31 - 1


def test_boundary_matrix_single_simplex():
    M = boundary_matrix(Complex(3, 2, [(0, 1, 2)]), 2)
    assert M.shape == (1, 3)
    assert (M.to_dense() == 1).all()
    M = boundary_matrix(Complex(3, 2, [(0, 1, 2)]), 3)
    assert M.faces == [(0, 1), (0, 2), (1, 2)]
    assert M.to_dense().tolist() == [[1, 2, 1]]


def test_boundary_matrix_of_sphere():
    M = boundary_matrix(Complex.boundary(4, 2), 2)
    assert M.shape == (4, 6)
    assert (M.to_dense().sum(axis=0) == 2).all()
    assert all(len(row) == 3 for row in M.rows)


@pytest.mark.parametrize('p', [2, 3, 5])
def test_rank_of_sphere(p):
    M = boundary_matrix(Complex.boundary(4, 2), p)
    assert rank_mod_p(M) == 3 == oracle_rank(M)


def test_rank_of_zero_matrix():
    assert rank_mod_p(BoundaryMatrix(p=FieldPrime(3), faces=[], rows=[])) == 0
    assert rank_mod_p(BoundaryMatrix(p=FieldPrime(5), faces=[(0,), (1,)], rows=[[], []])) == 0


@pytest.mark.parametrize('p', [2, 3, 5])
def test_rank_small_random(p):
    Y = sample_complex(SampleParams(n=8, d=2, c=3.0, seed=1))
    M = boundary_matrix(Y, p)
    assert rank_mod_p(M) == oracle_rank(M)


@pytest.mark.parametrize('p', [2, 3, 5, 7])
@pytest.mark.parametrize('t', range(8))
def test_rank_matches_oracle(p, t):
    Y = random_complex(12, 2, 3.5, t)
    M = boundary_matrix(Y, p)
    assert rank_mod_p(M) == oracle_rank(M)


@pytest.mark.parametrize('p', [2, 3])
def test_rank_is_permutation_invariant(p):
    Y = random_complex(14, 2, 4.0, 0)
    M = boundary_matrix(Y, p)
    rng = np.random.default_rng(5)
    rows = [M.rows[i] for i in rng.permutation(len(M.rows))]
    relabel = rng.permutation(len(M.faces))
    shuffled = BoundaryMatrix(p=M.p, faces=M.faces,
                              rows=[[(int(relabel[j]), value) for j, value in row] for row in rows])
    assert rank_mod_p(shuffled) == rank_mod_p(M)


def test_betti_of_empty_complex():
    summary = betti(Complex(6, 2), 3)
    assert summary.h_d == 0
    assert summary.rank_d == 0
    assert summary.h_d_minus_1 == comb(5, 2)


@pytest.mark.parametrize('d', [1, 2, 3])
@pytest.mark.parametrize('p', [2, 3, 5])
def test_betti_of_sphere(d, p):
    summary = betti(Complex.boundary(d + 2, d), p)
    assert summary.h_d == 1
    assert summary.h_d_minus_1 == 0


def test_betti_of_spanning_tree():
    path = Complex(6, 1, [(i, i + 1) for i in range(5)])
    summary = betti(path, 2)
    assert summary.h_d == 0
    assert summary.h_d_minus_1 == 0


def test_betti_of_full_skeleton():
    summary = betti(Complex.full(5, 2), 5)
    assert summary.h_d == comb(4, 3)
    assert summary.h_d_minus_1 == 0


def test_projective_plane_depends_on_the_field():
    Y = Complex(6, 2, RP2)
    assert find_boundaries(Y) == []
    assert not core(Y).collapsible
    over_f2, over_f3 = betti(Y, 2), betti(Y, 3)
    assert (over_f2.h_d, over_f2.h_d_minus_1) == (1, 1)
    assert (over_f3.h_d, over_f3.h_d_minus_1) == (0, 0)


def test_cocycle_counts_empty():
    counts = cocycle_counts(Complex(7, 2))
    assert counts.a == comb(7, 2)
    assert counts.alpha == (0, 0, 0)
    assert counts.u == comb(7, 2)
    assert counts.v == 0


def test_cocycle_counts_single_simplex():
    n = 7
    Y = Complex(n, 2, [(1, 3, 5)])
    counts = cocycle_counts(Y)
    assert counts.a == comb(n, 2) - 3
    assert counts.alpha == (1, 0, 0)
    assert counts.u == comb(n, 2) - 1
    assert counts.v == 0
    assert betti(Y, 2).z_d_minus_1 == counts.u


def test_cocycle_counts_sphere():
    counts = cocycle_counts(Complex.boundary(4, 2))
    assert counts.a == 0
    assert counts.alpha == (0, 0, 0)
    assert counts.u == 0
    assert counts.v == -2


def check_invariants(Y, primes=(2, 3, 5)):
    n, d = Y.n, Y.d
    counts = cocycle_counts(Y)
    assert sum(counts.alpha) <= Y.f_d
    collapsible = core(Y).collapsible
    has_boundary = bool(find_boundaries(Y))
    for p in primes:
        summary = betti(Y, p)
        assert summary.h_d >= 0
        assert summary.h_d >= counts.v
        assert summary.h_d >= Y.f_d - comb(n - 1, d)
        assert summary.h_d - summary.h_d_minus_1 == Y.f_d - comb(n - 1, d)
        assert summary.z_d_minus_1 >= counts.u
        if collapsible:
            assert summary.h_d == 0
        if has_boundary:
            assert summary.h_d >= 1
        if Y.f_d <= 60:
            assert summary.rank_d == oracle_rank(boundary_matrix(Y, p))


@pytest.mark.parametrize('c', [1.0, 2.0, 3.0, 4.0])
@pytest.mark.parametrize('t', range(5))
def test_invariants_on_random_complexes(c, t):
    check_invariants(random_complex(25, 2, c, t))


@pytest.mark.parametrize('t', range(10))
def test_invariants_on_small_complexes(t):
    check_invariants(random_complex(9, 2, 3.0, t))


@pytest.mark.slow
def test_invariant_suite():
    for c in (1.0, 2.0, 3.0, 4.0):
        for t in range(125):
            check_invariants(random_complex(25, 2, c, t, master=500))
