import math

import numpy as np
import pytest

from rcutils.complexlib.complex import Complex, all_simplices, num_simplices
from rcutils.complexlib.sampler import (InvalidParameters, SampleParams, derive_trial_seed,
                                        make_rng, sample_complex, sample_complex_m,
                                        sample_stream)


def test_zero_density_is_empty():
    Y = sample_complex(SampleParams(n=5, d=2, c=0, seed=1))
    assert Y.f_d == 0
    assert Y.n == 5 and Y.d == 2


def test_probability_one_is_full():
    assert sample_complex(SampleParams(n=7, d=2, p=1.0, seed=3)) == Complex.full(7, 2)


def test_sampling_is_deterministic():
    params = SampleParams(n=20, d=2, c=3.0, seed=42)
    assert sample_complex(params) == sample_complex(params)
    assert sample_complex(params) != sample_complex(SampleParams(n=20, d=2, c=3.0, seed=43))


@pytest.mark.parametrize('kwargs', [
    dict(n=10, d=2),
    dict(n=10, d=2, c=1.0, p=0.1),
    dict(n=10, d=2, c=-1.0),
    dict(n=10, d=2, c=30.0),
    dict(n=10, d=2, p=1.5),
    dict(n=10, d=0, c=1.0),
    dict(n=2, d=2, c=1.0),
])
def test_invalid_parameters(kwargs):
    with pytest.raises(InvalidParameters):
        SampleParams(**kwargs)


def test_prob():
    assert SampleParams(n=40, d=2, c=2.0).prob == pytest.approx(0.05)
    assert SampleParams(n=40, d=2, p=0.25).prob == 0.25


def test_mean_number_of_simplices():
    n, d, c, trials = 30, 2, 3.0, 1000
    m = num_simplices(n, d)
    p = c / n
    assert m * p == pytest.approx(406)
    mean = sum(sample_complex(SampleParams(n=n, d=d, c=c, seed=seed)).f_d
               for seed in range(trials)) / trials
    assert abs(mean - m * p) <= 3 * math.sqrt(m * p * (1 - p) / trials)


def test_inclusion_frequency_of_a_fixed_simplex():
    p, trials = 0.3, 2000
    hits = sum((0, 1, 2) in sample_complex(SampleParams(n=12, d=2, p=p, seed=seed))
               for seed in range(trials))
    assert abs(hits / trials - p) <= 3 * math.sqrt(p * (1 - p) / trials)


def test_derive_trial_seed():
    seeds = [derive_trial_seed(2024, t) for t in range(100)]
    assert seeds == [derive_trial_seed(2024, t) for t in range(100)]
    assert len(set(seeds)) == 100
    assert all(0 <= s < 2**64 for s in seeds)
    assert derive_trial_seed(2025, 0) != seeds[0]
    with pytest.raises(InvalidParameters):
        derive_trial_seed(2024, -1)


def test_make_rng_reproducible():
    assert make_rng(5).random() == make_rng(5).random()


def test_stream_is_a_permutation():
    stream = sample_stream(8, 2, seed=11)
    assert len(stream) == num_simplices(8, 2)
    assert sorted(stream.simplex_at(i) for i in range(len(stream))) == list(all_simplices(8, 2))
    assert stream.prefix(0).f_d == 0
    assert stream.prefix(len(stream)) == Complex.full(8, 2)


def test_stream_prefixes_are_nested():
    stream = sample_stream(10, 2, seed=5)
    previous = stream.prefix(0)
    for M in range(1, len(stream) + 1, 13):
        current = stream.prefix(M)
        assert current.f_d == M
        assert previous.issubset(current)
        previous = current


def test_prefix_out_of_range():
    stream = sample_stream(6, 2, seed=0)
    with pytest.raises(InvalidParameters):
        stream.prefix(len(stream) + 1)
    with pytest.raises(InvalidParameters):
        stream.prefix(-1)


def test_sample_complex_m():
    Y = sample_complex_m(9, 2, 17, seed=8)
    assert Y.f_d == 17
    assert Y == sample_stream(9, 2, seed=8).prefix(17)
    with pytest.raises(InvalidParameters):
        sample_complex_m(9, 2, num_simplices(9, 2) + 1, seed=8)


@pytest.mark.slow
def test_trial_seeds_are_distinct_and_balanced():
    count = 10**6
    seeds = np.array([derive_trial_seed(31, t) for t in range(count)], dtype=np.uint64)
    assert np.unique(seeds).size == count
    for bit in range(64):
        frequency = ((seeds >> np.uint64(bit)) & np.uint64(1)).mean()
        assert abs(frequency - 0.5) <= 0.01


def test_stream_first_simplex_is_uniform():
    trials = 10000
    hits = sum(sample_stream(5, 2, seed).simplex_at(0) == (0, 1, 2) for seed in range(trials))
    assert abs(hits / trials - 0.1) <= 3 * math.sqrt(0.1 * 0.9 / trials)
