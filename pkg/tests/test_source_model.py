import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tunstall_aoi.source_model import (RNG_ALGORITHM, ArrivalSpec, SymbolPmf, ValidationError,
                                       entropy, sample_stream, validate_pmf)


@pytest.mark.parametrize("raw", [[0.5, 0.5], [0.9, 0.1], [0.2, 0.3, 0.5]])
def test_validate_accepts_wellformed(raw):
    assert validate_pmf(raw).probs == tuple(raw)


@pytest.mark.parametrize("raw", [[0.5, 0.5, 0.1], [1.0, 0.0], [1.2, -0.2], [1.0], [], [math.nan, 0.5]])
def test_validate_rejects(raw):
    with pytest.raises(ValidationError):
        validate_pmf(raw)


def test_entropy_values():
    assert entropy(SymbolPmf((0.5, 0.5))) == 1.0
    assert entropy(SymbolPmf((0.25,) * 4)) == 2.0
    # direct evaluation of -sum p log2 p
    oracle = -(0.05 * math.log2(0.05) + 0.95 * math.log2(0.95))
    assert entropy(SymbolPmf((0.05, 0.95))) == pytest.approx(oracle, abs=1e-15)
    assert oracle == pytest.approx(0.2864, abs=1e-4)


@given(st.lists(st.floats(0.01, 1.0), min_size=2, max_size=8))
def test_entropy_range(weights):
    total = math.fsum(weights)
    pmf = SymbolPmf(tuple(w / total for w in weights[:-1]) + (1 - math.fsum(w / total for w in weights[:-1]),))
    h = entropy(pmf)
    assert 0 < h <= math.log2(pmf.size) + 1e-12


def test_arrival_spec_bounds():
    for q in (0.0, 1.0, -0.1, 1.5):
        with pytest.raises(ValidationError):
            ArrivalSpec(q)
    with pytest.raises(ValidationError):
        ArrivalSpec(0.5, seed=-1)


def test_stream_shape_and_arrival_sums():
    s = sample_stream(SymbolPmf((0.3, 0.7)), ArrivalSpec(0.4, 7), 1000)
    assert len(s.symbols) == len(s.arrival_times) == 1000
    assert s.arrival_times.dtype.kind == "i"
    assert np.all(np.diff(s.arrival_times) >= 1) and s.arrival_times[0] >= 1
    np.testing.assert_array_equal(np.cumsum(s.gaps), s.arrival_times)


def test_stream_deterministic():
    args = (SymbolPmf((0.6, 0.3, 0.1)), ArrivalSpec(0.5, 123), 5000)
    a, b = sample_stream(*args), sample_stream(*args)
    assert a.symbols.tobytes() == b.symbols.tobytes()
    assert a.arrival_times.tobytes() == b.arrival_times.tobytes()
    c = sample_stream(args[0], ArrivalSpec(0.5, 124), 5000)
    assert not np.array_equal(a.arrival_times, c.arrival_times)
    assert RNG_ALGORITHM == "numpy.random.PCG64"


def test_gap_mean_small_sample():
    q, n = 0.5, 10**5
    gaps = sample_stream(SymbolPmf((0.5, 0.5)), ArrivalSpec(q, 1), n).gaps
    sigma = math.sqrt((1 - q) / q**2)
    assert abs(gaps.mean() - 1 / q) <= 3 * sigma / math.sqrt(n)


@pytest.mark.parametrize("q", [0.1, 0.5, 0.9])
def test_geometric_sampler_moments(q):
    n = 10**6
    gaps = sample_stream(SymbolPmf((0.5, 0.5)), ArrivalSpec(q, 99), n).gaps
    mean, var = 1 / q, (1 - q) / q**2
    assert gaps.min() >= 1
    assert abs(gaps.mean() - mean) <= 4 * math.sqrt(var / n)
    assert abs(gaps.var() - var) <= 0.05 * var


def test_symbol_frequencies():
    s = sample_stream(SymbolPmf((0.5, 0.5)), ArrivalSpec(0.5, 3), 10**5)
    assert abs(np.mean(s.symbols == 1) - 0.5) <= 0.01
    s = sample_stream(SymbolPmf((0.2, 0.5, 0.3)), ArrivalSpec(0.5, 3), 10**5)
    freq = np.bincount(s.symbols, minlength=3) / 10**5
    np.testing.assert_allclose(freq, [0.2, 0.5, 0.3], atol=0.01)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**64 - 1), st.floats(0.05, 0.95))
def test_any_seed_reproducible(seed, q):
    args = (SymbolPmf((0.5, 0.5)), ArrivalSpec(q, seed), 200)
    a, b = sample_stream(*args), sample_stream(*args)
    assert np.array_equal(a.arrival_times, b.arrival_times)
    assert np.array_equal(a.symbols, b.symbols)
