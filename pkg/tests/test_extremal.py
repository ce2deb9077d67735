import itertools
import math

import numpy as np
import pytest

from qmagic import InvalidArgument, ResourceLimitError
from qmagic import kernels
from qmagic.cyclegraph import VertexSubset, build_cycle_power, induced_degree_stats, referee_independent_set
from qmagic.extremal import (
    degree_bound,
    search_min_max_degree,
    threshold_size,
    verify_theorem_exhaustive,
    verify_theorem_sampled,
)

BACKENDS = kernels.available_backends()


def brute_min_max(l, n, size):
    """Oracle: itertools enumeration with the numpy degree routine."""
    g = build_cycle_power(l, n)
    return min(
        induced_degree_stats(g, VertexSubset.from_indices(g.num_vertices, c)).summary
        for c in itertools.combinations(range(g.num_vertices), size)
    )


def test_degree_bound_examples():
    assert degree_bound(2, 4) == (2.0, 2)
    real, c = degree_bound(3, 2)
    assert real == pytest.approx(1.259921, abs=1e-6) and c == 2
    for l in range(2, 8):
        assert degree_bound(l, 1) == (1.0, 1)
    assert degree_bound(3, 8) == (2.0, 2)
    assert degree_bound(3, 9)[1] == 3


@pytest.mark.parametrize("backend", BACKENDS)
@pytest.mark.parametrize("l,n,count", [(2, 2, 4), (3, 2, 36), (2, 3, 56)])
def test_exhaustive_small(backend, l, n, count):
    with kernels.use_backend(backend):
        r = verify_theorem_exhaustive(l, n)
    assert r.subsets_checked == count == math.comb(l**n, threshold_size(l, n))
    assert r.theorem_holds and r.min_max_degree >= r.ceil_bound
    assert r.min_max_degree == brute_min_max(l, n, threshold_size(l, n))


@pytest.mark.parametrize("l", [2, 3, 5])
def test_exhaustive_single_cycle(l):
    r = verify_theorem_exhaustive(l, 1)
    assert r.threshold_size == l and r.subsets_checked == 1 and r.min_max_degree == 1


def test_exhaustive_limit():
    with pytest.raises(ResourceLimitError, match="11440"):
        verify_theorem_exhaustive(2, 4, limit=1000)
    with pytest.raises(ResourceLimitError):
        verify_theorem_exhaustive(2, 6)


@pytest.mark.parametrize("backend", BACKENDS)
def test_exhaustive_below_threshold_reports_counterexample(backend, monkeypatch):
    # one vertex below threshold at l = 2 a parity class is independent
    import qmagic.extremal as ex

    monkeypatch.setattr(ex, "threshold_size", lambda l, n: 2 ** (n - 1))
    with kernels.use_backend(backend):
        r = ex.verify_theorem_exhaustive(2, 3)
    assert r.min_max_degree == 0 and not r.theorem_holds
    cx = VertexSubset.from_indices(8, r.counterexample)
    assert induced_degree_stats(build_cycle_power(2, 3), cx).summary < r.ceil_bound
    # oracle: first 4-subset in increasing-mask order whose induced max degree is below 2
    g = build_cycle_power(2, 3)
    combos = sorted(itertools.combinations(range(8), 4), key=lambda c: sum(1 << v for v in c))
    first = next(c for c in combos if induced_degree_stats(g, VertexSubset.from_indices(8, c)).summary < 2)
    assert r.counterexample == list(first)


def test_sampled_rejects_zero():
    with pytest.raises(InvalidArgument):
        verify_theorem_sampled(3, 2, 0, 1)


def test_sampled_deterministic_and_thread_invariant():
    reps = [verify_theorem_sampled(3, 3, 3000, 11, threads=t).to_dict() for t in (1, 2, 8)]
    assert reps[0] == reps[1] == reps[2]
    assert reps[0]["theorem_holds"]


def test_sampled_subsets_have_threshold_size():
    from qmagic.extremal import _sample_block

    m = _sample_block(5, 0, 200, 27, 19)
    assert (m.sum(axis=1) == 19).all()
    # every vertex shows up: crude uniformity check
    freq = m.mean(axis=0)
    assert np.all(np.abs(freq - 19 / 27) < 0.15)


@pytest.mark.parametrize("backend", BACKENDS)
def test_sampled_backends_agree(backend):
    with kernels.use_backend(backend):
        r = verify_theorem_sampled(2, 4, 2500, 3)
    with kernels.use_backend("numpy"):
        ref = verify_theorem_sampled(2, 4, 2500, 3)
    assert r.to_dict() == ref.to_dict()


@pytest.mark.parametrize("backend", BACKENDS)
def test_search_examples(backend):
    with kernels.use_backend(backend):
        size = referee_independent_set(5, 2).size
        assert search_min_max_degree(5, 2, size, 100, 0, init="referee").best_max_degree == 0
        assert search_min_max_degree(3, 2, 9, 50, 0).best_max_degree == 2
        assert search_min_max_degree(2, 3, 4, 500, 0).best_max_degree == 0


@pytest.mark.parametrize("seed", range(8))
def test_search_finds_parity_class(seed):
    r = search_min_max_degree(2, 3, 4, 500, seed)
    assert r.best_max_degree == 0
    digit_sums = {bin(v).count("1") % 2 for v in r.best_subset.indices()}
    assert len(digit_sums) == 1


def test_search_certificate_and_size(rng):
    for seed in range(5):
        r = search_min_max_degree(3, 3, 19, 300, seed)
        g = build_cycle_power(3, 3)
        assert r.best_subset.size == 19
        assert induced_degree_stats(g, r.best_subset).summary == r.best_max_degree
        assert r.best_max_degree >= 2  # the theorem at threshold size


def test_search_maxdeg_rule_runs():
    r = search_min_max_degree(2, 3, 4, 200, 0, accept="maxdeg")
    assert r.accept == "maxdeg" and r.best_max_degree in (0, 1)


@pytest.mark.parametrize("backend", BACKENDS)
def test_search_backends_agree(backend):
    with kernels.use_backend(backend):
        a = search_min_max_degree(3, 3, 12, 400, 5).to_dict()
        b = search_min_max_degree(4, 2, 10, 400, 5, accept="maxdeg", init="referee").to_dict()
    with kernels.use_backend("numpy"):
        assert a == search_min_max_degree(3, 3, 12, 400, 5).to_dict()
        assert b == search_min_max_degree(4, 2, 10, 400, 5, accept="maxdeg", init="referee").to_dict()


def test_search_bad_args():
    with pytest.raises(InvalidArgument):
        search_min_max_degree(2, 3, 0, 10, 0)
    with pytest.raises(InvalidArgument):
        search_min_max_degree(2, 3, 9, 10, 0)
    with pytest.raises(InvalidArgument):
        search_min_max_degree(2, 3, 4, 10, 0, init="greedy")
    with pytest.raises(InvalidArgument):
        search_min_max_degree(2, 3, 4, 10, 0, accept="anneal")


def test_referee_init_truncates_and_pads():
    r = search_min_max_degree(4, 2, 3, 0, 1, init="referee")
    assert r.best_subset.size == 3 and r.best_max_degree == 0
    r = search_min_max_degree(4, 2, 12, 0, 1, init="referee")
    assert r.best_subset.size == 12
