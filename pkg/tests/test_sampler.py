import math

import numpy as np
import pytest
from scipy import stats

from graphonlab import core, sampler
from graphonlab.errors import TooFewNodes
from graphonlab.io import graph_to_text, parse_graph
from graphonlab.rng import RngSeed


def test_single_block_labels():
    assert np.all(sampler.sample_labels(50, 1, RngSeed(3)) == 0)


def test_label_frequencies():
    n, k = 100_000, 4
    labels = sampler.sample_labels(n, k, RngSeed(11))
    sd = math.sqrt(n * 0.25 * 0.75)
    counts = np.bincount(labels, minlength=k)
    assert np.all(np.abs(counts - n / 4) <= 3 * sd)


def test_labels_deterministic():
    a = sampler.sample_labels(100, 5, RngSeed(1, 2))
    b = sampler.sample_labels(100, 5, RngSeed(1, 2))
    c = sampler.sample_labels(100, 5, RngSeed(1, 3))
    assert np.array_equal(a, b) and not np.array_equal(a, c)


@pytest.mark.parametrize("method", ["dense", "sparse"])
def test_extreme_graphons(method):
    assert sampler.sample_graph(np.zeros((2, 2)), 30, RngSeed(0), method=method).m == 0
    g = sampler.sample_graph(np.ones((3, 3)), 30, RngSeed(0), method=method)
    assert g.m == 30 * 29 // 2


def test_edge_count_binomial():
    n, p = 2000, 0.3
    g = sampler.sample_graph(np.full((1, 1), p), n, RngSeed(5))
    pairs = n * (n - 1) // 2
    assert abs(g.m - p * pairs) <= 4 * math.sqrt(pairs * p * (1 - p))


def test_edges_sorted_and_simple():
    w = core.planted_partition(3, 0.6, 0.2)
    for method in ("dense", "sparse"):
        g = sampler.sample_graph(w, 80, RngSeed(9), method=method)
        e = g.edges
        assert np.all(e[:, 0] < e[:, 1])
        assert len(np.unique(e, axis=0)) == len(e)
        assert np.array_equal(e, e[np.lexsort((e[:, 1], e[:, 0]))])


def test_latents():
    w = core.planted_partition(3, 0.6, 0.2)
    g = sampler.sample_graph(w, 40, RngSeed(2), keep_latents=True)
    assert g.labels is not None and g.h is not None
    assert np.array_equal(g.h, g.h.T)
    np.testing.assert_array_equal(g.h, w.entries[g.labels[:, None], g.labels[None, :]])
    assert sampler.sample_graph(w, 40, RngSeed(2)).labels is None
    # keeping latents does not change the graph
    assert sampler.sample_graph(w, 40, RngSeed(2)) == g


def test_sampling_deterministic():
    w = core.planted_partition(2, 0.02, 0.01)
    a = sampler.sample_graph(w, 500, RngSeed(4, 1))
    b = sampler.sample_graph(w, 500, RngSeed(4, 1))
    assert np.array_equal(a.edges, b.edges)


def test_density_examples():
    assert sampler.empirical_edge_density(sampler.from_edges(5, [])) == 0
    k4 = sampler.from_edges(4, [(i, j) for i in range(4) for j in range(i + 1, 4)])
    assert sampler.empirical_edge_density(k4) == 1
    assert sampler.empirical_edge_density(sampler.from_edges(3, [(0, 2)])) == pytest.approx(1 / 3)
    with pytest.raises(TooFewNodes):
        sampler.empirical_edge_density(sampler.from_edges(1, []))


def test_conditional_independence():
    """Given labels, the indicators of edges {0,1} and {0,2} are independent."""
    w = np.array([[0.7, 0.2], [0.2, 0.5]])
    passes = 0
    for run in range(10):
        table = np.zeros((2, 2))
        t = 0
        while table.sum() < 1500:
            g = sampler.sample_graph(w, 3, RngSeed(run, t), keep_latents=True)
            t += 1
            if tuple(g.labels) != (0, 0, 1):
                continue
            table[int(g.has_edge(0, 1)), int(g.has_edge(0, 2))] += 1
        p = stats.chi2_contingency(table)[1]
        passes += p > 1e-4
    assert passes >= 6


def test_sparse_regime_density():
    n, k = 200, 4
    rho = k * k / n**2
    w = np.full((k, k), rho)
    np.fill_diagonal(w, rho / 2)
    dens = [sampler.empirical_edge_density(sampler.sample_graph(w, n, RngSeed(1, t))) for t in range(100)]
    assert 0.5 <= np.mean(dens) / w.mean() <= 1.5


def test_triu_unrank():
    for m in (2, 3, 10, 101):
        iu, ju = np.triu_indices(m, 1)
        i, j = sampler._triu_unrank(np.arange(len(iu)), m)
        assert np.array_equal(i, iu) and np.array_equal(j, ju)


def test_graph_file_roundtrip():
    g = sampler.sample_graph(core.planted_partition(2, 0.5, 0.1), 25, RngSeed(3))
    text = graph_to_text(g)
    head = text.splitlines()[0].split()
    assert head == [str(g.n), str(g.m)]
    first = text.splitlines()[1].split()
    assert int(first[0]) >= 1
    assert parse_graph(text) == g
