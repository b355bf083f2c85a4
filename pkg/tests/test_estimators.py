import itertools

import numpy as np
import pytest

from graphonlab import core, estimators as est, packing, sampler
from graphonlab.errors import ConfigInvalid, TooFewNodes
from graphonlab.rng import RngSeed


def complete(n):
    return sampler.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def test_trivial_and_density():
    g = complete(6)
    assert est.trivial_estimator(g).matrix.entries.tolist() == [[0.0]]
    assert est.density_estimator(g).matrix.entries.tolist() == [[1.0]]
    assert est.density_estimator(sampler.from_edges(5, [])).matrix.entries.tolist() == [[0.0]]
    with pytest.raises(TooFewNodes):
        est.density_estimator(sampler.from_edges(1, []))


def test_lsq_simple_fits():
    assert est.block_least_squares(complete(7), 1, rng=RngSeed(0)).matrix.entries.tolist() == [[1.0]]
    for k in (1, 2, 3):
        e = est.block_least_squares(sampler.from_edges(9, []), k, rng=RngSeed(0))
        assert np.all(e.matrix.entries == 0)
    with pytest.raises(ConfigInvalid):
        est.block_least_squares(complete(3), 4)


def test_lsq_history_nonincreasing():
    w = core.planted_partition(3, 0.7, 0.1)
    g = sampler.sample_graph(w, 60, RngSeed(5))
    e = est.block_least_squares(g, 3, restarts=3, rng=RngSeed(1))
    h = e.meta["history"]
    assert all(b <= a + 1e-9 for a, b in zip(h, h[1:]))
    assert e.meta["objective"] == pytest.approx(h[-1])


def exhaustive_lsq(adj, k):
    n = adj.shape[0]
    best = np.inf
    for z in itertools.product(range(k), repeat=n):
        z = np.array(z)
        best = min(best, est.lsq_objective(adj, z, est._block_means(adj, z, k)))
    return best


def test_lsq_against_exhaustive_partitions():
    rng = np.random.default_rng(12)
    hits = 0
    for t in range(100):
        n = int(rng.integers(4, 9))
        w = core.planted_partition(2, 0.8, 0.2)
        g = sampler.sample_graph(w, n, RngSeed(99, t))
        adj = g.adjacency().astype(float)
        opt = exhaustive_lsq(adj, 2)
        got = est.block_least_squares(g, 2, restarts=10, rng=RngSeed(98, t)).meta["objective"]
        assert got >= opt - 1e-9
        hits += got <= opt + 1e-9
    assert hits >= 80


def test_oracle_risk_zero():
    w = core.planted_partition(3, 0.5, 0.2)
    r = est.empirical_risk(est.oracle_estimator(w), w, 30, 4, RngSeed(0))
    assert np.all(r.lower == 0) and np.all(r.upper == 0)


def test_trivial_risk_constant_truth():
    rho = 0.3
    w = core.constant(3, rho)
    r = est.empirical_risk(est.trivial_estimator, w, 20, 5, RngSeed(2))
    np.testing.assert_allclose(r.lower, rho, atol=1e-12)
    np.testing.assert_allclose(r.upper, rho, atol=1e-12)


def test_trivial_risk_qb():
    b = packing.random_binary_sym(4, RngSeed(6))
    q = core.q_matrix(b, core.HardInstanceParams(4, 4, 1.0, 0.25))
    r = est.empirical_risk(est.trivial_estimator, q, 16, 3, RngSeed(1))
    np.testing.assert_allclose(r.lower, core.normalized_l2(q), atol=1e-12)


def test_lower_below_upper():
    w = core.planted_partition(4, 0.6, 0.2)
    for name in ("density", "blocklsq"):
        f = est.make_estimator(name, truth=w, k_fit=3)
        r = est.empirical_risk(f, w, 40, 5, RngSeed(4))
        assert np.all(r.lower <= r.upper + 1e-9)


def test_common_refinement_keeps_zero():
    w = core.planted_partition(2, 0.5, 0.1)
    a, b = est.common_refinement(core.blow_up(w, 3), w)
    assert a.shape == b.shape == (6, 6)
    lo, up = est.risk_proxies(core.blow_up(w, 3), w)
    assert lo == pytest.approx(0, abs=1e-12) and up == pytest.approx(0, abs=1e-12)


def test_risk_deterministic():
    w = core.planted_partition(2, 0.5, 0.1)
    f = est.make_estimator("blocklsq", k_fit=2)
    a = est.empirical_risk(f, w, 30, 3, RngSeed(8))
    b = est.empirical_risk(f, w, 30, 3, RngSeed(8))
    assert np.array_equal(a.lower, b.lower) and np.array_equal(a.upper, b.upper)


def test_make_estimator_errors():
    with pytest.raises(ConfigInvalid):
        est.make_estimator("nope")
    with pytest.raises(ConfigInvalid):
        est.make_estimator("oracle")
    with pytest.raises(ConfigInvalid):
        est.make_estimator("blocklsq")
    with pytest.raises(ConfigInvalid):
        est.empirical_risk(est.trivial_estimator, [[0.1]], 5, 0)
