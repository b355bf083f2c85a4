import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from graphonlab import core, infotheory as it, sampler
from graphonlab.errors import (
    DegenerateParameters,
    HypothesisViolated,
    InfiniteDivergence,
    PackingTooSmall,
    TooLargeToEnumerate,
)
from graphonlab.rng import RngSeed

from conftest import random_sym

BERNOULLI_KL = 0.5 * math.log(0.5 / 0.75) + 0.5 * math.log(0.5 / 0.25)


def test_single_node():
    d = it.exact_graph_distribution([[0.4]], 1)
    assert d.probs.tolist() == [1.0]


def test_single_pair():
    d = it.exact_graph_distribution([[0.3]], 2)
    assert d.prob([]) == pytest.approx(0.7)
    assert d.prob([(0, 1)]) == pytest.approx(0.3)


def test_distribution_against_brute_force():
    rng = np.random.default_rng(3)
    w = random_sym(rng, 2, 0, 1)
    n = 3
    d = it.exact_graph_distribution(w, n)
    pairs = [(0, 1), (0, 2), (1, 2)]
    for mask in range(8):
        total = 0.0
        for lab in np.ndindex(2, 2, 2):
            p = 1.0
            for e, (i, j) in enumerate(pairs):
                h = w[lab[i], lab[j]]
                p *= h if mask >> e & 1 else 1 - h
            total += p / 8
        assert d.probs[mask] == pytest.approx(total, abs=1e-14)


def test_distribution_matches_monte_carlo():
    rng = np.random.default_rng(8)
    w = random_sym(rng, 2, 0.1, 0.9)
    d = it.exact_graph_distribution(w, 3)
    assert d.probs.sum() == pytest.approx(1, abs=1e-9)
    trials = 20_000
    counts = np.zeros(8)
    index = {p: e for e, p in enumerate(d.pairs)}
    for t in range(trials):
        g = sampler.sample_graph(w, 3, RngSeed(21, t))
        mask = sum(1 << index[(int(i), int(j))] for i, j in g.edges)
        counts[mask] += 1
    sd = np.sqrt(trials * d.probs * (1 - d.probs))
    assert np.all(np.abs(counts - trials * d.probs) <= 4 * sd + 1e-9)


def test_enumeration_guard():
    with pytest.raises(TooLargeToEnumerate):
        it.exact_graph_distribution(np.full((2, 2), 0.5), 6)
    with pytest.raises(TooLargeToEnumerate):
        it.exact_graph_distribution(np.full((20, 20), 0.5), 5)


def test_mixture_collapse():
    for k in (2, 3, 4):
        a = it.exact_graph_distribution(core.planted_partition(k, 0.35, 0.35), 4).probs
        b = it.exact_graph_distribution([[0.35]], 4).probs
        np.testing.assert_allclose(a, b, atol=1e-10)


def test_exact_kl_closed_form():
    assert it.exact_kl([[0.5]], [[0.75]], 2) == pytest.approx(BERNOULLI_KL, abs=1e-12)
    assert BERNOULLI_KL == pytest.approx(0.143841, abs=1e-6)


def test_exact_kl_identity():
    w = core.planted_partition(3, 0.6, 0.2)
    assert it.exact_kl(w, w, 4) == 0


def test_exact_kl_infinite():
    with pytest.raises(InfiniteDivergence):
        it.exact_kl([[0.5]], [[0.0]], 2)
    assert it.exact_kl([[0.5]], [[0.0]], 2, lenient=True) == math.inf
    # zero mass on the left is harmless
    assert np.isfinite(it.exact_kl([[0.0]], [[0.5]], 2))


def test_kl_nonnegative_and_separates():
    rng = np.random.default_rng(4)
    for _ in range(20):
        w, wp = random_sym(rng, 2, 0.1, 0.9), random_sym(rng, 2, 0.1, 0.9)
        assert it.exact_kl(w, wp, 3) > 1e-10


def test_kl_upper_bound_examples():
    assert it.kl_upper_bound([[0.6]], [[0.6]], 3) == 0
    assert it.kl_upper_bound([[0.6]], [[0.7]], 2) == pytest.approx(0.32)
    assert it.kl_upper_bound([[0.5]], [[0.75]], 2) == pytest.approx(2.0)
    assert it.exact_kl([[0.5]], [[0.75]], 2) <= 2.0
    with pytest.raises(HypothesisViolated):
        it.kl_upper_bound([[0.4]], [[0.6]], 2)


def test_kl_upper_bound_mixed_block_counts():
    a = np.full((1, 1), 0.6)
    b = np.array([[0.6, 0.7], [0.7, 0.6]])
    assert it.kl_upper_bound(a, b, 3) == pytest.approx(8 * 9 * 0.005)


def test_domination():
    rng = np.random.default_rng(44)
    for t in range(500):
        n = 2 + t % 3
        k = 1 + (t // 3) % 3
        w, wp = random_sym(rng, k, 0.5, 0.75), random_sym(rng, k, 0.5, 0.75)
        assert it.exact_kl(w, wp, n) <= it.kl_upper_bound(w, wp, n) + 1e-12


def test_qfamily_examples():
    assert it.kl_diameter_qfamily(core.HardInstanceParams(100, 10, 0.04, 0.0))["raw"] == 0
    out = it.kl_diameter_qfamily(core.HardInstanceParams(100, 10, 0.04, 0.1))
    assert out["eta"] == pytest.approx(0.5)
    assert out["raw"] == pytest.approx(1.28)


@given(
    n=st.integers(4, 500),
    k=st.integers(2, 20),
    frac=st.floats(0.01, 1.0),
    c=st.floats(0.0, 0.5),
)
def test_qfamily_raw_below_simplified(n, k, frac, c):
    rho = min(1.0, frac * k * k / (n * n))
    out = it.kl_diameter_qfamily(core.HardInstanceParams(n, k, rho, c))
    assert out["raw"] <= out["simplified"] * (1 + 1e-9) + 1e-12


def test_fano_examples():
    assert it.fano_bound(it.FanoInput(0.0, math.e)) == pytest.approx(0.0, abs=1e-15)
    assert it.fano_bound(0.0, 2) == pytest.approx(1 - 1 / math.log(2))
    assert it.fano_bound(it.FanoInput(3.0, math.exp(8))) == pytest.approx(0.5)
    with pytest.raises(PackingTooSmall):
        it.fano_bound(0.0, 1)


@given(kl=st.floats(0, 100), dk=st.floats(0.01, 10), m=st.floats(2, 1e6), dm=st.floats(0.01, 1e3))
def test_fano_monotone(kl, dk, m, dm):
    assert it.fano_bound(kl + dk, m) < it.fano_bound(kl, m)
    assert it.fano_bound(kl, m + dm) >= it.fano_bound(kl, m)


def _independent_contiguity(n, k, rho):
    lk = np.log(k)
    eps = float(np.minimum(np.sqrt(rho * k * lk / n), rho))
    q = (k - 1) * n * eps * eps / (2 * k * k * np.log(k - 1))
    p = eps + q
    d = n / k * p + n * (k - 1) / k * q
    lam = (n * p - n * q) / (k * d)
    return eps, q, p, d, lam, (k - 1) * d * lam * lam / 2 <= np.log(k - 1)


def test_contiguity_reference_point():
    r = it.contiguity_report(10_000, 4, 0.01)
    eps, q, p, d, lam, ok = _independent_contiguity(10_000, 4, 0.01)
    for got, want in ((r.epsilon, eps), (r.q, q), (r.p, p), (r.d, d), (r.lam, lam)):
        assert got == pytest.approx(want, rel=1e-12)
    assert r.condition_holds == ok
    assert r.rhs == pytest.approx(math.log(3))


def test_contiguity_tiny_epsilon():
    r = it.contiguity_report(100, 3, 1e-6)
    assert r.epsilon == 1e-6
    assert r.p - r.q == pytest.approx(r.epsilon)
    assert r.separation == pytest.approx(r.epsilon / math.sqrt(3))


def test_contiguity_guards():
    with pytest.raises(DegenerateParameters):
        it.contiguity_report(100, 2, 0.1)
    with pytest.raises(DegenerateParameters):
        it.contiguity_report(100, 3, 0.0)
