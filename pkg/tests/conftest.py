import itertools

import numpy as np
import pytest


def random_sym(rng, k, low=0.0, high=1.0):
    x = rng.uniform(low, high, size=(k, k))
    return np.triu(x) + np.triu(x, 1).T


def brute_hat2_sq(a, b):
    """Independent loop over joint permutations; returns min squared normalized distance."""
    k = len(a)
    best = np.inf
    for s in itertools.permutations(range(k)):
        tot = 0.0
        for i in range(k):
            for j in range(k):
                tot += (a[s[i]][s[j]] - b[i][j]) ** 2
        best = min(best, tot / k**2)
    return best


def brute_hathat2_sq(a, b):
    k = len(a)
    best = np.inf
    for s in itertools.permutations(range(k)):
        for t in itertools.permutations(range(k)):
            tot = 0.0
            for i in range(k):
                for j in range(k):
                    tot += (a[s[i]][t[j]] - b[i][j]) ** 2
            best = min(best, tot / k**2)
    return best


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


EXAMPLE_A = np.array([[1, 0, 1], [0, 1, 0], [1, 0, 1]], dtype=float)
EXAMPLE_B = np.array([[1, 1, 0], [1, 1, 0], [0, 0, 1]], dtype=float)


ACCEPTANCE_LINES = []


def report(label, ok, detail=""):
    """Record and print one acceptance line, then assert it."""
    line = f"{'PASS' if ok else 'FAIL'}  {label}" + (f"  ({detail})" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
