import numpy as np
import pytest

from ensemble_bounds.dist import canonical


def random_dist(rng, n_max=6, lo=0.5, hi=1.0, allow_certain=False):
    """Random discrete confidence distribution with 1..n_max support points."""
    n = int(rng.integers(1, n_max + 1))
    c = rng.uniform(lo, hi, size=n)
    if allow_certain and rng.random() < 0.2:
        c[0] = 1.0
    w = rng.dirichlet(np.ones(n))
    return canonical(c, w)


def random_ensemble(rng, k_max=5, **kw):
    k = int(rng.integers(1, k_max + 1))
    return [random_dist(rng, **kw) for _ in range(k)]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
