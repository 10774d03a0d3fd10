import os
import subprocess
import sys

import numpy as np
import pytest

from conftest import random_dist
from ensemble_bounds import _accel
from ensemble_bounds.canonical import generalist, specialist
from ensemble_bounds.simulate import _chunk_rng, _tables

numba = pytest.importorskip("numba")


def _sorted_points(rng, n, spacing):
    c = np.sort(rng.uniform(0.5, 1.0, size=n))
    # force clusters that must coalesce
    dup = rng.random(n) < 0.3
    c[1:][dup[1:]] = c[:-1][dup[1:]] + spacing
    c = np.sort(np.clip(c, 0.5, 1.0))
    return c, rng.dirichlet(np.ones(n))


@pytest.mark.parametrize("spacing", [0.0, 3e-10, 1e-6])
def test_coalesce_identical(rng, spacing):
    for n in (1, 2, 7, 100, 5000):
        c, w = _sorted_points(rng, n, spacing)
        a = _accel.coalesce_numpy(c, w, 1e-9)
        b = _accel.coalesce_numba(c, w, 1e-9)
        assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])


def test_coalesce_groups(rng):
    c = np.array([0.6, 0.6 + 5e-10, 0.7, 0.8, 0.8])
    w = np.array([0.1, 0.3, 0.2, 0.2, 0.2])
    for fn in (_accel.coalesce_numpy, _accel.coalesce_numba):
        cc, ww = fn(c, w, 1e-9)
        np.testing.assert_allclose(cc, [0.6 + 3.75e-10, 0.7, 0.8], rtol=0, atol=1e-16)
        np.testing.assert_allclose(ww, [0.4, 0.2, 0.4], rtol=0, atol=1e-16)


@pytest.mark.parametrize("mode", ["lcwmv", "cwmv"])
def test_vote_identical(rng, mode):
    for trial in range(5):
        fs = [random_dist(rng, n_max=8, allow_certain=True) for _ in range(int(rng.integers(1, 7)))]
        fs.append(specialist(0.7))
        fs.append(generalist(0.6))
        tables = _tables(fs, mode)
        g = _chunk_rng(trial, 0)
        n = 20_000
        labels = np.where(g.random(n) < 0.5, 1, -1).astype(np.int8)
        u_conf, u_corr = g.random((len(fs), n)), g.random((len(fs), n))
        a = _accel.vote_batch_numpy(u_conf, u_corr, labels, *tables)
        b = _accel.vote_batch_numba(u_conf, u_corr, labels, *tables)
        assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])


def _report(flag):
    code = (
        "from ensemble_bounds import _accel, mc_estimate, specialist, generalist, combine_all\n"
        "r = mc_estimate([specialist(0.7), generalist(0.65), specialist(0.8)], 150000, seed=9)\n"
        "e = combine_all([specialist(0.62), generalist(0.7), specialist(0.9)] * 2).dist\n"
        "print(_accel.USE_NUMBA, r.acc_hat, r.info_hat, e.support.tobytes().hex(), e.weights.tobytes().hex())\n"
    )
    env = dict(os.environ, ENSEMBLE_BOUNDS_NUMBA=flag)
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    return out.stdout.split()


def test_env_flag_switches_path_without_changing_results():
    fast, slow = _report("1"), _report("0")
    assert fast[0] == "True" and slow[0] == "False"
    assert fast[1:] == slow[1:]
