"""Hot inner loops, compiled with numba when available.

Set ``ENSEMBLE_BOUNDS_NUMBA=0`` to force the pure-numpy path. Both paths
perform the same floating-point operations in the same order, so results
are bit-identical; ``tests/test_accel.py`` checks this.
"""

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

USE_NUMBA = numba is not None and os.environ.get("ENSEMBLE_BOUNDS_NUMBA", "1") != "0"


# ---------------------------------------------------------------------------
# support coalescing


def _coalesce_numpy(c, w, tol):
    if c.size == 0:
        return c.copy(), w.copy()
    new_group = np.empty(c.size, dtype=np.bool_)
    new_group[0] = True
    new_group[1:] = np.diff(c) > tol
    gid = np.cumsum(new_group) - 1
    n = int(gid[-1]) + 1
    base = c[new_group][gid]
    mass = np.zeros(n)
    moment = np.zeros(n)
    # sequential accumulation, matches the compiled loop; offsets from the
    # group's first point keep singletons exact
    np.add.at(mass, gid, w)
    np.add.at(moment, gid, w * (c - base))
    return c[new_group] + moment / mass, mass


def _coalesce_loop(c, w, tol):
    n = c.size
    out_c = np.empty(n)
    out_w = np.empty(n)
    if n == 0:
        return out_c, out_w
    g = 0
    base = c[0]
    mass = w[0]
    moment = w[0] * 0.0
    for i in range(1, n):
        if c[i] - c[i - 1] > tol:
            out_c[g] = base + moment / mass
            out_w[g] = mass
            g += 1
            base = c[i]
            mass = 0.0
            moment = 0.0
        mass += w[i]
        moment += w[i] * (c[i] - base)
    out_c[g] = base + moment / mass
    out_w[g] = mass
    return out_c[: g + 1], out_w[: g + 1]


# ---------------------------------------------------------------------------
# Monte Carlo voting


def _vote_numpy(u_conf, u_corr, labels, offsets, cum, supp, weight, certain):
    k, n = u_conf.shape
    score = np.zeros(n)
    forced = np.zeros(n, dtype=np.int8)
    for i in range(k):
        lo, hi = offsets[i], offsets[i + 1]
        idx = np.searchsorted(cum[lo:hi], u_conf[i], side="right")
        idx = np.minimum(idx, hi - lo - 1) + lo
        correct = u_corr[i] < supp[idx]
        pred = np.where(correct, labels, -labels).astype(np.int8)
        score = score + weight[idx] * pred
        hit = certain[idx] & (forced == 0)
        forced[hit] = pred[hit]
    return score, forced


def _vote_loop(u_conf, u_corr, labels, offsets, cum, supp, weight, certain):
    k, n = u_conf.shape
    score = np.zeros(n)
    forced = np.zeros(n, dtype=np.int8)
    for t in range(n):
        s = 0.0
        f = 0
        for i in range(k):
            lo = offsets[i]
            hi = offsets[i + 1]
            # first index with cum > u (searchsorted side="right")
            a = lo
            b = hi
            u = u_conf[i, t]
            while a < b:
                m = (a + b) // 2
                if cum[m] > u:
                    b = m
                else:
                    a = m + 1
            if a > hi - 1:
                a = hi - 1
            p = labels[t] if u_corr[i, t] < supp[a] else -labels[t]
            s = s + weight[a] * p
            if f == 0 and certain[a]:
                f = p
        score[t] = s
        forced[t] = f
    return score, forced


# exposed for the benchmark and the equivalence tests
coalesce_numpy = _coalesce_numpy
vote_batch_numpy = _vote_numpy
if numba is not None:
    coalesce_numba = numba.njit(cache=True, nogil=True)(_coalesce_loop)
    vote_batch_numba = numba.njit(cache=True, nogil=True)(_vote_loop)
else:  # pragma: no cover
    coalesce_numba = None
    vote_batch_numba = None

if USE_NUMBA:
    coalesce = coalesce_numba
    vote_batch = vote_batch_numba
else:
    coalesce = coalesce_numpy
    vote_batch = vote_batch_numpy
