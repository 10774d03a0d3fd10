"""Compare the numba and pure-numpy kernels.

    python3 benchmarks/bench_kernels.py [--trials N] [--repeat R]

Times support coalescing and batched voting on both paths, checks that the
outputs are bit-identical, and reports the speedup.
"""

import argparse
import time

import numpy as np

from ensemble_bounds import _accel
from ensemble_bounds.canonical import generalist, less_specialized, more_specialized, specialist
from ensemble_bounds.simulate import NoiseModel, _chunk_rng, _tables, gaussian_confidence_distribution


def best_of(fn, repeat):
    fn()  # warm-up, includes JIT compilation
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def coalesce_case(n, seed=0):
    rng = np.random.default_rng(seed)
    # many near-duplicates, as produced by repeated pairwise combination
    c = np.sort(np.round(rng.uniform(0.5, 1.0, n), 7) + rng.uniform(0, 5e-10, n))
    return c, rng.dirichlet(np.ones(n))


def vote_case(trials, seed=0):
    fs = [
        gaussian_confidence_distribution(NoiseModel.from_accuracy(0.7, 2.1), 256),
        specialist(0.7),
        generalist(0.65),
        more_specialized(0.7, 0.3),
        less_specialized(0.75, 0.3),
    ]
    tables = _tables(fs, "lcwmv")
    rng = _chunk_rng(seed, 0)
    labels = np.where(rng.random(trials) < 0.5, 1, -1).astype(np.int8)
    return rng.random((len(fs), trials)), rng.random((len(fs), trials)), labels, tables


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=1_000_000)
    ap.add_argument("--points", type=int, default=2_000_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    if _accel.coalesce_numba is None:
        raise SystemExit("numba is not installed; only the numpy path is available")

    c, w = coalesce_case(args.points)
    u_conf, u_corr, labels, tables = vote_case(args.trials)
    cases = {
        f"coalesce ({args.points:,} points)": (
            lambda: _accel.coalesce_numpy(c, w, 1e-9),
            lambda: _accel.coalesce_numba(c, w, 1e-9),
        ),
        f"vote_batch ({args.trials:,} trials x 5 members)": (
            lambda: _accel.vote_batch_numpy(u_conf, u_corr, labels, *tables),
            lambda: _accel.vote_batch_numba(u_conf, u_corr, labels, *tables),
        ),
    }
    print(f"{'kernel':<44} {'numpy [ms]':>11} {'numba [ms]':>11} {'speedup':>8}  identical")
    for name, (slow, fast) in cases.items():
        t_np, out_np = best_of(slow, args.repeat)
        t_nb, out_nb = best_of(fast, args.repeat)
        same = all(np.array_equal(a, b) for a, b in zip(out_np, out_nb))
        print(f"{name:<44} {t_np * 1e3:11.2f} {t_nb * 1e3:11.2f} {t_np / t_nb:7.1f}x  {same}")


if __name__ == "__main__":
    main()
