import math

import numpy as np
import pytest
from scipy import integrate, stats

from conftest import random_dist
from oracles import posterior_confidence
from ensemble_bounds import errors
from ensemble_bounds.canonical import generalist, specialist
from ensemble_bounds.combine import combine_all
from ensemble_bounds.dist import accuracy, information
from ensemble_bounds.simulate import (
    CHUNK,
    NoiseModel,
    SimReport,
    cwmv_vote,
    gaussian_confidence_distribution,
    lcwmv_vote,
    mc_estimate,
    simulate_votes,
)


class TestVotes:
    def test_weighted(self):
        pred, ce = lcwmv_vote([(1, 0.9), (-1, 0.6)])
        assert pred == 1
        assert ce == pytest.approx(0.9 * 0.4 / (0.9 * 0.4 + 0.1 * 0.6), abs=1e-14)
        assert ce == pytest.approx(0.8571, abs=1e-4)

    def test_certain_member_forces(self):
        assert lcwmv_vote([(1, 1.0), (-1, 0.99)]) == (1, 1.0)

    def test_tie_uses_coin(self):
        seen = set()
        for s in range(20):
            pred, ce = lcwmv_vote([(1, 0.7), (-1, 0.7)], np.random.default_rng(s))
            assert ce == 0.5
            seen.add(pred)
        assert seen == {1, -1}

    def test_certain_members_disagree(self):
        with pytest.raises(errors.DomainError):
            lcwmv_vote([(1, 1.0), (-1, 1.0)])

    @pytest.mark.parametrize("pairs", [[(0, 0.7)], [(1, 0.4)], [(1, 1.1)]])
    def test_bad_votes(self, pairs):
        with pytest.raises(errors.DomainError):
            lcwmv_vote(pairs)

    def test_empty(self):
        with pytest.raises(errors.EmptyEnsemble):
            lcwmv_vote([])

    def test_cwmv_two_against_one(self):
        pred, ce = cwmv_vote([1, 1, -1], [0.7] * 3)
        assert pred == 1
        assert ce == pytest.approx(posterior_confidence([1, 1, -1], [0.7] * 3), abs=1e-14)
        assert ce == pytest.approx(0.7, abs=1e-14)

    def test_cwmv_two_agreeing(self):
        _, ce = cwmv_vote([1, 1], [0.7, 0.7])
        assert ce == pytest.approx(0.49 / 0.58, abs=1e-14)

    def test_cwmv_unanimity_grows(self):
        ces = [cwmv_vote([1] * k, [0.7] * k)[1] for k in range(1, 6)]
        assert all(b > a for a, b in zip(ces, ces[1:]))

    def test_cwmv_certain(self):
        assert cwmv_vote([1], [1.0]) == (1, 1.0)

    def test_cwmv_length_mismatch(self):
        with pytest.raises(errors.DomainError):
            cwmv_vote([1, 1], [0.7])

    def test_matches_bayes(self, rng):
        for _ in range(200):
            k = int(rng.integers(1, 6))
            preds = rng.choice([-1, 1], size=k).tolist()
            confs = rng.uniform(0.5, 0.99, size=k).tolist()
            pred, ce = lcwmv_vote(list(zip(preds, confs)), rng)
            assert ce == pytest.approx(posterior_confidence(preds, confs), abs=1e-12)


class TestMonteCarlo:
    def test_generalists(self):
        r = mc_estimate([generalist(0.7)] * 3, 1_000_000, seed=42)
        assert abs(r.acc_hat - 0.784) <= 4 * r.std_err

    def test_specialists(self):
        r = mc_estimate([specialist(0.7)] * 3, 1_000_000, seed=42)
        assert abs(r.acc_hat - 0.892) <= 4 * r.std_err

    def test_modes_agree_on_generalists(self):
        a = simulate_votes([generalist(0.7)] * 3, 200_000, seed=7, mode="lcwmv")
        b = simulate_votes([generalist(0.7)] * 3, 200_000, seed=7, mode="cwmv")
        assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])

    def test_lcwmv_beats_cwmv(self):
        fs = [specialist(0.7)] * 3
        loc = mc_estimate(fs, 1_000_000, seed=3, mode="lcwmv")
        glob = mc_estimate(fs, 1_000_000, seed=3, mode="cwmv")
        assert loc.acc_hat >= glob.acc_hat
        assert abs(glob.acc_hat - 0.784) <= 4 * glob.std_err

    def test_random_members_lcwmv_not_worse(self, rng):
        for _ in range(5):
            fs = [random_dist(rng, n_max=4) for _ in range(3)]
            loc = mc_estimate(fs, 200_000, seed=11, mode="lcwmv")
            glob = mc_estimate(fs, 200_000, seed=11, mode="cwmv")
            assert loc.acc_hat >= glob.acc_hat - 4 * loc.std_err

    def test_information_estimate(self):
        fs = [specialist(0.7), generalist(0.8), specialist(0.6)]
        r = mc_estimate(fs, 1_000_000, seed=5)
        assert r.info_hat == pytest.approx(combine_all(fs).information, abs=3e-3)

    def test_determinism_across_workers(self):
        fs = [specialist(0.7), generalist(0.65), random_dist(np.random.default_rng(1))]
        n = 3 * CHUNK + 123
        ref = mc_estimate(fs, n, seed=0xBEEF, workers=1)
        for w in (2, 4):
            assert mc_estimate(fs, n, seed=0xBEEF, workers=w) == ref
        assert mc_estimate(fs, n, seed=0xBEEF + 1) != ref

    def test_report(self):
        r = mc_estimate([generalist(0.7)], 1000, seed=1)
        assert isinstance(r, SimReport)
        assert r.std_err == pytest.approx(math.sqrt(r.acc_hat * (1 - r.acc_hat) / 1000))
        assert set(r.to_json()) == {"trials", "acc_hat", "info_hat", "std_err", "seed", "mode"}

    @pytest.mark.parametrize("kw", [dict(trials=0), dict(mode="vote")])
    def test_bad_input(self, kw):
        args = dict(trials=10, seed=0, mode="lcwmv") | kw
        with pytest.raises(errors.DomainError):
            mc_estimate([generalist(0.7)], **args)
        with pytest.raises(errors.EmptyEnsemble):
            mc_estimate([], 10, 0)

    def test_calibration_chi2(self):
        rng = np.random.default_rng(99)
        fs = [random_dist(rng, n_max=6) for _ in range(4)]
        correct, conf = simulate_votes(fs, 1_000_000, seed=2024)
        edges = np.quantile(conf, np.linspace(0, 1, 21))
        idx = np.clip(np.searchsorted(edges, conf, side="right") - 1, 0, 19)
        stat, dof = 0.0, 0
        for b in range(20):
            m = idx == b
            var = float(np.sum(conf[m] * (1 - conf[m])))
            if var <= 0:
                continue
            stat += (float(np.count_nonzero(correct[m])) - float(conf[m].sum())) ** 2 / var
            dof += 1
        assert dof >= 10
        assert stats.chi2.sf(stat, dof) > 1e-3


class TestGaussian:
    def test_from_accuracy(self):
        m = NoiseModel.from_accuracy(0.7, 2.1)
        assert m.mu / m.sigma == pytest.approx(0.5244, abs=1e-4)
        assert m.accuracy == pytest.approx(0.7, abs=1e-12)

    def test_confidence_at_point_eight(self):
        m = NoiseModel.from_accuracy(0.7, 2.1)
        assert float(m.confidence(0.8)) == pytest.approx(0.599, abs=1e-3)
        assert float(NoiseModel(1.0, 2.1).confidence(0.8)) == pytest.approx(0.590, abs=1e-3)

    def test_confidence_is_posterior(self):
        m = NoiseModel(0.9, 1.7)
        for x in (-2.0, -0.3, 0.0, 0.4, 3.1):
            p = stats.norm.pdf(x, m.mu, m.sigma)
            q = stats.norm.pdf(x, -m.mu, m.sigma)
            assert float(m.confidence(x)) == pytest.approx(max(p, q) / (p + q), abs=1e-12)

    def test_density_and_abs_cdf(self):
        m = NoiseModel(1.1, 2.1)
        total, _ = integrate.quad(m.density, -np.inf, np.inf)
        assert total == pytest.approx(1.0, abs=1e-9)
        half, _ = integrate.quad(m.density, -1.5, 1.5)
        assert float(m.abs_cdf(1.5)) == pytest.approx(half, abs=1e-9)

    def test_discretized_accuracy(self):
        f = gaussian_confidence_distribution(NoiseModel.from_accuracy(0.7, 2.1), 64)
        assert accuracy(f) == pytest.approx(0.7, abs=1e-3)

    def test_converges(self):
        m = NoiseModel.from_accuracy(0.7, 2.1)
        f = gaussian_confidence_distribution(m, 4096)
        assert accuracy(f) == pytest.approx(m.accuracy, abs=1e-4)

        def integrand(x):
            c = float(m.confidence(x))
            if c >= 1.0:
                return 2 * m.density(x)
            return 2 * m.density(x) * (1 + c * math.log2(c) + (1 - c) * math.log2(1 - c))

        exact, _ = integrate.quad(integrand, 0, 60 * m.sigma, limit=200)
        assert information(f) == pytest.approx(exact, abs=1e-4)
        assert information(f) <= exact + 1e-12

    def test_pure_noise(self):
        f = gaussian_confidence_distribution(NoiseModel(1.0, 1e6), 64)
        assert f.support.max() - 0.5 < 1e-5

    def test_ensemble_of_three(self):
        f = gaussian_confidence_distribution(NoiseModel.from_accuracy(0.7, 2.1), 64)
        acc = combine_all([f] * 3).accuracy
        assert acc == pytest.approx(0.82, abs=0.01)
        assert 0.784 < acc < 0.892

    @pytest.mark.parametrize("kw", [dict(mu=1.0, sigma=0.0), dict(mu=-1.0, sigma=1.0), dict(mu=1.0, sigma=float("inf"))])
    def test_bad_model(self, kw):
        with pytest.raises(errors.DomainError):
            NoiseModel(**kw)

    def test_bad_cells(self):
        with pytest.raises(errors.DomainError):
            gaussian_confidence_distribution(NoiseModel(1.0, 2.0), 8)
