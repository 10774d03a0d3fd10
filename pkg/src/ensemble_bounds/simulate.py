"""Seeded Monte Carlo voting and the Gaussian-noise worked example.

Each trial draws a label uniformly, a local confidence for every member
from its distribution, and a prediction that is correct with probability
equal to that confidence. Votes are combined with log-odds weights, taken
from the local confidences (``lcwmv``) or from the members' overall
accuracies (``cwmv``).

Random numbers come in fixed-size chunks; chunk ``j`` uses a Philox stream
keyed by ``(seed, j)``, so results do not depend on how chunks are spread
over workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np
from scipy import special

from . import _accel
from .dist import ConfidenceDistribution, accuracy, binary_entropy, canonical
from .errors import ConfidenceOutOfRange, DomainError, EmptyEnsemble

CHUNK = 1 << 16
MODES = ("lcwmv", "cwmv")


def _logit(c):
    c = np.asarray(c, dtype=np.float64)
    with np.errstate(divide="ignore"):
        return np.log(c) - np.log1p(-c)


# ---------------------------------------------------------------------------
# single votes


def _resolve(score, certain_preds, rng):
    if certain_preds:
        if len(set(certain_preds)) > 1:
            raise DomainError("two certain members disagree")
        return certain_preds[0], 1.0
    if score == 0:
        rng = np.random.default_rng() if rng is None else rng
        return (1 if rng.random() < 0.5 else -1), 0.5
    return (1 if score > 0 else -1), float(special.expit(abs(score)))


def _check_pred(p):
    if p not in (1, -1):
        raise DomainError(f"predictions must be +1 or -1, got {p!r}")
    return int(p)


def lcwmv_vote(pairs: Sequence[tuple[int, float]], rng: np.random.Generator | None = None) -> tuple[int, float]:
    """Combine ``(prediction, local confidence)`` pairs.

    A member with confidence 1 decides alone. A zero score is broken by a
    coin from ``rng``.
    """
    if not pairs:
        raise EmptyEnsemble("no votes")
    score = 0.0
    certain = []
    for pred, c in pairs:
        pred = _check_pred(pred)
        if not 0.5 <= c <= 1.0:
            raise ConfidenceOutOfRange(f"confidence {c} outside [0.5, 1]")
        if c == 1.0:
            certain.append(pred)
        else:
            score += float(_logit(c)) * pred
    return _resolve(score, certain, rng)


def cwmv_vote(preds: Sequence[int], pis: Sequence[float], rng: np.random.Generator | None = None) -> tuple[int, float]:
    """Combine predictions with weights from the members' overall accuracies."""
    if len(preds) != len(pis):
        raise DomainError("preds and pis differ in length")
    return lcwmv_vote(list(zip(preds, pis)), rng)


# ---------------------------------------------------------------------------
# Monte Carlo


@dataclass(frozen=True)
class SimReport:
    trials: int
    acc_hat: float
    info_hat: float
    std_err: float
    seed: int
    mode: str

    def to_json(self) -> dict:
        return asdict(self)


def _tables(fs, mode):
    offsets = [0]
    cum, supp, weight, certain = [], [], [], []
    for f in fs:
        c = f.support
        cum.append(np.cumsum(f.weights))
        supp.append(c)
        if mode == "lcwmv":
            cert = c >= 1.0
            w = _logit(np.where(cert, 0.5, c))
        else:
            pi = accuracy(f)
            cert = np.full(c.size, pi >= 1.0)
            w = np.full(c.size, 0.0 if pi >= 1.0 else float(_logit(pi)))
        weight.append(w)
        certain.append(cert)
        offsets.append(offsets[-1] + c.size)
    return (
        np.asarray(offsets, dtype=np.int64),
        np.concatenate(cum),
        np.concatenate(supp),
        np.concatenate(weight),
        np.concatenate(certain),
    )


def _chunk_rng(seed, j):
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy=seed, spawn_key=(j,))))


def _run_chunk(tables, k, seed, j, n):
    rng = _chunk_rng(seed, j)
    labels = np.where(rng.random(n) < 0.5, 1, -1).astype(np.int8)
    u_conf = rng.random((k, n))
    u_corr = rng.random((k, n))
    coin = rng.random(n)
    score, forced = _accel.vote_batch(u_conf, u_corr, labels, *tables)
    pred = np.where(score > 0, 1, -1).astype(np.int8)
    tie = score == 0
    pred[tie] = np.where(coin[tie] < 0.5, 1, -1)
    has_forced = forced != 0
    pred[has_forced] = forced[has_forced]
    conf = np.where(has_forced, 1.0, special.expit(np.abs(score)))
    return pred == labels, conf


def _validate(fs, trials, mode):
    fs = list(fs)
    if not fs:
        raise EmptyEnsemble("ensemble needs at least one member")
    if mode not in MODES:
        raise DomainError(f"mode must be one of {MODES}, got {mode!r}")
    if int(trials) < 1:
        raise DomainError("trials must be at least 1")
    return fs, int(trials)


def _chunks(trials):
    return [(j, min(CHUNK, trials - j * CHUNK)) for j in range((trials + CHUNK - 1) // CHUNK)]


def simulate_votes(fs: Sequence[ConfidenceDistribution], trials: int, seed: int, mode: str = "lcwmv", workers: int = 1):
    """Per-trial ``(correct, ensemble_confidence)`` arrays."""
    fs, trials = _validate(fs, trials, mode)
    tables = _tables(fs, mode)
    work = _chunks(trials)

    def run(job):
        return _run_chunk(tables, len(fs), seed, *job)

    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            parts = list(ex.map(run, work))
    else:
        parts = [run(job) for job in work]
    return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])


def mc_estimate(
    fs: Sequence[ConfidenceDistribution],
    trials: int,
    seed: int,
    mode: str = "lcwmv",
    workers: int = 1,
) -> SimReport:
    """Monte Carlo estimate of ensemble accuracy and information.

    Information is estimated as the mean of ``1 - H2(C_e)`` over trials.
    """
    correct, conf = simulate_votes(fs, trials, seed, mode, workers)
    n = correct.size
    hits = int(np.count_nonzero(correct))
    info_parts = [float(np.sum(1.0 - binary_entropy(conf[a : a + CHUNK]))) for a in range(0, n, CHUNK)]
    acc = hits / n
    return SimReport(
        trials=n,
        acc_hat=acc,
        info_hat=math.fsum(info_parts) / n,
        std_err=math.sqrt(acc * (1.0 - acc) / n),
        seed=int(seed),
        mode=mode,
    )


# ---------------------------------------------------------------------------
# Gaussian noise example


@dataclass(frozen=True)
class NoiseModel:
    """Observation ``X ~ N(y * mu, sigma^2)`` for label ``y`` in {-1, +1}.

    The induced classifier predicts ``sign(X)`` with confidence equal to the
    posterior of that prediction.
    """

    mu: float
    sigma: float

    def __post_init__(self):
        if not self.sigma > 0 or not np.isfinite(self.sigma):
            raise DomainError("sigma must be positive and finite")
        if not self.mu >= 0 or not np.isfinite(self.mu):
            raise DomainError("mu must be non-negative and finite")

    @classmethod
    def from_accuracy(cls, accuracy: float, sigma: float) -> NoiseModel:
        """Place the class means so that ``sign(X)`` is right with probability ``accuracy``."""
        if not 0.5 <= accuracy < 1.0:
            raise DomainError("accuracy must lie in [0.5, 1)")
        return cls(float(sigma * special.ndtri(accuracy)), float(sigma))

    @property
    def accuracy(self) -> float:
        return float(special.ndtr(self.mu / self.sigma))

    def confidence(self, x):
        return special.expit(2.0 * self.mu * np.abs(x) / self.sigma**2)

    def density(self, x):
        """Mixture density of ``X`` under equal priors."""
        z = np.asarray(x, dtype=np.float64)
        return 0.5 * (np.exp(-0.5 * ((z - self.mu) / self.sigma) ** 2) + np.exp(-0.5 * ((z + self.mu) / self.sigma) ** 2)) / (
            self.sigma * math.sqrt(2 * math.pi)
        )

    def abs_cdf(self, x):
        """CDF of ``|X|``."""
        x = np.asarray(x, dtype=np.float64)
        return special.ndtr((x - self.mu) / self.sigma) + special.ndtr((x + self.mu) / self.sigma) - 1.0


def _abs_quantiles(model, q):
    a = np.zeros_like(q)
    b = np.full_like(q, model.mu + 40.0 * model.sigma)
    for _ in range(128):
        m = 0.5 * (a + b)
        low = model.abs_cdf(m) < q
        a = np.where(low, m, a)
        b = np.where(low, b, m)
    return 0.5 * (a + b)


def gaussian_confidence_distribution(model: NoiseModel, grid_cells: int = 256) -> ConfidenceDistribution:
    """Discretize the classifier induced by ``model`` into equal-mass cells of ``|X|``.

    Each cell's confidence is the exact conditional mean of ``C`` over the
    cell, so the discretization keeps the overall accuracy.
    """
    if int(grid_cells) < 16:
        raise DomainError("grid_cells must be at least 16")
    cells = int(grid_cells)
    inner = _abs_quantiles(model, np.arange(1, cells) / cells)
    edges = np.concatenate([[0.0], inner, [np.inf]])
    mass = np.diff(model.abs_cdf(edges))
    # C(x) p(|x|) equals the density of X given the predicted class was right
    hit = np.diff(special.ndtr((edges - model.mu) / model.sigma))
    with np.errstate(invalid="ignore", divide="ignore"):
        c = np.where(mass > 0, hit / mass, 0.5)
    return canonical(c, mass)
