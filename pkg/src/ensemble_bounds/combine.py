"""Combination of independent calibrated classifiers under local-confidence voting.

Combining two members enumerates, for every pair of support points, the
two observable outcomes: the members agree, or they disagree and the more
confident one wins. Each outcome's ensemble confidence is the posterior
probability that the ensemble prediction is correct.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .dist import (
    COALESCE_TOL,
    ConfidenceDistribution,
    accuracy,
    canonical,
    information,
    redistribute,
)
from .errors import EmptyEnsemble

QUANTIZE_CELLS = 4096


def combine_pair(f1: ConfidenceDistribution, f2: ConfidenceDistribution) -> ConfidenceDistribution:
    c1 = f1.support[:, None]
    c2 = f2.support[None, :]
    w = f1.weights[:, None] * f2.weights[None, :]

    agree = c1 * c2
    agree_wrong = (1.0 - c1) * (1.0 - c2)
    p_agree = agree + agree_wrong
    a = c1 * (1.0 - c2)
    b = (1.0 - c1) * c2
    p_disagree = a + b

    with np.errstate(invalid="ignore", divide="ignore"):
        ce_agree = agree / p_agree
        ce_disagree = np.maximum(a, b) / p_disagree
    # both members certain: disagreement is impossible, 0/0 above
    ce_disagree = np.where(p_disagree > 0, ce_disagree, 1.0)

    c = np.concatenate([ce_agree.ravel(), ce_disagree.ravel()])
    m = np.concatenate([(w * p_agree).ravel(), (w * p_disagree).ravel()])
    return canonical(c, m)


def combine_pair_reference(f1: ConfidenceDistribution, f2: ConfidenceDistribution) -> ConfidenceDistribution:
    """Slow route through the redistributed (label-conditional) distributions.

    For every achievable ensemble confidence ``ce`` in [0.5, 1), sums over
    the first member's redistributed support the mass of the second member
    at ``g(ce, c1*)``, the posterior it must report to yield ``ce``. Mass at
    ``ce = 1`` is the probability that at least one member is certain.
    """
    s1, s2 = redistribute(f1), redistribute(f2)
    inner1 = (s1.support > 0) & (s1.support < 1)
    inner2 = (s2.support > 0) & (s2.support < 1)
    c1s, w1s = s1.support[inner1], s1.weights[inner1]
    c2s, w2s = s2.support[inner2], s2.weights[inner2]

    targets = {}
    for a in c1s:
        for b in c2s:
            ce = 1.0 / (1.0 + np.exp(-(_logit(a) + _logit(b))))
            ce = max(ce, 1.0 - ce)
            if ce < 1.0:
                targets.setdefault(round(ce, 11), ce)

    out_c, out_w = [], []
    for ce in targets.values():
        total = 0.0
        for a, wa in zip(c1s, w1s):
            j = _find(c2s, _g(ce, a))
            if j is None:
                continue
            total += wa * w2s[j] * 2.0 * a * (1.0 - a) / (a + ce - 2.0 * a * ce)
        out_c.append(ce)
        out_w.append(total if abs(ce - 0.5) <= COALESCE_TOL else 2.0 * total)

    p1, p2 = f1.mass_at(1.0), f2.mass_at(1.0)
    out_c.append(1.0)
    out_w.append(p1 + p2 - p1 * p2)
    return canonical(out_c, out_w)


def _logit(c):
    return np.log(c) - np.log1p(-c)


def _g(ce, c1):
    return ce * (1.0 - c1) / (-2.0 * c1 * ce + c1 + ce)


def _find(support, c, tol=1e-9):
    i = int(np.searchsorted(support, c))
    for j in (i - 1, i):
        if 0 <= j < support.size and abs(support[j] - c) <= tol:
            return j
    return None


@dataclass(frozen=True, eq=False)
class EnsembleDistribution:
    dist: ConfidenceDistribution
    k: int
    provenance: tuple = field(default_factory=tuple)

    @property
    def accuracy(self) -> float:
        return accuracy(self.dist)

    @property
    def information(self) -> float:
        return information(self.dist)


def quantize(f: ConfidenceDistribution, cells: int = QUANTIZE_CELLS) -> ConfidenceDistribution:
    """Snap support onto a uniform grid on [0.5, 1], preserving mass and mean.

    Each point's mass is split between its two neighbouring grid nodes with
    linear weights. Approximate: this is a local refinement, so convex
    scores such as information can only grow, by at most O(1/cells**2).
    """
    grid = np.linspace(0.5, 1.0, cells + 1)
    pos = (f.support - 0.5) * (2 * cells)
    lo = np.clip(np.floor(pos).astype(np.int64), 0, cells - 1)
    frac = pos - lo
    w = np.zeros(cells + 1)
    np.add.at(w, lo, f.weights * (1.0 - frac))
    np.add.at(w, lo + 1, f.weights * frac)
    return canonical(grid, w)


def combine_all(fs: Sequence[ConfidenceDistribution], *, quantize_above: int | None = None) -> EnsembleDistribution:
    """Left fold of :func:`combine_pair`.

    ``quantize_above`` switches on grid quantization once more than that many
    members have been folded in; off by default.
    """
    fs = list(fs)
    if not fs:
        raise EmptyEnsemble("ensemble needs at least one member")
    acc = fs[0]
    for i, f in enumerate(fs[1:], start=2):
        acc = combine_pair(acc, f)
        if quantize_above is not None and i > quantize_above:
            acc = quantize(acc)
    prov = tuple((accuracy(f), len(f)) for f in fs)
    return EnsembleDistribution(acc, len(fs), prov)


def ensemble_accuracy(fs: Sequence[ConfidenceDistribution]) -> float:
    return accuracy(combine_all(fs).dist)


def ensemble_information(fs: Sequence[ConfidenceDistribution]) -> float:
    return information(combine_all(fs).dist)


def pair_accuracy_oracle(f1: ConfidenceDistribution, f2: ConfidenceDistribution) -> float:
    """Two-member ensemble accuracy as ``sum w1 w2 max(c1, c2)``."""
    return float(f1.weights @ np.maximum(f1.support[:, None], f2.support[None, :]) @ f2.weights)
