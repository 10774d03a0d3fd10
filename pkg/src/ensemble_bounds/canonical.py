"""Extremal classifiers at a given accuracy, or accuracy and information.

Specialists (mass on 0.5 and 1) and generalists (a point mass at the
accuracy) bracket every classifier with that accuracy. When the information
is known too, the more specialized (three points: 0.5, pi, 1) and less
specialized (two points straddling pi) classifiers give a tighter bracket.

The more refined / less refined classifiers are the intermediate
constructions relating an arbitrary ``f`` to those two.
"""

from __future__ import annotations

import math
import warnings
from functools import lru_cache
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import optimize

from .dist import (
    ClassifierProfile,
    ConfidenceDistribution,
    accuracy,
    binary_entropy,
    canonical,
)
from .errors import ConfidenceOutOfRange, DegenerateAccuracy

# points within this distance of the accuracy count as "at" the accuracy
SPLIT_TOL = 1e-12
GAIN_GRID = 200
GAIN_TOL = 1e-9


def _check_pi(pi):
    pi = float(pi)
    if not 0.5 <= pi <= 1.0:
        raise ConfidenceOutOfRange(f"accuracy must lie in [0.5, 1], got {pi}")
    return pi


def _h(c):
    return 1.0 - binary_entropy(c)


def specialist(pi: float) -> ConfidenceDistribution:
    pi = _check_pi(pi)
    return canonical([0.5, 1.0], [2.0 * (1.0 - pi), 2.0 * (pi - 0.5)])


def generalist(pi: float) -> ConfidenceDistribution:
    pi = _check_pi(pi)
    return canonical([pi], [1.0])


def _degenerate(pi):
    return pi <= 0.5 or pi >= 1.0


# ---------------------------------------------------------------------------
# left / right conditional splits


@dataclass(frozen=True)
class ConditionalSplit:
    """Split of ``f`` at its accuracy: left is ``C < pi``, right is ``C >= pi``.

    Fields of an empty side are ``None``.
    """

    pi: float
    p_left: float
    p_right: float
    pi_left: Optional[float]
    pi_right: Optional[float]
    iota_left: Optional[float]
    iota_right: Optional[float]

    @property
    def spread(self) -> float:
        """``p_right * (pi_right - pi)``, equal to ``p_left * (pi - pi_left)``."""
        if self.pi_right is None:
            return 0.0
        return self.p_right * (self.pi_right - self.pi)


def conditional_split(f: ConfidenceDistribution) -> ConditionalSplit:
    pi = accuracy(f)
    left = f.support < pi - SPLIT_TOL
    h = _h(f.support)

    def side(mask):
        p = float(f.weights[mask].sum())
        if p <= 0:
            return 0.0, None, None
        w = f.weights[mask] / p
        return p, float(w @ f.support[mask]), float(w @ h[mask])

    pl, al, il = side(left)
    pr, ar, ir = side(~left)
    return ConditionalSplit(pi, pl, pr, al, ar, il, ir)


def _three_point(pi, spread):
    """Distribution on {0.5, pi, 1} with accuracy ``pi`` and given spread."""
    w05 = spread / (pi - 0.5)
    w1 = spread / (1.0 - pi)
    return canonical([0.5, pi, 1.0], [w05, max(1.0 - w05 - w1, 0.0), w1])


def _three_point_information(pi, spread):
    h_pi = _h(pi)
    return h_pi + spread * ((1.0 - h_pi) / (1.0 - pi) - h_pi / (pi - 0.5))


def more_refined(f: ConfidenceDistribution) -> ConfidenceDistribution:
    """Split the left half onto {0.5, pi} and the right half onto {pi, 1}."""
    split = conditional_split(f)
    if _degenerate(split.pi):
        warnings.warn("accuracy at 0.5 or 1; returning f unchanged", DegenerateAccuracy, stacklevel=2)
        return f
    return _three_point(split.pi, split.spread)


def less_refined(f: ConfidenceDistribution) -> ConfidenceDistribution:
    """Merge each half into a point mass at its conditional accuracy."""
    split = conditional_split(f)
    if split.pi_left is None:
        return f
    return canonical([split.pi_left, split.pi_right], [split.p_left, split.p_right])


# ---------------------------------------------------------------------------
# information-gain constant


def _two_point_information(pi, lo, hi):
    """Information of the two-point law on {lo, hi} with mean ``pi``."""
    p_lo = (hi - pi) / (hi - lo)
    return p_lo * _h(lo) + (1.0 - p_lo) * _h(hi)


def _spread(pi, lo, hi):
    return (hi - pi) * (pi - lo) / (hi - lo)


def _right_end(pi, iota, lo):
    """Largest ``hi`` in [pi, 1] whose two-point law with ``lo`` stays at or below ``iota``.

    Two-point information grows with ``hi`` at fixed ``lo``. Vectorized over ``lo``.
    """
    lo = np.asarray(lo, dtype=np.float64)
    a = np.full_like(lo, pi)
    b = np.ones_like(lo)
    top = _two_point_information(pi, lo, b)
    done = top <= iota
    for _ in range(64):
        m = 0.5 * (a + b)
        below = _two_point_information(pi, lo, m) <= iota
        a = np.where(below, m, a)
        b = np.where(below, b, m)
    return np.where(done, 1.0, a)


def _h_scalar(c):
    if c >= 1.0:
        return 1.0
    return 1.0 + c * math.log2(c) + (1.0 - c) * math.log2(1.0 - c)


def _right_end_scalar(pi, iota, lo):
    def excess(hi):
        p_lo = (hi - pi) / (hi - lo)
        return p_lo * _h_scalar(lo) + (1.0 - p_lo) * _h_scalar(hi) - iota

    if excess(1.0) <= 0:
        return 1.0
    if excess(pi) >= 0:
        return pi
    return optimize.brentq(excess, pi, 1.0, xtol=1e-15, rtol=4 * np.finfo(float).eps)


def _max_spread(pi, iota):
    """Largest spread over splits whose merged halves stay within information ``iota``.

    The left half has mean ``lo`` in [0.5, pi); for each ``lo`` the best right
    mean is the boundary value from :func:`_right_end`. Grid search over
    ``lo`` followed by bounded scalar refinement around the best cell.
    """
    lo = 0.5 + (pi - 0.5) * np.arange(GAIN_GRID) / GAIN_GRID
    hi = _right_end(pi, iota, lo)
    d = _spread(pi, lo, hi)
    i = int(np.argmax(d))
    a = lo[max(i - 1, 0)]
    b = lo[i + 1] if i + 1 < GAIN_GRID else pi
    if b - a <= 0:
        return float(d[i])

    def neg(x):
        return -_spread(pi, x, _right_end_scalar(pi, iota, x))

    res = optimize.minimize_scalar(neg, bounds=(a, b), method="bounded", options={"xatol": 1e-12})
    return max(float(d[i]), -res.fun)


def max_info_gain(pi: float, iota: float) -> float:
    """Largest information gain of the more refined classifier over any ``f``
    with accuracy ``pi`` and information ``iota``."""
    prof = ClassifierProfile(pi, iota)
    return _gain(prof.accuracy, prof.information)


@lru_cache(maxsize=4096)
def _gain(pi, iota):
    if _degenerate(pi):
        return 0.0
    ceiling = 2.0 * (pi - 0.5)
    if iota >= ceiling - GAIN_TOL or iota <= _h(pi) + GAIN_TOL:
        return 0.0
    gain = _three_point_information(pi, _max_spread(pi, iota)) - iota
    return float(min(max(gain, 0.0), ceiling - iota))


# ---------------------------------------------------------------------------
# more / less specialized


def more_specialized(pi: float, iota: float, *, gain: float | None = None) -> ConfidenceDistribution:
    """Mixture of specialist and generalist at accuracy ``pi`` with information ``iota + g``."""
    prof = ClassifierProfile(pi, iota)
    pi, iota = prof.accuracy, prof.information
    if _degenerate(pi):
        warnings.warn("accuracy at 0.5 or 1; returning a point mass", DegenerateAccuracy, stacklevel=2)
        return generalist(pi)
    return _more_specialized(pi, iota, gain)


def _more_specialized(pi, iota, gain=None):
    if _degenerate(pi):
        return generalist(pi)
    g = max_info_gain(pi, iota) if gain is None else gain
    h_pi = _h(pi)
    denom = 2.0 * pi - 2.0 + binary_entropy(pi)
    excess = iota + g - h_pi
    if excess <= GAIN_TOL:
        return generalist(pi)
    w05 = 2.0 * (1.0 - pi) * excess / denom
    wpi = (2.0 * pi - 1.0 - (iota + g)) / denom
    w1 = 2.0 * (pi - 0.5) * excess / denom
    w = np.clip([w05, wpi, w1], 0.0, None)
    return canonical([0.5, pi, 1.0], w)


def less_specialized_points(pi: float, iota: float) -> tuple[float, float]:
    """Support points ``(c_l, c_r)`` of the less specialized classifier."""
    pi, iota = float(pi), float(iota)
    H = binary_entropy(pi)
    num_l = 2 * (pi - 0.5) * (pi - iota) - (1 - pi) * (1 - H)
    den_l = 2 * (pi - 0.5) * (1 - iota) - 2 * (1 - pi) * (1 - H)
    num_r = 2 * (pi - 0.5) * (pi - 1 + H) - (1 - pi) * iota
    den_r = 2 * (pi - 0.5) * H - 2 * (1 - pi) * iota
    cl = num_l / den_l if abs(den_l) >= 1e-12 else pi
    cr = num_r / den_r if abs(den_r) >= 1e-12 else pi
    return float(min(max(cl, 0.5), pi)), float(min(max(cr, pi), 1.0))


def less_specialized(pi: float, iota: float) -> ConfidenceDistribution:
    """Two-point classifier at the innermost admissible conditional accuracies."""
    prof = ClassifierProfile(pi, iota)
    pi, iota = prof.accuracy, prof.information
    if _degenerate(pi):
        warnings.warn("accuracy at 0.5 or 1; returning a point mass", DegenerateAccuracy, stacklevel=2)
        return generalist(pi)
    return _less_specialized(pi, iota)


def _less_specialized(pi, iota):
    if _degenerate(pi):
        return generalist(pi)
    cl, cr = less_specialized_points(pi, iota)
    if cr - cl < 1e-12:
        return generalist(pi)
    return canonical([cl, cr], [(cr - pi) / (cr - cl), (pi - cl) / (cr - cl)])


CONSTRUCTIONS = {
    "specialist": lambda pi, iota=None: specialist(pi),
    "generalist": lambda pi, iota=None: generalist(pi),
    "more": more_specialized,
    "less": less_specialized,
}
