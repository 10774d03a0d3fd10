"""Discrete confidence distributions and their scalar functionals.

A confidence distribution is a finite set of local confidences in
[0.5, 1] with probability masses. Accuracy is its mean; information (in
bits) is the mean of ``1 - H2(c)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy import optimize, special

from . import _accel
from .errors import (
    ConfidenceOutOfRange,
    DomainError,
    EmptySupport,
    InfeasibleProfile,
    MassExceedsAvailable,
    MassNotNormalized,
    PointNotInSupport,
)

COALESCE_TOL = 1e-9
INPUT_MASS_TOL = 1e-6
PROFILE_TOL = 1e-9

_LN2 = np.log(2.0)


def _frozen(a):
    a = np.ascontiguousarray(a, dtype=np.float64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class ConfidenceDistribution:
    """Finite distribution of local confidences.

    Build instances with :func:`make_distribution`; the constructor assumes
    its arrays are already canonical (sorted, coalesced, normalized).
    """

    support: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "support", _frozen(self.support))
        object.__setattr__(self, "weights", _frozen(self.weights))

    def __len__(self):
        return self.support.size

    def __iter__(self):
        return iter(zip(self.support.tolist(), self.weights.tolist()))

    def __repr__(self):
        body = ", ".join(f"{w:.6g}@{c:.6g}" for c, w in self)
        return f"ConfidenceDistribution({body})"

    @property
    def accuracy(self) -> float:
        return accuracy(self)

    @property
    def information(self) -> float:
        return information(self)

    def mass_at(self, c: float, tol: float = COALESCE_TOL) -> float:
        i = _locate(self, c, tol)
        return 0.0 if i is None else float(self.weights[i])

    def allclose(self, other: ConfidenceDistribution, atol: float = 1e-12) -> bool:
        return (
            len(self) == len(other)
            and np.allclose(self.support, other.support, rtol=0, atol=atol)
            and np.allclose(self.weights, other.weights, rtol=0, atol=atol)
        )

    def to_json(self) -> dict:
        return {"points": [{"c": c, "w": w} for c, w in self]}

    @classmethod
    def from_json(cls, obj: dict) -> ConfidenceDistribution:
        try:
            pts = [(float(p["c"]), float(p["w"])) for p in obj["points"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"malformed distribution JSON: {exc}") from exc
        return make_distribution(pts)


def canonical(c, w, *, tol: float = COALESCE_TOL) -> ConfidenceDistribution:
    """Sort, coalesce, drop zero masses and renormalize raw arrays.

    No range validation: callers inside the package guarantee it. Values
    pushed marginally outside [0.5, 1] by rounding are clipped.
    """
    c = np.clip(np.asarray(c, dtype=np.float64).ravel(), 0.5, 1.0)
    w = np.asarray(w, dtype=np.float64).ravel()
    keep = w > 0
    c, w = c[keep], w[keep]
    if c.size == 0:
        raise EmptySupport("distribution has no positive mass")
    order = np.lexsort((w, c))
    c, w = _accel.coalesce(c[order], w[order], tol)
    return ConfidenceDistribution(np.clip(c, 0.5, 1.0), w / w.sum())


def make_distribution(points: Iterable[tuple[float, float]]) -> ConfidenceDistribution:
    """Validated construction from ``(confidence, mass)`` pairs."""
    pts = list(points)
    if not pts:
        raise EmptySupport("no points given")
    arr = np.asarray(pts, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise DomainError("points must be (confidence, mass) pairs")
    c, w = arr[:, 0], arr[:, 1]
    if not np.all(np.isfinite(arr)):
        raise DomainError("non-finite confidence or mass")
    if np.any((c < 0.5) | (c > 1.0)):
        raise ConfidenceOutOfRange(f"confidences must lie in [0.5, 1], got {c.tolist()}")
    if np.any(w < 0):
        raise MassNotNormalized("masses must be non-negative")
    total = w.sum()
    if abs(total - 1.0) > INPUT_MASS_TOL:
        raise MassNotNormalized(f"masses sum to {total!r}, expected 1")
    return canonical(c, w)


def point_mass(c: float) -> ConfidenceDistribution:
    return make_distribution([(c, 1.0)])


# ---------------------------------------------------------------------------
# entropy


def binary_entropy(c):
    """Binary entropy in bits; ``H2(0) = H2(1) = 0``. Accepts arrays."""
    arr = np.asarray(c, dtype=np.float64)
    if np.any((arr < 0) | (arr > 1)) or np.any(np.isnan(arr)):
        raise DomainError("binary entropy is defined on [0, 1]")
    h = (special.entr(arr) + special.entr(1.0 - arr)) / _LN2
    return float(h) if h.ndim == 0 else h


def one_minus_entropy(c):
    return 1.0 - binary_entropy(c)


def inverse_binary_entropy_upper(h: float) -> float:
    """The unique ``c`` in [0.5, 1] with ``H2(c) = h``."""
    h = float(h)
    if not 0.0 <= h <= 1.0:
        raise DomainError(f"entropy must lie in [0, 1], got {h}")
    if h == 1.0:
        return 0.5
    if h == 0.0:
        return 1.0
    return optimize.bisect(lambda c: binary_entropy(c) - h, 0.5, 1.0, xtol=1e-12, maxiter=200)


# ---------------------------------------------------------------------------
# functionals


def accuracy(f: ConfidenceDistribution) -> float:
    return float(np.dot(f.weights, f.support))


def information(f: ConfidenceDistribution) -> float:
    return float(np.dot(f.weights, 1.0 - binary_entropy(f.support)))


@dataclass(frozen=True)
class ScoringFunction:
    """A map from confidences to reals whose expectation scores a distribution."""

    fn: Callable[[np.ndarray], np.ndarray]
    convex: bool = False
    name: str = "phi"

    def __call__(self, c):
        return self.fn(np.asarray(c, dtype=np.float64))

    def check_convexity(self, n: int = 10_000, seed: int = 0, tol: float = 1e-12) -> bool:
        """Sampled Jensen test on [0.5, 1]."""
        rng = np.random.default_rng(seed)
        a, b = rng.uniform(0.5, 1.0, size=(2, n))
        t = rng.uniform(size=n)
        lhs = self(t * a + (1 - t) * b)
        rhs = t * self(a) + (1 - t) * self(b)
        return bool(np.all(lhs <= rhs + tol))


IDENTITY = ScoringFunction(lambda c: c, convex=True, name="identity")
INFORMATION = ScoringFunction(lambda c: 1.0 - binary_entropy(c), convex=True, name="information")
CONSTANT_ONE = ScoringFunction(lambda c: np.ones_like(c), convex=True, name="one")


def score(f: ConfidenceDistribution, phi: ScoringFunction | Callable) -> float:
    return float(np.dot(f.weights, np.asarray(phi(f.support), dtype=np.float64)))


# ---------------------------------------------------------------------------
# refinement


def _locate(f: ConfidenceDistribution, c: float, tol: float = COALESCE_TOL):
    i = int(np.searchsorted(f.support, c))
    for j in (i - 1, i):
        if 0 <= j < len(f) and abs(f.support[j] - c) <= tol:
            return j
    return None


def merge_step(f: ConfidenceDistribution, c1: float, c2: float, eps1: float, eps2: float) -> ConfidenceDistribution:
    """Move masses ``eps1`` from ``c1`` and ``eps2`` from ``c2`` to their mean.

    The result is coarser than ``f``: same accuracy, no larger convex score.
    """
    i1, i2 = _locate(f, c1), _locate(f, c2)
    if i1 is None or i2 is None:
        raise PointNotInSupport(f"{c1} or {c2} not in support")
    if eps1 < 0 or eps2 < 0:
        raise MassExceedsAvailable("merged masses must be non-negative")
    w = f.weights.copy()
    if i1 == i2:
        if eps1 + eps2 > w[i1] + 1e-12:
            raise MassExceedsAvailable("requested mass exceeds point mass")
        return f
    if eps1 > w[i1] + 1e-12 or eps2 > w[i2] + 1e-12:
        raise MassExceedsAvailable("requested mass exceeds point mass")
    moved = eps1 + eps2
    if moved == 0:
        return f
    center = (eps1 * f.support[i1] + eps2 * f.support[i2]) / moved
    w[i1] = max(w[i1] - eps1, 0.0)
    w[i2] = max(w[i2] - eps2, 0.0)
    return canonical(np.append(f.support, center), np.append(w, moved))


@dataclass(frozen=True, eq=False)
class SymmetricDistribution:
    """Distribution on [0, 1] symmetric about 0.5 (confidence of a fixed label)."""

    support: np.ndarray
    weights: np.ndarray

    def __iter__(self):
        return iter(zip(self.support.tolist(), self.weights.tolist()))


def redistribute(f: ConfidenceDistribution) -> SymmetricDistribution:
    """Split every mass off 0.5 evenly between ``c`` and ``1 - c``."""
    off = f.support > 0.5
    c = np.concatenate([1.0 - f.support[off][::-1], f.support[~off], f.support[off]])
    w = np.concatenate([f.weights[off][::-1] / 2, f.weights[~off], f.weights[off] / 2])
    return SymmetricDistribution(_frozen(c), _frozen(w))


def collapse(s: SymmetricDistribution) -> ConfidenceDistribution:
    """Inverse of :func:`redistribute`: fold mass at ``c < 0.5`` onto ``1 - c``."""
    c = np.where(s.support < 0.5, 1.0 - s.support, s.support)
    return canonical(c, s.weights)


# ---------------------------------------------------------------------------
# (accuracy, information) summaries


def information_envelope(pi: float) -> tuple[float, float]:
    """Admissible information range at accuracy ``pi``: (generalist, specialist)."""
    pi = float(pi)
    if not 0.5 <= pi <= 1.0:
        raise ConfidenceOutOfRange(f"accuracy must lie in [0.5, 1], got {pi}")
    return 1.0 - binary_entropy(pi), 2.0 * (pi - 0.5)


def iota_from_fraction(pi: float, fraction: float) -> float:
    if not 0.0 <= fraction <= 1.0:
        raise DomainError(f"information fraction must lie in [0, 1], got {fraction}")
    lo, hi = information_envelope(pi)
    return lo + fraction * (hi - lo)


@dataclass(frozen=True)
class ClassifierProfile:
    """Accuracy and information (bits) of a classifier.

    Values within ``PROFILE_TOL`` outside the envelope are clamped onto it.
    """

    accuracy: float
    information: float

    def __post_init__(self):
        lo, hi = information_envelope(self.accuracy)
        iota = float(self.information)
        if not (lo - PROFILE_TOL <= iota <= hi + PROFILE_TOL):
            raise InfeasibleProfile(
                f"information {iota} outside [{lo}, {hi}] admissible at accuracy {self.accuracy}"
            )
        object.__setattr__(self, "accuracy", float(self.accuracy))
        object.__setattr__(self, "information", min(max(iota, lo), hi))

    @classmethod
    def of(cls, f: ConfidenceDistribution) -> ClassifierProfile:
        return cls(accuracy(f), information(f))

    @property
    def fraction(self) -> float:
        lo, hi = information_envelope(self.accuracy)
        return 0.0 if hi - lo <= 0 else (self.information - lo) / (hi - lo)


def as_profile(p) -> ClassifierProfile:
    if isinstance(p, ClassifierProfile):
        return p
    pi, iota = p
    return ClassifierProfile(pi, iota)


def as_profiles(ps: Sequence) -> list[ClassifierProfile]:
    return [as_profile(p) for p in ps]
