"""Ensemble accuracy and information bounds, and ensemble-size planning."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from . import canonical as cn
from .combine import combine_all, combine_pair
from .dist import (
    ClassifierProfile,
    ConfidenceDistribution,
    accuracy,
    as_profiles,
    information,
    information_envelope,
    inverse_binary_entropy_upper,
    iota_from_fraction,
)
from .errors import DomainError, EmptyEnsemble, TargetUnreachable

WITNESSES = ("generalist", "less_specialized", "more_specialized", "specialist")


@dataclass(frozen=True)
class EnsembleBounds:
    metric: str
    k: int
    lower: float
    upper: float
    lower_witness: str
    upper_witness: str
    outer: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.lower > self.upper + 1e-12:
            raise ValueError(f"lower bound {self.lower} exceeds upper {self.upper}")
        assert self.lower_witness in WITNESSES and self.upper_witness in WITNESSES

    def to_json(self) -> dict:
        witnesses = {"lower": self.lower_witness, "upper": self.upper_witness}
        witnesses.update(self.outer)
        return {
            "metric": self.metric,
            "k": self.k,
            "lower": self.lower,
            "upper": self.upper,
            "witnesses": witnesses,
        }


@dataclass(frozen=True)
class PlanResult:
    k_min: int
    target: float
    achieved_lower_bound: float
    profile: list

    def to_json(self) -> dict:
        return {
            "k_min": self.k_min,
            "target": self.target,
            "achieved_lower_bound": self.achieved_lower_bound,
            "profile": [list(p) for p in self.profile],
        }


def _nonempty(xs):
    xs = list(xs)
    if not xs:
        raise EmptyEnsemble("ensemble needs at least one member")
    return xs


def _fold(dists: Sequence[ConfidenceDistribution]) -> ConfidenceDistribution:
    return combine_all(dists).dist


def _pis(pis):
    out = []
    for pi in _nonempty(pis):
        out.append(cn._check_pi(pi))
    return out


def accuracy_bounds_acc(pis: Sequence[float]) -> EnsembleBounds:
    """Ensemble accuracy range when only member accuracies are known."""
    pis = _pis(pis)
    lo = accuracy(_fold([cn.generalist(p) for p in pis]))
    hi = accuracy(_fold([cn.specialist(p) for p in pis]))
    return EnsembleBounds("accuracy", len(pis), lo, hi, "generalist", "specialist")


def _extremal_ensembles(profiles: list[ClassifierProfile]):
    gen = _fold([cn.generalist(p.accuracy) for p in profiles])
    less = _fold([cn._less_specialized(p.accuracy, p.information) for p in profiles])
    more = _fold([cn._more_specialized(p.accuracy, p.information) for p in profiles])
    spec = _fold([cn.specialist(p.accuracy) for p in profiles])
    return gen, less, more, spec


def accuracy_bounds_acc_info(profiles) -> EnsembleBounds:
    """Ensemble accuracy range when member accuracies and informations are known.

    ``outer`` carries the accuracy-only bounds for comparison.
    """
    profiles = as_profiles(_nonempty(profiles))
    gen, less, more, spec = _extremal_ensembles(profiles)
    return EnsembleBounds(
        "accuracy",
        len(profiles),
        accuracy(less),
        accuracy(more),
        "less_specialized",
        "more_specialized",
        outer={"generalist": accuracy(gen), "specialist": accuracy(spec)},
    )


def individual_info_bounds(pi: float) -> tuple[float, float]:
    return information_envelope(pi)


def ensemble_info_bounds(profiles) -> EnsembleBounds:
    profiles = as_profiles(_nonempty(profiles))
    gen, less, more, spec = _extremal_ensembles(profiles)
    return EnsembleBounds(
        "information",
        len(profiles),
        information(less),
        information(more),
        "less_specialized",
        "more_specialized",
        outer={"generalist": information(gen), "specialist": information(spec)},
    )


def info_matched_accuracies(iotas: Sequence[float]) -> list[float]:
    """Accuracy of the generalist carrying each information value."""
    out = []
    for iota in iotas:
        iota = float(iota)
        if not 0.0 <= iota <= 1.0:
            raise DomainError(f"information must lie in [0, 1], got {iota}")
        out.append(inverse_binary_entropy_upper(1.0 - iota))
    return out


def ensemble_info_bounds_info_only(iotas: Sequence[float]) -> EnsembleBounds:
    """Ensemble information range when only member informations are known."""
    pis = info_matched_accuracies(_nonempty(iotas))
    lo = information(_fold([cn.generalist(p) for p in pis]))
    hi = information(_fold([cn.specialist(p) for p in pis]))
    return EnsembleBounds("information", len(pis), lo, hi, "generalist", "specialist")


# ---------------------------------------------------------------------------
# per-k sequences and planning


def bounds_vs_k(pi: float, iota: float | None, k_max: int) -> list[dict]:
    """Accuracy bounds for homogeneous ensembles of size 1..k_max.

    Folds each witness incrementally, so the cost is one pairwise
    combination per member and witness.
    """
    members = {"lower_thm1": cn.generalist(pi), "upper_thm1": cn.specialist(pi)}
    if iota is not None:
        prof = ClassifierProfile(pi, iota)
        members["lower_thm2"] = cn._less_specialized(prof.accuracy, prof.information)
        members["upper_thm2"] = cn._more_specialized(prof.accuracy, prof.information)
    state = dict(members)
    rows = []
    for k in range(1, k_max + 1):
        if k > 1:
            state = {name: combine_pair(state[name], members[name]) for name in members}
        row = {"k": k}
        row.update({name: accuracy(d) for name, d in state.items()})
        rows.append(row)
    return rows


def min_ensemble_size(
    pi: float,
    iota: float | None = None,
    target: float = 0.95,
    k_max: int = 50,
    *,
    fraction: float | None = None,
) -> PlanResult:
    """Smallest homogeneous ensemble whose guaranteed accuracy reaches ``target``.

    The guarantee is the lower bound from the less specialized ensemble.
    Give either the absolute information ``iota`` or ``fraction`` of the
    admissible range at ``pi``.
    """
    if (iota is None) == (fraction is None):
        raise DomainError("give exactly one of iota or fraction")
    if iota is None:
        iota = iota_from_fraction(pi, fraction)
    prof = ClassifierProfile(pi, iota)
    if not 0.5 < target < 1.0:
        raise DomainError(f"target must lie in (0.5, 1), got {target}")
    if int(k_max) < 1:
        raise DomainError("k_max must be at least 1")

    member = cn._less_specialized(prof.accuracy, prof.information)
    ens = member
    for k in range(1, int(k_max) + 1):
        if k > 1:
            ens = combine_pair(ens, member)
        bound = accuracy(ens)
        if bound >= target:
            return PlanResult(k, target, bound, [(prof.accuracy, prof.information)] * k)
    raise TargetUnreachable(
        f"lower bound {bound:.6f} below target {target} at k_max={k_max}",
        k_max=int(k_max),
        achieved=bound,
    )


def info_bounds_acc(pis: Sequence[float]) -> EnsembleBounds:
    """Ensemble information range when only member accuracies are known."""
    pis = _pis(pis)
    lo = information(_fold([cn.generalist(p) for p in pis]))
    hi = information(_fold([cn.specialist(p) for p in pis]))
    return EnsembleBounds("information", len(pis), lo, hi, "generalist", "specialist")
