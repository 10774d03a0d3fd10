"""Tabular data behind the figures, plus CSV/JSON writers and readers."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from . import bounds, canonical
from .dist import ClassifierProfile, information_envelope, iota_from_fraction
from .errors import DomainError, TargetUnreachable
from .simulate import NoiseModel, gaussian_confidence_distribution

FIGURES = ("confidence_example", "classifier_distributions", "bounds_vs_k", "plan_vs_accuracy")
PLAN_LEVELS = (("min", 0.0), ("moderate", 0.5), ("high", 0.9), ("max", 1.0))


@dataclass
class FigureSpec:
    figure_id: str
    pis: list = field(default_factory=lambda: [0.7])
    iotas: list | None = None
    fractions: list | None = None
    k_range: tuple = (1, 15)
    target: float = 0.95
    k_max: int = 50
    sigma: float = 2.1
    accuracy: float = 0.7
    grid_cells: int = 64
    fmt: str = "csv"

    def __post_init__(self):
        if self.figure_id not in FIGURES:
            raise DomainError(f"unknown figure {self.figure_id!r}; choose from {FIGURES}")
        if self.fmt not in ("csv", "json"):
            raise DomainError("format must be csv or json")
        lo, hi = self.k_range
        if not 1 <= lo <= hi:
            raise DomainError(f"bad k range {self.k_range}")
        for pi in self.pis:
            information_envelope(pi)
        if self.iotas is not None and self.fractions is not None:
            raise DomainError("give iotas or fractions, not both")
        if self.iotas is not None:
            for pi in self.pis:
                for iota in self.iotas:
                    ClassifierProfile(pi, iota)
        if self.fractions is not None:
            for lam in self.fractions:
                if not 0.0 <= lam <= 1.0:
                    raise DomainError(f"information fraction {lam} outside [0, 1]")
        if not 0.5 < self.target < 1.0:
            raise DomainError("target must lie in (0.5, 1)")
        if self.sigma <= 0:
            raise DomainError("sigma must be positive")


def _info_levels(spec, pi):
    if spec.iotas is not None:
        return list(spec.iotas)
    if spec.fractions is not None:
        return [iota_from_fraction(pi, lam) for lam in spec.fractions]
    return [None]


def confidence_example(spec: FigureSpec) -> dict:
    model = NoiseModel.from_accuracy(spec.accuracy, spec.sigma)
    xs = np.linspace(-4 * spec.sigma, 4 * spec.sigma, 401)
    curve = [{"x": float(x), "density": float(model.density(x)), "confidence": float(model.confidence(x))} for x in xs]
    f = gaussian_confidence_distribution(model, spec.grid_cells)
    return {
        "rows": curve,
        "model": {"mu": model.mu, "sigma": model.sigma, "accuracy": model.accuracy},
        "distribution": f.to_json(),
    }


def classifier_distributions(spec: FigureSpec) -> dict:
    pi = spec.pis[0]
    iota = spec.iotas[0] if spec.iotas else 0.25
    rows = []
    for name in ("specialist", "generalist", "more", "less"):
        f = canonical.CONSTRUCTIONS[name](pi, iota)
        rows.extend({"classifier": name, "c": c, "w": w} for c, w in f)
    return {"rows": rows, "pi": pi, "iota": iota}


def bounds_vs_k(spec: FigureSpec) -> dict:
    k_lo, k_hi = spec.k_range
    rows = []
    for pi in spec.pis:
        for iota in _info_levels(spec, pi):
            for r in bounds.bounds_vs_k(pi, iota, k_hi):
                if r["k"] < k_lo:
                    continue
                rows.append(
                    {
                        "pi": pi,
                        "iota": "" if iota is None else iota,
                        "k": r["k"],
                        "lower_thm1": r["lower_thm1"],
                        "upper_thm1": r["upper_thm1"],
                        "lower_thm2": r.get("lower_thm2", ""),
                        "upper_thm2": r.get("upper_thm2", ""),
                    }
                )
    return {"rows": rows}


def plan_vs_accuracy(spec: FigureSpec) -> dict:
    """Minimal ensemble size per accuracy at four information levels.

    Unreachable cells (beyond ``k_max``) are left empty.
    """
    pis = spec.pis if len(spec.pis) > 1 else [round(x, 4) for x in np.arange(0.55, 0.951, 0.01)]
    rows = []
    for pi in pis:
        row = {"pi": pi}
        for name, lam in PLAN_LEVELS:
            try:
                row[f"k_min_{name}"] = bounds.min_ensemble_size(pi, fraction=lam, target=spec.target, k_max=spec.k_max).k_min
            except TargetUnreachable:
                row[f"k_min_{name}"] = ""
        rows.append(row)
    return {"rows": rows, "target": spec.target}


GENERATORS = {
    "confidence_example": confidence_example,
    "classifier_distributions": classifier_distributions,
    "bounds_vs_k": bounds_vs_k,
    "plan_vs_accuracy": plan_vs_accuracy,
}


def generate(spec: FigureSpec) -> dict:
    return GENERATORS[spec.figure_id](spec)


# ---------------------------------------------------------------------------
# serialization


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def to_csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = list(rows[0])
    writer.writerow(header)
    for r in rows:
        writer.writerow([_fmt(r.get(h, "")) for h in header])
    return buf.getvalue()


def read_csv(text: str) -> list[dict]:
    """Parse CSV written by :func:`to_csv`; numeric cells become floats, empty cells ``None``."""
    out = []
    for r in csv.DictReader(io.StringIO(text)):
        row = {}
        for key, val in r.items():
            if val == "":
                row[key] = None
            else:
                try:
                    row[key] = float(val)
                except ValueError:
                    row[key] = val
        out.append(row)
    return out


def render(spec: FigureSpec, data: dict) -> str:
    if spec.fmt == "json":
        return json.dumps(data, indent=2) + "\n"
    return to_csv(data["rows"])
