"""Command-line interface.

Exit codes: 0 success, 1 internal error, 2 invalid input, 3 target unreachable.
Results go to stdout as JSON (figures: CSV or JSON); errors go to stderr as
a JSON object ``{"error": <type>, "message": <text>}``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import bounds, canonical, figures
from .dist import ConfidenceDistribution
from .errors import DomainError, EnsembleBoundsError, TargetUnreachable
from .simulate import MODES, mc_estimate

EXIT_OK, EXIT_INTERNAL, EXIT_INVALID, EXIT_UNREACHABLE = 0, 1, 2, 3
SEED_ENV = "ENSEMBLE_BOUNDS_SEED"


class UsageError(EnsembleBoundsError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _emit_error(kind, message, **extra):
    print(json.dumps({"error": kind, "message": message, **extra}), file=sys.stderr)


def _profile(text):
    try:
        pi, iota = (float(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"profile must be 'pi,iota', got {text!r}") from None
    return pi, iota


def _seed(text):
    try:
        return int(text, 0)
    except ValueError:
        raise UsageError(f"seed must be a decimal or 0x-prefixed integer, got {text!r}") from None


def _k_range(text):
    try:
        if ".." in text:
            a, b = text.split("..")
            return int(a), int(b)
        return 1, int(text)
    except ValueError:
        raise UsageError(f"k range must look like 1..15, got {text!r}") from None


def _canonical_member(text):
    """``<name>:<pi>[:<iota>]`` with name in specialist|generalist|more|less."""
    parts = text.split(":")
    name = parts[0]
    if name not in canonical.CONSTRUCTIONS or len(parts) not in (2, 3):
        raise UsageError(f"bad canonical shorthand {text!r}")
    try:
        nums = [float(x) for x in parts[1:]]
    except ValueError:
        raise UsageError(f"bad canonical shorthand {text!r}") from None
    if name in ("more", "less") and len(nums) != 2:
        raise UsageError(f"{name} needs both pi and iota: {text!r}")
    return canonical.CONSTRUCTIONS[name](*nums)


def _load_dist(path):
    try:
        obj = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise DomainError(f"cannot read distribution {path}: {exc}") from exc
    return ConfidenceDistribution.from_json(obj)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ensemble-bounds", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("bounds", help="ensemble accuracy / information bounds")
    b.add_argument("--pi", type=float, action="append", default=[])
    b.add_argument("--profile", type=_profile, action="append", default=[], metavar="PI,IOTA")
    b.add_argument("--iota", type=float, action="append", default=[])
    b.add_argument("--metric", choices=("accuracy", "information"), default="accuracy")
    b.add_argument("--info-only", action="store_true", help="bound ensemble information from --iota values alone")

    pl = sub.add_parser("plan", help="minimal ensemble size for a target accuracy")
    pl.add_argument("--pi", type=float, required=True)
    g = pl.add_mutually_exclusive_group(required=True)
    g.add_argument("--iota", type=float)
    g.add_argument("--info-fraction", type=float)
    pl.add_argument("--target", type=float, default=0.95)
    pl.add_argument("--k-max", type=int, default=50)

    s = sub.add_parser("simulate", help="Monte Carlo voting simulation")
    s.add_argument("--dist", action="append", default=[], metavar="FILE")
    s.add_argument("--canonical", action="append", default=[], metavar="NAME:PI[:IOTA]")
    s.add_argument("--trials", type=int, default=100_000)
    s.add_argument("--seed", type=_seed, default=None)
    s.add_argument("--mode", choices=MODES, default="lcwmv")
    s.add_argument("--workers", type=int, default=1)

    f = sub.add_parser("figure", help="emit the data behind a figure")
    f.add_argument("figure_id", choices=figures.FIGURES)
    f.add_argument("--pi", type=float, action="append", default=None)
    fg = f.add_mutually_exclusive_group()
    fg.add_argument("--iota", type=float, action="append", default=None)
    fg.add_argument("--info-fraction", type=float, action="append", default=None)
    f.add_argument("--k", type=_k_range, default=(1, 15), metavar="LO..HI")
    f.add_argument("--target", type=float, default=0.95)
    f.add_argument("--k-max", type=int, default=50)
    f.add_argument("--sigma", type=float, default=2.1)
    f.add_argument("--accuracy", type=float, default=0.7)
    f.add_argument("--grid-cells", type=int, default=64)
    f.add_argument("--format", choices=("csv", "json"), default="csv")
    f.add_argument("--output", "-o", default=None)
    return p


def cmd_bounds(args):
    if args.info_only:
        if not args.iota:
            raise UsageError("--info-only needs --iota values")
        return bounds.ensemble_info_bounds_info_only(args.iota).to_json()
    if args.pi and args.profile:
        raise UsageError("give --pi or --profile, not both")
    if args.profile:
        fn = bounds.accuracy_bounds_acc_info if args.metric == "accuracy" else bounds.ensemble_info_bounds
        return fn(args.profile).to_json()
    if args.pi:
        fn = bounds.accuracy_bounds_acc if args.metric == "accuracy" else bounds.info_bounds_acc
        return fn(args.pi).to_json()
    raise UsageError("give --pi or --profile")


def cmd_plan(args):
    return bounds.min_ensemble_size(
        args.pi, args.iota, target=args.target, k_max=args.k_max, fraction=args.info_fraction
    ).to_json()


def cmd_simulate(args):
    fs = [_load_dist(p) for p in args.dist] + [_canonical_member(t) for t in args.canonical]
    if not fs:
        raise UsageError("give at least one --dist or --canonical member")
    seed = args.seed
    if seed is None:
        seed = _seed(os.environ.get(SEED_ENV, "0"))
    return mc_estimate(fs, args.trials, seed, args.mode, workers=args.workers).to_json()


def cmd_figure(args):
    spec = figures.FigureSpec(
        figure_id=args.figure_id,
        pis=args.pi or [0.7],
        iotas=args.iota,
        fractions=args.info_fraction,
        k_range=args.k,
        target=args.target,
        k_max=args.k_max,
        sigma=args.sigma,
        accuracy=args.accuracy,
        grid_cells=args.grid_cells,
        fmt=args.format,
    )
    return figures.render(spec, figures.generate(spec))


COMMANDS = {"bounds": cmd_bounds, "plan": cmd_plan, "simulate": cmd_simulate, "figure": cmd_figure}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        out = COMMANDS[args.command](args)
    except TargetUnreachable as exc:
        _emit_error("TargetUnreachable", str(exc), achieved_lower_bound=exc.achieved, k_max=exc.k_max)
        return EXIT_UNREACHABLE
    except EnsembleBoundsError as exc:
        _emit_error(type(exc).__name__, str(exc))
        return EXIT_INVALID
    except Exception as exc:  # noqa: BLE001
        _emit_error("InternalError", f"{type(exc).__name__}: {exc}")
        return EXIT_INTERNAL

    if isinstance(out, str):
        target = getattr(args, "output", None)
        if target:
            Path(target).write_text(out)
        else:
            sys.stdout.write(out)
    else:
        print(json.dumps(out, indent=2))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
