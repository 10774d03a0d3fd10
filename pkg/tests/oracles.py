"""Independent brute-force oracles shared by the test modules."""

import itertools
import math

import numpy as np

from ensemble_bounds.dist import canonical


def posterior_confidence(preds, confs):
    """Max posterior P(Y | votes) by Bayes' rule over Y in {-1, +1}, uniform prior."""
    like = {}
    for y in (1, -1):
        p = 1.0
        for o, c in zip(preds, confs):
            p *= c if o == y else 1.0 - c
        like[y] = p
    z = like[1] + like[-1]
    if z == 0:
        return None
    return max(like[1], like[-1]) / z


def ensemble_by_enumeration(fs):
    """Ensemble confidence distribution by enumerating every (support, correctness) outcome.

    The label is fixed to +1 by symmetry.
    """
    cs, ws = [], []
    supports = [list(f) for f in fs]
    for choice in itertools.product(*supports):
        base = math.prod(w for _, w in choice)
        confs = [c for c, _ in choice]
        for correct in itertools.product((True, False), repeat=len(fs)):
            p = base
            for ok, c in zip(correct, confs):
                p *= c if ok else 1.0 - c
            if p == 0:
                continue
            preds = [1 if ok else -1 for ok in correct]
            ce = posterior_confidence(preds, confs)
            cs.append(ce)
            ws.append(p)
    return canonical(np.array(cs), np.array(ws))


def accuracy_by_enumeration(fs):
    """Probability the posterior-argmax vote is right; ties count one half."""
    acc = 0.0
    supports = [list(f) for f in fs]
    for choice in itertools.product(*supports):
        base = math.prod(w for _, w in choice)
        confs = [c for c, _ in choice]
        for correct in itertools.product((True, False), repeat=len(fs)):
            p = base
            for ok, c in zip(correct, confs):
                p *= c if ok else 1.0 - c
            if p == 0:
                continue
            score = sum((1 if ok else -1) * math.log(c / (1 - c)) if c < 1 else (math.inf if ok else -math.inf)
                        for ok, c in zip(correct, confs))
            acc += p * (1.0 if score > 1e-12 else 0.5 if abs(score) <= 1e-12 else 0.0)
    return acc
