"""Shared test helpers: independent brute-force evaluators and generators.

Everything here re-derives results from first principles (joint
enumeration over product supports, activation-pattern enumeration), so
library outputs are checked against logic the library does not share.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from cmab import FiniteDistribution, make_finite

COARSE_GRID = np.round(np.linspace(0.0, 1.0, 201), 6)


def random_finite(rng: np.random.Generator, max_support: int = 6) -> FiniteDistribution:
    """Random finite distribution with well-separated support points."""
    k = int(rng.integers(1, max_support + 1))
    support = rng.choice(COARSE_GRID, size=k, replace=False)
    probs = rng.random(k) + 0.05
    probs /= probs.sum()
    return make_finite(support, probs)


def joint_expected(dists, members, reward_fn) -> float:
    """E[reward_fn(outcome vector)] by enumerating the product law."""
    pairs = [list(zip(dists[i].support, dists[i].probs)) for i in members]
    total = 0.0
    for combo in itertools.product(*pairs):
        p = 1.0
        for _, pj in combo:
            p *= pj
        total += p * reward_fn([v for v, _ in combo])
    return total


def bruteforce_kmax(dists, members) -> float:
    return joint_expected(dists, members, max)


def bruteforce_max_law(pairs) -> dict[float, float]:
    """Distribution of max of independent (value, q) Bernoullis.

    Enumerates all activation patterns; an inactive variable contributes 0,
    so the empty pattern yields max 0.
    """
    out: dict[float, float] = {}
    for mask in itertools.product((0, 1), repeat=len(pairs)):
        p = 1.0
        top = 0.0
        for (v, q), on in zip(pairs, mask):
            p *= q if on else 1.0 - q
            if on and v > top:
                top = v
        if p > 0.0:
            out[top] = out.get(top, 0.0) + p
    return out


def bruteforce_best_subset(dists, K, value_fn):
    """(best members, best value) over all subsets of size 1..K."""
    m = len(dists)
    best, best_val = None, -math.inf
    for k in range(1, K + 1):
        for combo in itertools.combinations(range(m), k):
            v = value_fn(combo)
            if v > best_val + 1e-15:
                best, best_val = combo, v
    return best, best_val


def law_as_dict(dist: FiniteDistribution) -> dict[float, float]:
    return {float(v): float(p) for v, p in zip(dist.support, dist.probs)}


def dicts_close(a: dict[float, float], b: dict[float, float], tol: float) -> bool:
    keys = set(a) | set(b)
    return all(abs(a.get(k, 0.0) - b.get(k, 0.0)) <= tol for k in keys)
