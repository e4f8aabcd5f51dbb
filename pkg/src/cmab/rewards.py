"""Reward functions over super arms and exact expected-reward evaluation.

Three reward families are supported:

* ``kmax``: R(x, S) = max_{i in S} x_i,
* ``utility_of_sum``: R(x, S) = u(sum_{i in S} x_i) for a monotone u,
* ``linear_sum``: R(x, S) = sum_{i in S} x_i.

Expected rewards r_D(S) are computed exactly for product distributions:
the max via a CDF-product expansion (discrete) or piecewise polynomial
quadrature (continuous), the sum-utility via exact support convolution.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np

from .distributions import (
    VALUE_TOL,
    Distribution,
    FiniteDistribution,
    PiecewiseDensity,
)
from .errors import GuardExceeded

KMAX = "kmax"
UTILITY_OF_SUM = "utility_of_sum"
LINEAR_SUM = "linear_sum"

CONVOLUTION_GUARD = 10**6
_SUM_GRID = 1e9  # sums are canonicalized to a 1e-9 grid during convolution


class SuperArm:
    """Nonempty sorted set of arm indices."""

    __slots__ = ("members",)

    def __init__(self, members):
        mem = tuple(sorted({int(i) for i in members}))
        if not mem:
            raise ValueError("super arm must be nonempty")
        if mem[0] < 0:
            raise ValueError("arm indices must be nonnegative")
        self.members = mem

    def __eq__(self, other):
        return isinstance(other, SuperArm) and self.members == other.members

    def __hash__(self):
        return hash(self.members)

    def __lt__(self, other):
        return self.members < other.members

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def __contains__(self, arm):
        return arm in self.members

    def __repr__(self):
        return f"SuperArm({list(self.members)})"


def identity_utility(y: float) -> float:
    return y


def square_utility(y: float) -> float:
    return y * y


def sqrt_utility(y: float) -> float:
    return math.sqrt(y)


def saturating_utility(y: float) -> float:
    """1 - exp(-y), saturating toward 1."""
    return -math.expm1(-y)


UTILITY_CURVES = {
    "identity": identity_utility,
    "square": square_utility,
    "sqrt": sqrt_utility,
    "saturating": saturating_utility,
}


class TabulatedUtility:
    """Piecewise-linear utility through the given (y, u) points."""

    def __init__(self, points: Sequence[tuple[float, float]]):
        pts = sorted((float(y), float(u)) for y, u in points)
        if len(pts) < 2:
            raise ValueError("need at least two table points")
        self.ys = np.array([y for y, _ in pts])
        self.us = np.array([u for _, u in pts])
        if np.any(np.diff(self.ys) <= 0):
            raise ValueError("table abscissae must be strictly increasing")

    def __call__(self, y: float) -> float:
        return float(np.interp(y, self.ys, self.us))


class RewardSpec:
    """Which reward function is in force, with its bound M and Lipschitz C.

    For ``kmax`` both constants are fixed at 1.  Utility curves must be
    non-decreasing; this is checked on a sampled grid at construction.
    """

    __slots__ = ("kind", "utility", "bound_M", "lipschitz_C")

    def __init__(self, kind, utility=None, bound_M=1.0, lipschitz_C=1.0):
        if kind not in (KMAX, UTILITY_OF_SUM, LINEAR_SUM):
            raise ValueError(f"unknown reward kind {kind!r}")
        if bound_M <= 0:
            raise ValueError("bound_M must be positive")
        if kind == KMAX:
            if utility is not None:
                raise ValueError("kmax takes no utility curve")
            bound_M, lipschitz_C = 1.0, 1.0
        elif kind == UTILITY_OF_SUM:
            if isinstance(utility, str):
                try:
                    utility = UTILITY_CURVES[utility]
                except KeyError:
                    raise ValueError(f"unknown utility curve {utility!r}") from None
            if not callable(utility):
                raise ValueError("utility_of_sum requires a curve name or callable")
            grid = np.linspace(0.0, 16.0, 257)
            vals = [utility(y) for y in grid]
            if any(b < a - 1e-12 for a, b in zip(vals, vals[1:])):
                raise ValueError("utility curve must be non-decreasing")
        else:
            if utility is not None:
                raise ValueError("linear_sum takes no utility curve")
        self.kind = kind
        self.utility = utility
        self.bound_M = float(bound_M)
        self.lipschitz_C = float(lipschitz_C)

    def __repr__(self):
        return f"RewardSpec(kind={self.kind!r}, bound_M={self.bound_M}, lipschitz_C={self.lipschitz_C})"


def kmax_spec() -> RewardSpec:
    return RewardSpec(KMAX)


def linear_spec(bound_M: float = 1.0) -> RewardSpec:
    return RewardSpec(LINEAR_SUM, bound_M=bound_M)


def utility_spec(utility, bound_M: float, lipschitz_C: float) -> RewardSpec:
    """Utility-of-sum spec.  ``utility`` is a curve name, a callable, or a
    point table for piecewise-linear interpolation.  The caller declares
    bound_M consistent with u on the reachable sum range; it is not
    inferred."""
    if isinstance(utility, (list, tuple)) and utility and not callable(utility):
        utility = TabulatedUtility(utility)
    return RewardSpec(UTILITY_OF_SUM, utility=utility, bound_M=bound_M, lipschitz_C=lipschitz_C)


def realized_reward(x: Mapping[int, float], S: SuperArm, spec: RewardSpec) -> float:
    """Reward of the outcome vector ``x`` (keyed by arm) on super arm S."""
    try:
        vals = [x[i] for i in S.members]
    except KeyError as e:
        raise ValueError(f"outcome missing for arm {e.args[0]}") from None
    if any(not 0.0 <= v <= 1.0 for v in vals):
        raise ValueError("outcomes must lie in [0, 1]")
    if spec.kind == KMAX:
        return max(vals)
    total = sum(vals)
    if spec.kind == LINEAR_SUM:
        return total
    return spec.utility(total)


def _cdf_at(arm: FiniteDistribution, grid: np.ndarray) -> np.ndarray:
    idx = np.searchsorted(arm.support, grid + VALUE_TOL, side="right")
    cum0 = np.concatenate(([0.0], arm.cum))
    return cum0[idx]


def expected_kmax(dists: Sequence[FiniteDistribution], S: SuperArm) -> float:
    """Exact E[max_{i in S} X_i] for finite-support member distributions.

    Over the union support V, Pr[max = v_k] is the difference between the
    products of member CDFs at v_k (max at most v_k) and at v_{k-1} (max
    strictly below v_k); the expectation sums v_k times that mass.
    """
    arms = [dists[i] for i in S.members]
    for a in arms:
        if not isinstance(a, FiniteDistribution):
            raise TypeError("expected_kmax requires finite-support distributions")
    if len(arms) == 1:
        return arms[0].mean()
    V = np.unique(np.concatenate([a.support for a in arms]))
    prod = np.ones(len(V))
    for a in arms:
        prod *= _cdf_at(a, V)
    pr = np.diff(prod, prepend=0.0)
    return float(V @ pr)


@lru_cache(maxsize=32)
def _gauss_legendre(n: int):
    return np.polynomial.legendre.leggauss(n)


def expected_kmax_continuous(dists: Sequence[Distribution], S: SuperArm) -> float:
    """Exact E[max_{i in S} X_i] via integral of 1 - prod_i F_i(x) on [0, 1].

    All breakpoints (and atoms of any finite members) split [0, 1] into
    segments on which the CDF product is a polynomial of degree at most
    |S|; Gauss-Legendre quadrature with ceil((|S|+1)/2) nodes integrates
    each segment exactly.
    """
    arms = [dists[i] for i in S.members]
    pts = [np.array([0.0, 1.0])]
    for a in arms:
        pts.append(a.breakpoints if isinstance(a, PiecewiseDensity) else a.support)
    edges = np.unique(np.concatenate(pts))
    edges = edges[(edges >= 0.0) & (edges <= 1.0)]
    nodes, weights = _gauss_legendre(math.ceil((len(arms) + 1) / 2))
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        half = (b - a) / 2.0
        if half <= 1e-15:
            continue
        xs = (a + b) / 2.0 + half * nodes
        prod = np.ones(len(xs))
        for arm in arms:
            prod *= arm.cdf(xs)
        total += half * float(weights @ (1.0 - prod))
    return total


def _sum_distribution(arms: Sequence[FiniteDistribution]) -> dict[int, float]:
    """Exact distribution of the sum, keyed by round(value * 1e9)."""
    n_points = 1
    for a in arms:
        n_points *= len(a.support)
        if n_points >= CONVOLUTION_GUARD:
            raise GuardExceeded(
                f"sum-support convolution needs {n_points} (or more) product points; "
                f"the guard is {CONVOLUTION_GUARD}"
            )
    acc = {0: 1.0}
    for a in arms:
        keys = [round(v * _SUM_GRID) for v in a.support]
        nxt: dict[int, float] = {}
        for k0, p0 in acc.items():
            for k1, p1 in zip(keys, a.probs):
                k = k0 + k1
                nxt[k] = nxt.get(k, 0.0) + p0 * p1
        acc = nxt
    return acc


def expected_reward(dists: Sequence[Distribution], S: SuperArm, spec: RewardSpec) -> float:
    """Exact expected reward r_D(S) of super arm S under the product law."""
    arms = [dists[i] for i in S.members]
    if spec.kind == KMAX:
        if all(isinstance(a, FiniteDistribution) for a in arms):
            return expected_kmax(dists, S)
        return expected_kmax_continuous(dists, S)
    if spec.kind == LINEAR_SUM:
        return float(sum(a.mean() for a in arms))
    for a in arms:
        if not isinstance(a, FiniteDistribution):
            raise TypeError("utility_of_sum requires finite-support distributions")
    law = _sum_distribution(arms)
    return float(sum(p * spec.utility(k / _SUM_GRID) for k, p in sorted(law.items())))
