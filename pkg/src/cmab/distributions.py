"""Outcome distributions on [0, 1].

Three representations cover everything downstream:

* :class:`FiniteDistribution` for discrete laws with finite support,
* :class:`PiecewiseDensity` for continuous laws with piecewise-constant
  density,
* :class:`EmpiricalCdf` for the per-arm observation record a learning
  policy accumulates.

The distribution objects are immutable after construction and safe to
share; an ``EmpiricalCdf`` has a single writer (the policy run that owns
it).  Construct finite distributions through :func:`make_finite`, which
canonicalizes and validates; the class constructor itself trusts its
arrays and is meant for internal fast paths.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence, Union

import numpy as np

MASS_TOL = 1e-12
VALUE_TOL = 1e-9


class FiniteDistribution:
    """Discrete distribution with finite support inside [0, 1].

    ``support`` is strictly ascending, every mass is positive, and the
    masses sum to one within ``MASS_TOL``.  ``cum`` holds the CDF at each
    support point; it may be supplied by internal callers that need exact
    cumulative values (see :func:`discretize_interval`), otherwise it is
    the running sum of ``probs``.
    """

    __slots__ = ("support", "probs", "cum")

    def __init__(self, support, probs, cum=None):
        self.support = np.asarray(support, dtype=float)
        self.probs = np.asarray(probs, dtype=float)
        if self.support.shape != self.probs.shape or self.support.ndim != 1:
            raise ValueError("support and probs must be 1-d arrays of equal length")
        self.cum = np.cumsum(self.probs) if cum is None else np.asarray(cum, dtype=float)

    def __repr__(self):
        pts = ", ".join(f"{v:g}: {p:g}" for v, p in zip(self.support, self.probs))
        return f"FiniteDistribution({{{pts}}})"

    def cdf(self, x):
        """F(x) = total mass at support points <= x (within VALUE_TOL)."""
        idx = np.searchsorted(self.support, np.asarray(x, dtype=float) + VALUE_TOL, side="right")
        cum0 = np.concatenate(([0.0], self.cum))
        out = cum0[idx]
        return float(out) if np.isscalar(x) or np.ndim(x) == 0 else out

    def mean(self) -> float:
        return float(self.support @ self.probs)

    def inverse_cdf(self, u: float) -> float:
        """Smallest support value whose CDF reaches ``u``."""
        idx = int(np.searchsorted(self.cum, u, side="left"))
        if idx >= len(self.support):
            idx = len(self.support) - 1
        return float(self.support[idx])


class PiecewiseDensity:
    """Continuous distribution on [0, 1] with piecewise-constant density.

    ``breakpoints`` ascends from 0 to 1; ``densities`` gives one
    nonnegative level per segment, integrating to one within ``MASS_TOL``.
    The CDF is continuous piecewise-linear with F(0) = 0 and F(1) = 1.
    """

    __slots__ = ("breakpoints", "densities", "cum")

    def __init__(self, breakpoints: Sequence[float], densities: Sequence[float]):
        bp = np.asarray(breakpoints, dtype=float)
        dens = np.asarray(densities, dtype=float)
        if bp.ndim != 1 or len(bp) < 2:
            raise ValueError("need at least two breakpoints")
        if len(dens) != len(bp) - 1:
            raise ValueError("need one density per segment")
        if bp[0] != 0.0 or bp[-1] != 1.0:
            raise ValueError("breakpoints must start at 0 and end at 1")
        if np.any(np.diff(bp) <= 0):
            raise ValueError("breakpoints must be strictly ascending")
        if np.any(dens < 0):
            raise ValueError("densities must be nonnegative")
        total = float(np.sum(dens * np.diff(bp)))
        if abs(total - 1.0) > MASS_TOL:
            raise ValueError(f"density integrates to {total!r}, expected 1")
        self.breakpoints = bp
        self.densities = dens
        self.cum = np.concatenate(([0.0], np.cumsum(dens * np.diff(bp))))

    def __repr__(self):
        return f"PiecewiseDensity(breakpoints={self.breakpoints.tolist()}, densities={self.densities.tolist()})"

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        seg = np.clip(np.searchsorted(self.breakpoints, x, side="right") - 1, 0, len(self.densities) - 1)
        out = self.cum[seg] + self.densities[seg] * (x - self.breakpoints[seg])
        out = np.clip(out, 0.0, 1.0)
        return float(out) if out.ndim == 0 else out

    def mean(self) -> float:
        a = self.breakpoints[:-1]
        b = self.breakpoints[1:]
        return float(np.sum(self.densities * (b * b - a * a) / 2.0))

    def inverse_cdf(self, u: float) -> float:
        seg = int(np.searchsorted(self.cum[1:], u, side="left"))
        if seg >= len(self.densities):
            seg = len(self.densities) - 1
        d = self.densities[seg]
        if d <= 0.0:
            return float(self.breakpoints[seg])
        x = self.breakpoints[seg] + (u - self.cum[seg]) / d
        return float(min(max(x, 0.0), 1.0))


Distribution = Union[FiniteDistribution, PiecewiseDensity]


class EmpiricalCdf:
    """Observation record for one arm: a multiset of values in [0, 1].

    Stores sorted (value, count) pairs, so updates are O(log n) and CDF
    queries are exact step-function evaluations.  ``count`` is the total
    number of observations.
    """

    __slots__ = ("_counts", "count", "_vals", "_cumcounts", "_dirty")

    def __init__(self, observations: Iterable[float] = ()):
        self._counts: dict[float, int] = {}
        self.count = 0
        self._vals = np.empty(0)
        self._cumcounts = np.empty(0)
        self._dirty = False
        for x in observations:
            self.add(x)

    def add(self, x: float) -> None:
        x = float(x)
        if not 0.0 <= x <= 1.0:
            raise ValueError(f"observation {x!r} outside [0, 1]")
        self._counts[x] = self._counts.get(x, 0) + 1
        self.count += 1
        self._dirty = True

    def arrays(self):
        """Sorted observed values and cumulative counts."""
        if self._dirty:
            vals = sorted(self._counts)
            self._vals = np.asarray(vals, dtype=float)
            self._cumcounts = np.cumsum([self._counts[v] for v in vals], dtype=float)
            self._dirty = False
        return self._vals, self._cumcounts

    def cdf(self, x: float) -> float:
        """F-hat(x) = (#observations <= x) / count."""
        if self.count == 0:
            raise ValueError("empty empirical CDF")
        vals, cum = self.arrays()
        idx = int(np.searchsorted(vals, x + VALUE_TOL, side="right"))
        return 0.0 if idx == 0 else float(cum[idx - 1]) / self.count


def make_finite(support: Sequence[float], probs: Sequence[float]) -> FiniteDistribution:
    """Validated finite distribution; duplicates merged, zero masses dropped."""
    support = np.asarray(support, dtype=float)
    probs = np.asarray(probs, dtype=float)
    if support.ndim != 1 or len(support) == 0 or support.shape != probs.shape:
        raise ValueError("support and probs must be nonempty lists of equal length")
    if np.any(support < 0.0) or np.any(support > 1.0):
        raise ValueError("support values must lie in [0, 1]")
    if np.any(probs < 0.0):
        raise ValueError("masses must be nonnegative")
    total = float(np.sum(probs))
    if abs(total - 1.0) > MASS_TOL:
        raise ValueError(f"masses sum to {total!r}, expected 1 within {MASS_TOL}")

    order = np.argsort(support, kind="stable")
    support = support[order]
    probs = probs[order]
    # merge exact duplicates
    uniq, inverse = np.unique(support, return_inverse=True)
    merged = np.zeros(len(uniq))
    np.add.at(merged, inverse, probs)
    keep = merged > 1e-15
    uniq, merged = uniq[keep], merged[keep]
    if len(uniq) == 0:
        raise ValueError("all masses are zero")
    gaps = np.diff(uniq)
    if np.any(gaps < VALUE_TOL):
        raise ValueError(f"distinct support points closer than {VALUE_TOL}")
    return FiniteDistribution(uniq, merged)


def cdf(dist: Distribution, x: float) -> float:
    """CDF of ``dist`` evaluated at ``x`` in [0, 1]."""
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1]")
    return dist.cdf(x)


def sample(dist: Distribution, rng: np.random.Generator) -> float:
    """One inverse-CDF draw from ``dist``, consuming a single uniform."""
    return dist.inverse_cdf(rng.random())


def empirical_update(ecdf: EmpiricalCdf, x: float) -> EmpiricalCdf:
    """Record one observation (in place; the same object is returned)."""
    ecdf.add(x)
    return ecdf


def confidence_radius(t: int, count: int) -> float:
    """sqrt(3 ln t / (2 count)), the uniform CDF confidence radius."""
    return math.sqrt(1.5 * math.log(t) / count)


def dominant_cdf(ecdf: EmpiricalCdf, t: int, confidence_radius_override: float | None = None) -> FiniteDistribution:
    """Optimistic distribution whose CDF sits a confidence radius below F-hat.

    The output CDF is max{F-hat(x) - radius, 0} at every observed value
    below 1 and exactly 1 at x = 1, so it first-order stochastically
    dominates the empirical distribution.  The probability mass removed
    from low values is relocated to the support point 1.

    Args:
        ecdf: observation record with at least one observation.
        t: current round index (>= 2); sets the radius sqrt(3 ln t / 2T).
        confidence_radius_override: replaces the radius when given.

    Returns:
        FiniteDistribution supported on the observed values plus 1.
    """
    if ecdf.count == 0:
        raise ValueError("dominant_cdf requires at least one observation")
    if confidence_radius_override is None:
        if t < 2:
            raise ValueError("round index t must be >= 2")
        radius = confidence_radius(t, ecdf.count)
    else:
        radius = float(confidence_radius_override)
    vals, cumcounts = ecdf.arrays()
    low = np.maximum(cumcounts / ecdf.count - radius, 0.0)
    if vals[-1] == 1.0:
        support = vals
    else:
        support = np.append(vals, 1.0)
        low = np.append(low, 0.0)
    low[-1] = 1.0
    probs = np.diff(low, prepend=0.0)
    keep = probs > 0.0
    return FiniteDistribution(support[keep], probs[keep], cum=low[keep])


def l1_distance(P: FiniteDistribution, Q: FiniteDistribution) -> float:
    """Sum over the union support of |P(x) - Q(x)|; lies in [0, 2]."""
    vals = np.concatenate([P.support, Q.support])
    masses = np.concatenate([P.probs, -Q.probs])
    order = np.argsort(vals, kind="stable")
    vals, masses = vals[order], masses[order]
    total = 0.0
    acc = masses[0]
    for k in range(1, len(vals)):
        if vals[k] - vals[k - 1] < VALUE_TOL:
            acc += masses[k]
        else:
            total += abs(acc)
            acc = masses[k]
    total += abs(acc)
    return float(total)


def bin_index(x: float, s: int) -> int:
    """1-based index of the interval of x under the s-fold split of [0, 1].

    Intervals are I_1 = [0, 1/s] and I_j = ((j-1)/s, j/s] for j >= 2.
    """
    j = math.ceil(x * s)
    if j < 1:
        j = 1
    elif j > s:
        j = s
    return j


def bin_value(x: float, s: int) -> float:
    """Right endpoint j/s of the interval containing x."""
    return bin_index(x, s) / s


def discretize_interval(dist: Distribution, s: int) -> FiniteDistribution:
    """Project ``dist`` onto the grid {1/s, ..., 1}.

    Each outcome is replaced by the right endpoint of its interval, so bin
    j receives the source probability of I_j.  Mass never moves down and
    moves up by at most 1/s.
    """
    if s < 1:
        raise ValueError("s must be a positive integer")
    if isinstance(dist, FiniteDistribution):
        # copy cumulative values verbatim so binned sampling stays exactly
        # coupled with sampling from the source distribution
        bins = np.array([bin_index(v, s) for v in dist.support])
        last_in_bin = np.nonzero(np.diff(bins, append=bins[-1] + 1))[0]
        support = bins[last_in_bin] / s
        cum = dist.cum[last_in_bin]
        probs = np.diff(cum, prepend=0.0)
        return FiniteDistribution(support, probs, cum=cum)
    grid = np.arange(1, s + 1) / s
    cumg = np.asarray(dist.cdf(grid), dtype=float)
    probs = np.diff(cumg, prepend=0.0)
    keep = probs > 0.0
    return FiniteDistribution(grid[keep], probs[keep], cum=cumg[keep])


def bernoulli_decomposition(dist: FiniteDistribution) -> list[tuple[float, float]]:
    """Rewrite ``dist`` as the max of independent two-point variables.

    Returns one (value, activation probability) pair per support point in
    ascending value order: q_j = p_j / (p_1 + ... + p_j).  The maximum of
    independent B(v_j, q_j) variables has exactly the input distribution.
    """
    q = dist.probs / dist.cum
    return [(float(v), float(qj)) for v, qj in zip(dist.support, q)]
