"""Online learning policies over combinatorial arm sets.

All policies share one interface: ``select(t)`` returns the super arm to
play in round t (rounds are 1-based), and ``observe(t, S, outcomes)``
feeds back the outcome of every member of S (semi-bandit feedback, as a
mapping arm -> value).  Rounds must alternate select/observe and advance
by exactly one.

Policies never see the true distributions or exact expected rewards;
their only inputs are the feasible family, the reward spec, an offline
oracle over per-arm distributions, and their own observations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distributions import (
    EmpiricalCdf,
    FiniteDistribution,
    bin_value,
    confidence_radius,
    dominant_cdf,
)
from .oracles import FeasibleFamily
from .rewards import RewardSpec, SuperArm


class _RoundClock:
    """Enforces the select/observe alternation contract."""

    __slots__ = ("t", "awaiting_observe")

    def __init__(self):
        self.t = 0
        self.awaiting_observe = False

    def on_select(self, t: int) -> None:
        if self.awaiting_observe:
            raise ValueError("observe() for the previous round is missing")
        if t != self.t + 1:
            raise ValueError(f"expected round {self.t + 1}, got {t}")
        self.t = t
        self.awaiting_observe = True

    def on_observe(self, t: int) -> None:
        if not self.awaiting_observe or t != self.t:
            raise ValueError(f"observe({t}) does not follow select({t})")
        self.awaiting_observe = False


def _check_outcomes(S: SuperArm, outcomes) -> None:
    if set(outcomes) != set(S.members):
        raise ValueError("outcomes must cover exactly the members of the played super arm")
    for arm, x in outcomes.items():
        if not 0.0 <= x <= 1.0:
            raise ValueError(f"outcome {x!r} for arm {arm} outside [0, 1]")


class Sdcb:
    """Stochastically dominant confidence bound policy.

    Keeps an empirical CDF per arm.  The first m rounds initialize: round
    i plays the lexicographically smallest feasible super arm containing
    arm i - 1.  Afterwards every arm's empirical CDF is shifted down by
    the confidence radius sqrt(3 ln t / 2 T_i) (mass relocated to 1) and
    the offline oracle is asked for the best super arm under that
    optimistic product law.

    With ``outcome_bins=s`` every observation is snapped to the right
    endpoint of its interval under the s-fold split of [0, 1] before
    storage, which keeps the per-arm support on an s-point grid.
    """

    def __init__(self, family: FeasibleFamily, spec: RewardSpec, oracle, outcome_bins: int | None = None):
        self.family = family
        self.spec = spec
        self.oracle = oracle
        self.outcome_bins = outcome_bins
        self.ecdfs = [EmpiricalCdf() for _ in range(family.m)]
        self._clock = _RoundClock()

    def select(self, t: int, radius_t: int | None = None) -> SuperArm:
        self._clock.on_select(t)
        m = self.family.m
        if t <= m:
            return self.family.smallest_containing(t - 1)
        t_radius = t if radius_t is None else radius_t
        dominant = [dominant_cdf(e, t_radius) for e in self.ecdfs]
        return self.oracle(dominant)

    def observe(self, t: int, S: SuperArm, outcomes) -> None:
        self._clock.on_observe(t)
        _check_outcomes(S, outcomes)
        s = self.outcome_bins
        for arm, x in outcomes.items():
            self.ecdfs[arm].add(x if s is None else bin_value(x, s))

    @property
    def pull_counts(self):
        return [e.count for e in self.ecdfs]


def lazy_sdcb_known_T(family: FeasibleFamily, spec: RewardSpec, oracle, T: int) -> Sdcb:
    """SDCB over outcomes binned to the grid {1/s, ..., 1}, s = ceil(sqrt(T))."""
    if T < 1:
        raise ValueError("horizon T must be >= 1")
    s = math.isqrt(T)
    if s * s < T:
        s += 1
    return Sdcb(family, spec, oracle, outcome_bins=s)


def doubling_schedule(m: int, rounds: int) -> list[tuple[int, int, int]]:
    """Epoch layout (start, end, horizon) covering rounds 1..rounds.

    The first epoch spans rounds 1..2^q with horizon 2^q, q = ceil(log2 m);
    epoch k >= q spans rounds 2^k + 1 .. 2^(k+1) with horizon 2^k.
    """
    if m < 1:
        raise ValueError("need m >= 1")
    q = (m - 1).bit_length()
    epochs = [(1, 2**q, 2**q)]
    k = q
    while epochs[-1][1] < rounds:
        epochs.append((2**k + 1, 2 ** (k + 1), 2**k))
        k += 1
    return epochs


class LazySdcbDoubling:
    """Horizon-free variant: restart the known-horizon policy on doubling epochs.

    Each epoch runs a fresh instance with its own initialization rounds
    and epoch-local round indices; by default the confidence radius uses
    the epoch-local round (each epoch is a complete fresh run), with
    ``radius_global_t=True`` switching to the global round index.
    """

    def __init__(self, family: FeasibleFamily, spec: RewardSpec, oracle, radius_global_t: bool = False):
        self.family = family
        self.spec = spec
        self.oracle = oracle
        self.radius_global_t = radius_global_t
        q = (family.m - 1).bit_length()
        self._epoch_start = 1
        self._epoch_end = 2**q
        self._inner = lazy_sdcb_known_T(family, spec, oracle, self._epoch_end)
        self._clock = _RoundClock()

    def _advance_epoch(self) -> None:
        horizon = self._epoch_end  # next epoch doubles the covered range
        self._epoch_start = self._epoch_end + 1
        self._epoch_end = 2 * self._epoch_end
        self._inner = lazy_sdcb_known_T(self.family, self.spec, self.oracle, horizon)

    def select(self, t: int) -> SuperArm:
        self._clock.on_select(t)
        if t > self._epoch_end:
            self._advance_epoch()
        local = t - self._epoch_start + 1
        return self._inner.select(local, radius_t=t if self.radius_global_t else None)

    def observe(self, t: int, S: SuperArm, outcomes) -> None:
        self._clock.on_observe(t)
        self._inner.observe(t - self._epoch_start + 1, S, outcomes)

    @property
    def epoch(self) -> tuple[int, int]:
        return self._epoch_start, self._epoch_end


class Cucb:
    """Mean-based UCB baseline.

    Tracks per-arm running means; after initialization it clamps
    mu_hat + sqrt(3 ln t / 2 T_i) at 1 and feeds point masses at those
    upper bounds to the same distribution oracle the other policies use.
    For max-type rewards this is a deliberate mis-specification (the mean
    carries no tail information), which is exactly the ablation it
    exists to demonstrate.
    """

    def __init__(self, family: FeasibleFamily, spec: RewardSpec, oracle):
        self.family = family
        self.spec = spec
        self.oracle = oracle
        self.sums = np.zeros(family.m)
        self.counts = np.zeros(family.m, dtype=int)
        self._clock = _RoundClock()

    def select(self, t: int) -> SuperArm:
        self._clock.on_select(t)
        if t <= self.family.m:
            return self.family.smallest_containing(t - 1)
        mu = self.sums / self.counts
        radius = np.sqrt(1.5 * math.log(t) / self.counts)
        ucb = np.minimum(mu + radius, 1.0)
        return self.oracle([FiniteDistribution([u], [1.0]) for u in ucb])

    def observe(self, t: int, S: SuperArm, outcomes) -> None:
        self._clock.on_observe(t)
        _check_outcomes(S, outcomes)
        for arm, x in outcomes.items():
            self.sums[arm] += x
            self.counts[arm] += 1

    @property
    def pull_counts(self):
        return self.counts.tolist()


@dataclass
class Exp3State:
    """Weights and exploration rate of one adversarial-bandit instance."""

    weights: np.ndarray
    gamma: float


def fresh_exp3(m: int, gamma: float) -> Exp3State:
    if not 0.0 < gamma <= 1.0:
        raise ValueError("gamma must lie in (0, 1]")
    return Exp3State(weights=np.ones(m), gamma=float(gamma))


def exp3_probs(state: Exp3State) -> np.ndarray:
    w = state.weights
    m = len(w)
    return (1.0 - state.gamma) * w / w.sum() + state.gamma / m


def exp3_select(state: Exp3State, rng: np.random.Generator) -> int:
    """Sample one arm from the exploration-mixed weight distribution."""
    return int(rng.choice(len(state.weights), p=exp3_probs(state)))


def exp3_update(state: Exp3State, arm: int, payoff: float) -> None:
    """Importance-weighted exponential update of the chosen arm's weight."""
    if not 0.0 <= payoff <= 1.0:
        raise ValueError(f"payoff {payoff!r} outside [0, 1]")
    m = len(state.weights)
    p = float(exp3_probs(state)[arm])
    state.weights[arm] *= math.exp(state.gamma * (payoff / p) / m)
    state.weights /= state.weights.max()  # rescaling leaves probabilities unchanged
    np.maximum(state.weights, 1e-300, out=state.weights)  # keep strictly positive


def exp3_gamma(m: int, horizon: int) -> float:
    """min{1, sqrt(m ln m / ((e - 1) T))}, the standard tuned rate."""
    if m <= 1:
        return 1.0
    return min(1.0, math.sqrt(m * math.log(m) / ((math.e - 1.0) * horizon)))


class Osm:
    """Online greedy submodular maximization on adversarial-bandit instances.

    Runs K weight-vector instances; each round draws one arm from every
    instance (duplicates allowed) and plays the union.  After observing
    outcomes, instance i receives the marginal gain of its draw in draw
    order: f(first i draws) - f(first i-1 draws), where f of a set is the
    maximum observed outcome in it.
    """

    def __init__(self, family: FeasibleFamily, T: int, rng: np.random.Generator):
        if family.kind != "cardinality":
            raise ValueError("this policy needs a cardinality constraint family")
        self.family = family
        self.rng = rng
        gamma = exp3_gamma(family.m, T)
        self.instances = [fresh_exp3(family.m, gamma) for _ in range(family.K)]
        self.last_draws: tuple[int, ...] = ()
        self._clock = _RoundClock()

    def select(self, t: int) -> SuperArm:
        self._clock.on_select(t)
        self.last_draws = tuple(exp3_select(st, self.rng) for st in self.instances)
        return SuperArm(self.last_draws)

    def observe(self, t: int, S: SuperArm, outcomes) -> None:
        self._clock.on_observe(t)
        _check_outcomes(S, outcomes)
        running = 0.0
        for st, arm in zip(self.instances, self.last_draws):
            gain = max(running, outcomes[arm]) - running
            exp3_update(st, arm, gain)
            running += gain
