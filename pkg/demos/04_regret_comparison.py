"""
Short regret race on the first built-in environment.

Nine arms, three of which pay 1 with probability 0.5, and the learner may
play any three at once to maximize the expected maximum.  Each policy gets
T = 2000 rounds averaged over 5 runs with the greedy offline solver.  The
full-length version of this comparison (T = 10^4, 20 runs, all four
environments) runs as an acceptance test.

Traces land in demos/out/ as CSV; columns are round, expected_reward,
cum_regret.
"""

import pathlib

from cmab import PolicyFactory, builtin_env, run_many, write_csv

T, runs, seed = 2000, 5, 42
env = builtin_env("dist1")
out_dir = pathlib.Path(__file__).parent / "out"
out_dir.mkdir(exist_ok=True)

print(f"environment dist1: optimum {env.optimal_arm.members} with value {env.optimal_value:.4f}")
print(f"{'policy':<20} {'final cum regret':>17} {'avg/round':>10}")

finals = {}
for policy in ("sdcb", "lazy-sdcb", "lazy-sdcb-doubling", "cucb", "osm"):
    factory = PolicyFactory(policy, oracle="greedy")
    avg, _ = run_many(env, factory, T=T, runs=runs, seed_base=seed)
    final = avg.cum_regret[-1]
    finals[policy] = final
    write_csv(avg, out_dir / f"dist1_{policy}.csv")
    print(f"{policy:<20} {final:>17.2f} {final / T:>10.4f}")

best_learner = min(finals, key=finals.get)
print(f"\nlowest regret: {best_learner}")
print(f"traces written to {out_dir}/")
