"""Command line front end.

Three subcommands:

* ``cmab run``      simulate a policy on an environment, write CSV traces
* ``cmab offline``  solve a one-shot instance file with a chosen solver
* ``cmab envs``     list the bundled environments

Exit codes: 0 on success, 1 on configuration errors (bad flags, bad JSON,
invalid instances), 2 when a runtime guard trips (search spaces beyond the
exact evaluators' limits).
"""

from __future__ import annotations

import argparse
import json
import sys

from .distributions import PiecewiseDensity, make_finite
from .errors import GuardExceeded
from .harness import (
    ORACLES,
    POLICIES,
    Environment,
    PolicyFactory,
    builtin_env,
    builtin_env_names,
    run_many,
    write_csv,
)
from .oracles import FeasibleFamily, exhaustive_oracle, greedy_kmax, ptas_kmax
from .rewards import SuperArm, expected_reward, kmax_spec, linear_spec, utility_spec

_RUN_DEFAULTS = {
    "env": None,
    "policy": None,
    "oracle": "exhaustive",
    "epsilon": 0.25,
    "T": 10000,
    "runs": 20,
    "seed": 42,
    "alpha": 1.0,
    "out": "trace.csv",
}


class _ConfigError(Exception):
    """Unusable flags, config files, or instance documents."""


class _Parser(argparse.ArgumentParser):
    """Parser whose usage errors surface as exit code 1, not argparse's 2."""

    def error(self, message):
        raise _ConfigError(message)


def _load_json(path: str):
    try:
        with open(path) as f:
            return json.load(f)
    except OSError as e:
        raise _ConfigError(f"cannot read {path!r}: {e}") from e
    except json.JSONDecodeError as e:
        raise _ConfigError(f"invalid JSON in {path!r}: {e}") from e


def _parse_arm(doc, index: int):
    if not isinstance(doc, dict):
        raise _ConfigError(f"arm {index}: expected an object")
    if "support" in doc or "probs" in doc:
        if "support" not in doc or "probs" not in doc:
            raise _ConfigError(f"arm {index}: finite arms need both 'support' and 'probs'")
        return make_finite(doc["support"], doc["probs"])
    if "breakpoints" in doc or "densities" in doc:
        if "breakpoints" not in doc or "densities" not in doc:
            raise _ConfigError(f"arm {index}: continuous arms need both 'breakpoints' and 'densities'")
        return PiecewiseDensity(doc["breakpoints"], doc["densities"])
    raise _ConfigError(f"arm {index}: need 'support'/'probs' or 'breakpoints'/'densities'")


def _parse_family(doc, m: int) -> FeasibleFamily:
    if not isinstance(doc, dict) or "kind" not in doc:
        raise _ConfigError("family: expected an object with a 'kind' field")
    kind = doc["kind"]
    if kind == "cardinality":
        if "K" not in doc:
            raise _ConfigError("family: cardinality needs 'K'")
        return FeasibleFamily.cardinality_at_most(int(doc["K"]), m)
    if kind == "explicit":
        if "sets" not in doc or not isinstance(doc["sets"], list):
            raise _ConfigError("family: explicit needs a 'sets' list")
        return FeasibleFamily.explicit([SuperArm(s) for s in doc["sets"]], m)
    raise _ConfigError(f"family: unknown kind {kind!r}")


def _parse_reward(doc):
    if doc is None:
        return kmax_spec()
    if not isinstance(doc, dict):
        raise _ConfigError("reward: expected an object")
    kind = doc.get("kind", "kmax")
    if kind == "kmax":
        return kmax_spec()
    if kind == "linear":
        return linear_spec(bound_M=float(doc.get("bound_M", 1.0)))
    if kind == "utility":
        if "utility" not in doc:
            raise _ConfigError("reward: utility kind needs a 'utility' curve (name or [[y, u(y)], ...])")
        utility = doc["utility"]
        if isinstance(utility, list):
            utility = [tuple(p) for p in utility]
        return utility_spec(
            utility,
            bound_M=float(doc.get("bound_M", 1.0)),
            lipschitz_C=float(doc.get("lipschitz_C", 1.0)),
        )
    raise _ConfigError(f"reward: unknown kind {kind!r}")


def _parse_instance(doc):
    """Arms, family, and reward spec from an inline JSON document."""
    if not isinstance(doc, dict):
        raise _ConfigError("instance: expected a JSON object")
    if "arms" not in doc or not isinstance(doc["arms"], list) or not doc["arms"]:
        raise _ConfigError("instance: need a nonempty 'arms' list")
    arms = [_parse_arm(a, i) for i, a in enumerate(doc["arms"])]
    if "family" not in doc:
        raise _ConfigError("instance: missing 'family'")
    family = _parse_family(doc["family"], len(arms))
    spec = _parse_reward(doc.get("reward"))
    return arms, family, spec


def cmd_run(args) -> int:
    config = _load_json(args.config) if args.config else {}
    if not isinstance(config, dict):
        raise _ConfigError("config: expected a JSON object")

    def pick(key):
        flag = getattr(args, key)
        if flag is not None:
            return flag
        if key in config:
            return config[key]
        return _RUN_DEFAULTS[key]

    policy = pick("policy")
    if policy is None:
        raise _ConfigError("no policy given (use --policy or a 'policy' config entry)")
    if policy not in POLICIES:
        raise _ConfigError(f"unknown policy {policy!r}; choose from {', '.join(POLICIES)}")
    oracle = pick("oracle")
    if oracle not in ORACLES:
        raise _ConfigError(f"unknown oracle {oracle!r}; choose from {', '.join(ORACLES)}")
    try:
        T = int(pick("T"))
        runs = int(pick("runs"))
        seed = int(pick("seed"))
        epsilon = float(pick("epsilon"))
        alpha = float(pick("alpha"))
    except (TypeError, ValueError) as e:
        raise _ConfigError(f"bad numeric config value: {e}") from e
    out = pick("out")
    if T < 1:
        raise _ConfigError("T must be >= 1")
    if runs < 1:
        raise _ConfigError("runs must be >= 1")
    if seed < 0:
        raise _ConfigError("seed must be >= 0")
    if not 0.0 < alpha <= 1.0:
        raise _ConfigError("alpha must be in (0, 1]")

    env_name = pick("env")
    if env_name is not None:
        env = builtin_env(env_name)
    elif "arms" in config:
        arms, family, spec = _parse_instance(config)
        env = Environment(arms, family, spec, name="inline")
    else:
        raise _ConfigError("no environment: pass --env or put arms in the config file")

    factory = PolicyFactory(policy=policy, oracle=oracle, epsilon=epsilon)
    avg, traces = run_many(env, factory, T, runs, seed, alpha=alpha, n_jobs=args.jobs)
    write_csv(avg, out)
    if args.per_run_out:
        write_csv(traces, args.per_run_out)
    print(f"wrote {out}: env={env.name or 'inline'} policy={policy} oracle={oracle} T={T} runs={runs}")
    return 0


def cmd_offline(args) -> int:
    doc = _load_json(args.instance)
    arms, family, spec = _parse_instance(doc)
    if args.solver == "exhaustive":
        S = exhaustive_oracle(arms, family, spec)
    else:
        if family.kind != "cardinality" or spec.kind != "kmax":
            raise _ConfigError(f"the {args.solver} solver needs a cardinality family and the kmax reward")
        if args.solver == "greedy":
            S = greedy_kmax(arms, family.K)
        else:
            S = ptas_kmax(arms, family.K, args.epsilon)
    value = expected_reward(arms, S, spec)
    print("set:", " ".join(str(i) for i in S.members))
    print("value:", format(value, ".12g"))
    return 0


def cmd_envs(args) -> int:
    for name, desc in builtin_env_names():
        print(f"{name}  {desc}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cmab", description="Combinatorial bandit simulation and offline solvers.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="{run,offline,envs}")

    run = sub.add_parser("run", help="simulate a policy and write a CSV regret trace")
    run.add_argument("--env", choices=[n for n, _ in builtin_env_names()], help="bundled environment name")
    run.add_argument("--policy", choices=POLICIES, help="learning policy")
    run.add_argument("--oracle", choices=ORACLES, help="offline oracle used by UCB-style policies (default exhaustive)")
    run.add_argument("--epsilon", type=float, help="accuracy parameter for the ptas oracle (default 0.25)")
    run.add_argument("--T", type=int, help="horizon in rounds (default 10000)")
    run.add_argument("--runs", type=int, help="independent runs to average (default 20)")
    run.add_argument("--seed", type=int, help="base seed; run r uses seed + r (default 42)")
    run.add_argument("--alpha", type=float, help="approximation level in the regret column (default 1.0)")
    run.add_argument("--out", help="averaged trace CSV path (default trace.csv)")
    run.add_argument("--per-run-out", help="optional CSV with one block per run")
    run.add_argument("--config", help="JSON config file; explicit flags override its entries")
    run.add_argument("--jobs", type=int, default=1, help="parallel worker count (default 1; results identical)")
    run.set_defaults(func=cmd_run)

    offline = sub.add_parser("offline", help="solve one instance file and print the chosen set")
    offline.add_argument("--instance", required=True, help="JSON instance with arms, family, and reward")
    offline.add_argument("--solver", choices=("exhaustive", "greedy", "ptas"), default="exhaustive")
    offline.add_argument("--epsilon", type=float, default=0.25, help="accuracy parameter for the ptas solver")
    offline.set_defaults(func=cmd_offline)

    envs = sub.add_parser("envs", help="list bundled environments")
    envs.set_defaults(func=cmd_envs)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _ConfigError as e:
        print(f"cmab: error: {e}", file=sys.stderr)
        return 1
    except GuardExceeded as e:
        print(f"cmab: guard exceeded: {e}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as e:
        print(f"cmab: error: {e}", file=sys.stderr)
        return 1
