"""Command-line entry point.

Subcommands: generate, inspect, solve, train, eval, complexity, replay.
Every run prints the resolved seed so it can be reproduced; diagnostics
go to stderr.  Exit codes: 0 success, 2 schema/usage error,
3 unsolvable or generation failure, 4 contract violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .actions import action_count
from .agents import (
    Policy,
    QLearningParams,
    UniformRandomPolicy,
    curve_to_csv,
    evaluate,
    oracle_solve,
    train,
)
from .complexity import format_table, report
from .dynamics import ContractViolation
from .env import EnvHandle, EpisodeConfig
from .generator import GenerationError, GeneratorConfig, generate
from .model import Level, SchemaError, load_challenge, save_challenge, validate

EXIT_OK = 0
EXIT_SCHEMA = 2
EXIT_UNSOLVABLE = 3
EXIT_CONTRACT = 4


def _resolve_seed(args) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    env_seed = os.environ.get("AWM_SEED")
    if env_seed is not None:
        return int(env_seed)
    return int.from_bytes(os.urandom(8), "big")


def _print_seed(seed: int) -> None:
    print(f"seed: {seed}")


def _load(path):
    try:
        return load_challenge(path)
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}")


def _format_action(action) -> str:
    if action.param is None:
        return f"{action.verb.value}(file{action.file})"
    return (f"{action.verb.value}(file{action.file}, "
            f"pname{action.param.name}=pval{action.param.value})")


def cmd_generate(args) -> int:
    seed = _resolve_seed(args)
    _print_seed(seed)
    level = Level(args.level)
    kwargs = dict(
        level=level,
        n_files=args.n,
        n_param_names=args.m if level == Level.L3 else 0,
        n_param_values=args.o if level == Level.L3 else 0,
        explicit_density=args.density,
        implicit_fraction=args.implicit_fraction,
        guard_fraction=args.guard_fraction,
    )
    if args.count == 1:
        challenge = generate(GeneratorConfig(seed=seed, **kwargs))
        save_challenge(challenge, args.output)
        print(f"wrote {args.output}")
        return EXIT_OK
    os.makedirs(args.output, exist_ok=True)
    for i in range(args.count):
        s = (seed + i) & 0xFFFFFFFFFFFFFFFF
        challenge = generate(GeneratorConfig(seed=s, **kwargs))
        path = os.path.join(args.output, f"challenge_l{args.level}_{s}.json")
        save_challenge(challenge, path)
        print(f"wrote {path}")
    return EXIT_OK


def cmd_inspect(args) -> int:
    challenge = _load(args.challenge)
    _print_seed(challenge.seed)
    violations = validate(challenge)
    n_actions = action_count(challenge.level, challenge.n_files,
                             challenge.n_param_names, challenge.n_param_values)
    explicit = sum(1 for l in challenge.links if l.kind.value == "explicit")
    print(f"level: {int(challenge.level)}")
    print(f"files: {challenge.n_files}  param names: {challenge.n_param_names}"
          f"  param values: {challenge.n_param_values}")
    print(f"links: {len(challenge.links)} ({explicit} explicit, "
          f"{len(challenge.links) - explicit} implicit)")
    print(f"actions: {n_actions}")
    if not violations:
        print("valid: yes")
        return EXIT_OK
    print("valid: no")
    for v in violations:
        where = v.field if v.index is None else f"{v.field}[{v.index}]"
        print(f"violation: {where}: {v.message}", file=sys.stderr)
    return EXIT_UNSOLVABLE


def cmd_solve(args) -> int:
    challenge = _load(args.challenge)
    _print_seed(challenge.seed)
    actions = oracle_solve(challenge)
    if actions is None:
        print("unsolvable", file=sys.stderr)
        return EXIT_UNSOLVABLE
    for action in actions:
        print(_format_action(action))
    print(f"steps: {len(actions)}")
    if args.trace:
        env = EnvHandle(EpisodeConfig(challenge))
        for action in actions:
            env.step(action)
        with open(args.trace, "w", encoding="utf-8") as fh:
            for record in env.records:
                fh.write(json.dumps(record, sort_keys=True) + "\n")
        print(f"wrote {args.trace}")
    return EXIT_OK


def cmd_train(args) -> int:
    challenge = _load(args.challenge)
    seed = _resolve_seed(args)
    _print_seed(seed)
    params = QLearningParams(alpha=args.alpha, gamma=args.gamma,
                             epsilon_start=args.epsilon_start,
                             epsilon_end=args.epsilon_end)
    result = train(challenge, episodes=args.episodes, params=params,
                   training_seed=seed, max_steps=args.max_steps)
    with open(args.policy_out, "w", encoding="utf-8") as fh:
        json.dump(result.policy.to_json_obj(), fh, sort_keys=True)
    print(f"wrote {args.policy_out}")
    if args.curve_out:
        with open(args.curve_out, "w", encoding="utf-8") as fh:
            fh.write(curve_to_csv(result.curve))
        print(f"wrote {args.curve_out}")
    print(f"episodes: {result.episodes_run}")
    return EXIT_OK


def cmd_eval(args) -> int:
    challenge = _load(args.challenge)
    seed = _resolve_seed(args)
    _print_seed(seed)
    if args.random:
        n_actions = action_count(challenge.level, challenge.n_files,
                                 challenge.n_param_names, challenge.n_param_values)
        policy = UniformRandomPolicy(n_actions)
    else:
        if not args.policy:
            print("either --policy or --random is required", file=sys.stderr)
            return EXIT_SCHEMA
        with open(args.policy, encoding="utf-8") as fh:
            policy = Policy.from_json_obj(json.load(fh))
    stats = evaluate(policy, challenge, episodes=args.episodes,
                     max_steps=args.max_steps, seed=seed)
    text = json.dumps(stats.to_json_obj(), sort_keys=True)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        print(f"wrote {args.output}")
    else:
        print(text)
    return EXIT_OK


def cmd_complexity(args) -> int:
    rep = report(args.level, args.n, args.m, args.o, args.p)
    if args.json:
        print(json.dumps(rep.to_json_obj(), sort_keys=True))
    else:
        print(format_table(rep))
    return EXIT_OK


def cmd_replay(args) -> int:
    challenge = _load(args.challenge)
    _print_seed(challenge.seed)
    with open(args.trace, encoding="utf-8") as fh:
        try:
            records = [json.loads(line) for line in fh if line.strip()]
        except json.JSONDecodeError as exc:
            raise SchemaError(f"trace is not valid JSONL: {exc}")
    env = EnvHandle(EpisodeConfig(challenge, max_steps=args.max_steps))
    for i, expected in enumerate(records):
        if expected.get("action_index") is None:
            print(f"record {i}: action_index missing, cannot replay", file=sys.stderr)
            return EXIT_SCHEMA
        env.step_index(expected["action_index"])
        actual = env.records[-1]
        if actual != expected:
            print(f"record {i}: divergence\n  expected {expected}\n  actual   {actual}",
                  file=sys.stderr)
            return EXIT_CONTRACT
    print(f"replay ok: {len(records)} steps")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="webctf",
                                     description="CTF-style web-hacking challenge simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate challenge files")
    p.add_argument("--level", type=int, choices=(1, 2, 3), required=True)
    p.add_argument("--n", type=int, required=True, help="number of files")
    p.add_argument("--m", type=int, default=0, help="number of parameter names (L3)")
    p.add_argument("--o", type=int, default=0, help="number of parameter values (L3)")
    p.add_argument("--density", type=float, default=0.25)
    p.add_argument("--implicit-fraction", type=float, default=0.3)
    p.add_argument("--guard-fraction", type=float, default=0.3)
    p.add_argument("--seed", type=int)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("-o", "--output", dest="output", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("inspect", help="validate a challenge file and summarize it")
    p.add_argument("challenge")
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("solve", help="run the oracle solver")
    p.add_argument("challenge")
    p.add_argument("--trace", help="write the verified episode log (JSONL)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("train", help="train the tabular Q-learning baseline")
    p.add_argument("challenge")
    p.add_argument("--episodes", type=int, required=True)
    p.add_argument("--alpha", type=float, default=0.1)
    p.add_argument("--gamma", type=float, default=0.95)
    p.add_argument("--epsilon-start", type=float, default=1.0)
    p.add_argument("--epsilon-end", type=float, default=0.05)
    p.add_argument("--max-steps", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--policy-out", required=True)
    p.add_argument("--curve-out")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="evaluate a policy")
    p.add_argument("challenge")
    p.add_argument("--policy")
    p.add_argument("--random", action="store_true",
                   help="evaluate the uniform-random baseline instead")
    p.add_argument("--episodes", type=int, default=1)
    p.add_argument("--max-steps", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("-o", "--output", dest="output")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("complexity", help="closed-form action/state counts")
    p.add_argument("--level", type=int, choices=(1, 2, 3, 4), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--o", type=int, default=0)
    p.add_argument("--p", type=int, default=None,
                   help="level-4 parameter list bound (0, 1 or M)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_complexity)

    p = sub.add_parser("replay", help="verify a recorded episode log")
    p.add_argument("challenge")
    p.add_argument("trace")
    p.add_argument("--max-steps", type=int)
    p.set_defaults(func=cmd_replay)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except GenerationError as exc:
        print(f"generation failure: {exc}", file=sys.stderr)
        return EXIT_UNSOLVABLE
    except ContractViolation as exc:
        print(f"contract violation: {exc}", file=sys.stderr)
        return EXIT_CONTRACT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA


if __name__ == "__main__":
    sys.exit(main())
