"""Command-line interface.

Exit codes: 0 on success, 2 on validation failures (bad instance, bad
parameters, non-unique optimum, oracle mismatches), 1 on runtime errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .analysis import compute_gap_profile, validate_unique_optimum
from .harness.generators import GENERATORS, generate_instance
from .harness.runner import FB_ALGOS, FC_ALGOS, ExperimentConfig, run_experiment
from .harness.suite import run_oracle_check
from .model import DomainError, Instance, ValidationError


def _parse_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _params(pairs) -> dict:
    out = {}
    for pair in pairs or []:
        key, sep, value = pair.partition("=")
        if not sep:
            raise ValidationError(f"--param expects key=value, got {pair!r}")
        value = _parse_value(value)
        out[key.replace("-", "_")] = tuple(value) if isinstance(value, list) else value
    return out


def load_instance(source: str, params=None) -> tuple[Instance, str]:
    """Resolve ``source`` as a JSON file path or a generator name."""
    path = Path(source)
    if path.is_file():
        return Instance.load(path), path.stem
    if source in GENERATORS:
        return generate_instance(source, **_params(params)), source
    raise ValidationError(f"{source!r} is neither an instance file nor a generator ({', '.join(GENERATORS)})")


def _add_instance_args(p):
    p.add_argument("--instance", required=True, help="instance JSON file or generator name")
    p.add_argument("--param", action="append", metavar="KEY=VALUE", help="generator parameter (repeatable)")


def _add_run_args(p):
    _add_instance_args(p)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=0, help="base seed; trial i uses seed+i")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--out", help="output prefix; writes PREFIX.csv and PREFIX.json")
    p.add_argument("--timing", action="store_true", help="add wall-clock times to the CSV")
    p.add_argument("--obs-log", help="write every observation to this CSV file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cpeb", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="emit a generated instance as JSON")
    p.add_argument("name", choices=sorted(GENERATORS))
    p.add_argument("--param", action="append", metavar="KEY=VALUE")
    p.add_argument("--out", help="output file (default: stdout)")

    p = sub.add_parser("gaps", help="print gaps, partition and hardness as JSON")
    _add_instance_args(p)

    p = sub.add_parser("validate", help="check that the optimal super arm is unique")
    _add_instance_args(p)

    p = sub.add_parser("run-fc", help="run a fixed-confidence algorithm")
    _add_run_args(p)
    p.add_argument("--algo", choices=FC_ALGOS, default="blucb")
    conf = p.add_mutually_exclusive_group()
    conf.add_argument("--delta", type=float)
    conf.add_argument("--log-inv-delta", type=float, help="ln(1/delta), for tiny delta")
    p.add_argument("--epsilon", type=float, default=0.0)
    p.add_argument("--kappa", type=float, default=0.01, help="confidence of blucb_explore")
    p.add_argument("--reward", default="bottleneck", help="reward function for genlucb")

    p = sub.add_parser("run-fb", help="run a fixed-budget algorithm")
    _add_run_args(p)
    p.add_argument("--algo", choices=FB_ALGOS, default="bsar")
    p.add_argument("--budget", type=int, required=True)

    p = sub.add_parser("oracle-check", help="cross-check oracles against brute force")
    p.add_argument("--per-kind", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    return parser


def _run(args, config: ExperimentConfig) -> int:
    _, summary = run_experiment(config, args.out, timing=args.timing, obs_log=args.obs_log)
    print(json.dumps(summary, indent=2))
    return 0


def dispatch(args) -> int:
    if args.command == "gen":
        inst = generate_instance(args.name, **_params(args.param))
        text = json.dumps(inst.to_json(), indent=2) + "\n"
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
        return 0
    if args.command == "oracle-check":
        report = run_oracle_check(args.per_kind, args.seed)
        for line in report.failures:
            print(line)
        print(json.dumps({"instances": report.instances, "failures": len(report.failures)}))
        return 0 if report.ok else 2

    inst, label = load_instance(args.instance, args.param)
    if args.command == "gaps":
        print(json.dumps(compute_gap_profile(inst).to_json(), indent=2))
        return 0
    if args.command == "validate":
        ok, msg = validate_unique_optimum(inst)
        print(msg)
        return 0 if ok else 2
    common = dict(
        instance=inst,
        algo=args.algo,
        trials=args.trials,
        seed=args.seed,
        jobs=args.jobs,
        instance_label=label,
    )
    if args.command == "run-fc":
        delta = args.delta
        if delta is None and args.log_inv_delta is None and args.algo != "blucb_explore":
            raise ValidationError("run-fc needs --delta or --log-inv-delta")
        config = ExperimentConfig(
            delta=delta,
            log_inv_delta=args.log_inv_delta,
            epsilon=args.epsilon,
            kappa=args.kappa,
            reward=args.reward,
            **common,
        )
        return _run(args, config)
    if args.command == "run-fb":
        return _run(args, ExperimentConfig(budget=args.budget, **common))
    raise ValidationError(f"unknown command {args.command}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return dispatch(args)
    except (ValidationError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
