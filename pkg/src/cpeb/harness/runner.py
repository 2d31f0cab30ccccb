"""Batch experiment runner: seeded trials, CSV records and a JSON summary."""

from __future__ import annotations

import csv
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from ..analysis import compute_gap_profile
from ..env import Environment, log_inv, write_observation_log
from ..fb import bsar, uniform_fb
from ..fc import blucb, blucb_explore, blucb_parallel, blucb_verify, uniform_fc
from ..gen import genlucb, make_reward
from ..model import DomainError, Instance, ValidationError

FC_ALGOS = ("blucb", "blucb_parallel", "blucb_verify", "blucb_explore", "uniform_fc", "genlucb")
FB_ALGOS = ("bsar", "uniform_fb")


@dataclass
class ExperimentConfig:
    """Everything needed to reproduce a batch of trials.

    ``delta``/``log_inv_delta`` apply to fixed-confidence algorithms and
    ``budget`` to fixed-budget ones.  Trial ``i`` uses seed ``seed + i``.
    """

    instance: Instance
    algo: str
    delta: Optional[float] = None
    log_inv_delta: Optional[float] = None
    epsilon: float = 0.0
    kappa: float = 0.01
    budget: Optional[int] = None
    reward: str = "bottleneck"
    trials: int = 1
    seed: int = 0
    jobs: int = 1
    instance_label: str = ""
    record_observations: bool = False

    def validate(self) -> None:
        if self.trials < 1:
            raise ValidationError("trials must be at least 1")
        if self.algo in FC_ALGOS:
            if self.algo != "blucb_explore":
                try:
                    log_inv(self.delta, self.log_inv_delta)
                except DomainError as exc:
                    raise ValidationError(str(exc)) from None
            if self.epsilon < 0:
                raise ValidationError("epsilon must be non-negative")
        elif self.algo in FB_ALGOS:
            if self.budget is None:
                raise ValidationError(f"{self.algo} needs a budget")
            if self.budget <= self.instance.n - (self.algo == "uniform_fb"):
                raise ValidationError(f"budget {self.budget} too small for n={self.instance.n}")
        else:
            raise ValidationError(f"unknown algorithm {self.algo!r}")


@dataclass
class TrialRecord:
    trial: int
    seed: int
    answer: Optional[frozenset]
    correct: bool
    total_pulls: int
    pulls_per_arm: list[int]
    pulls_on_ntilde: int
    wall_time_ms: float = 0.0
    error: str = ""
    observations: list = field(default_factory=list, repr=False)


class TrialRunner:
    """Runs single trials of one configuration; built once per worker process."""

    def __init__(self, config: ExperimentConfig):
        self.config = config
        self.instance = config.instance
        self.cls = self.instance.decision_class()
        self.profile = compute_gap_profile(self.instance, self.cls)
        self.reward = make_reward(config.reward, self.cls) if config.algo == "genlucb" else None

    def _run(self, env: Environment):
        c, cls = self.config, self.cls
        fc = dict(log_inv_delta=log_inv(c.delta, c.log_inv_delta)) if c.algo in FC_ALGOS and c.algo != "blucb_explore" else {}
        if c.algo == "blucb":
            r = blucb(env, cls, epsilon=c.epsilon, **fc)
        elif c.algo == "blucb_parallel":
            r = blucb_parallel(env, cls, epsilon=c.epsilon, **fc)
        elif c.algo == "blucb_verify":
            r = blucb_verify(env, cls, epsilon=c.epsilon, **fc)
        elif c.algo == "uniform_fc":
            r = uniform_fc(env, cls, epsilon=c.epsilon, **fc)
        elif c.algo == "genlucb":
            r = genlucb(env, cls, self.reward, **fc)
        elif c.algo == "blucb_explore":
            e = blucb_explore(env, cls, c.kappa)
            return e.hypothesized_best, e.pulls_per_arm, ""
        elif c.algo == "bsar":
            r = bsar(env, cls, c.budget)
            return r.answer, r.pulls_per_arm, "no feasible super arm remained" if r.failed else ""
        elif c.algo == "uniform_fb":
            r = uniform_fb(env, cls, c.budget)
            return r.answer, r.pulls_per_arm, ""
        else:
            raise ValidationError(f"unknown algorithm {c.algo!r}")
        return r.answer, r.pulls_per_arm, ""

    def __call__(self, i: int) -> TrialRecord:
        seed = self.config.seed + i
        env = Environment(self.instance, seed, record=self.config.record_observations)
        start = time.perf_counter()
        try:
            answer, pulls, error = self._run(env)
        except Exception as exc:  # recorded per trial, not fatal
            answer, pulls, error = None, [0] * self.instance.n, f"{type(exc).__name__}: {exc}"
        elapsed = 1000.0 * (time.perf_counter() - start)
        ntilde = self.profile.n_tilde
        return TrialRecord(
            trial=i,
            seed=seed,
            answer=answer,
            correct=answer is not None and answer == self.profile.m_star,
            total_pulls=int(sum(pulls)),
            pulls_per_arm=list(pulls),
            pulls_on_ntilde=int(sum(pulls[e] for e in ntilde)),
            wall_time_ms=elapsed,
            error=error,
            observations=[(i, t, a, x) for t, a, x in env.log] if env.log is not None else [],
        )


_WORKER: TrialRunner | None = None


def _init_worker(config: ExperimentConfig) -> None:
    global _WORKER
    _WORKER = TrialRunner(config)


def _work(i: int) -> TrialRecord:
    return _WORKER(i)


def run_trials(config: ExperimentConfig) -> list[TrialRecord]:
    """Execute all trials, returned in trial order regardless of parallelism."""
    config.validate()
    if config.jobs <= 1 or config.trials == 1:
        runner = TrialRunner(config)
        return [runner(i) for i in range(config.trials)]
    with ProcessPoolExecutor(config.jobs, initializer=_init_worker, initargs=(config,)) as pool:
        return list(pool.map(_work, range(config.trials), chunksize=max(1, config.trials // (4 * config.jobs))))


def summarize(records: list[TrialRecord], config: ExperimentConfig | None = None) -> dict:
    pulls = np.array([r.total_pulls for r in records], dtype=float)
    N = len(records)
    mean = float(pulls.mean())
    std = float(pulls.std(ddof=1)) if N > 1 else 0.0
    half = 1.96 * std / math.sqrt(N)
    out = {
        "trials": N,
        "mean_pulls": mean,
        "std_pulls": std,
        "ci95": [mean - half, mean + half],
        "error_rate": sum(not r.correct for r in records) / N,
        "mean_pulls_on_ntilde": float(np.mean([r.pulls_on_ntilde for r in records])),
        "failed_trials": sum(bool(r.error) for r in records),
    }
    if config is not None:
        out = {
            "algo": config.algo,
            "instance": config.instance_label,
            "delta": config.delta,
            "log_inv_delta": config.log_inv_delta,
            "epsilon": config.epsilon,
            "budget": config.budget,
            "seed": config.seed,
            **out,
        }
    return out


def _arms(arms) -> str:
    return "" if arms is None else " ".join(str(a) for a in sorted(arms))


def write_csv(path, records: list[TrialRecord], timing: bool = False) -> None:
    """Write trial records; wall time is included only when ``timing`` is set."""
    header = ["trial", "seed", "answer", "correct", "total_pulls", "pulls_on_ntilde", "pulls_per_arm", "error"]
    if timing:
        header.append("wall_time_ms")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for r in records:
            row = [
                r.trial,
                r.seed,
                _arms(r.answer),
                int(r.correct),
                r.total_pulls,
                r.pulls_on_ntilde,
                " ".join(map(str, r.pulls_per_arm)),
                r.error,
            ]
            if timing:
                row.append(f"{r.wall_time_ms:.3f}")
            writer.writerow(row)


def run_experiment(config: ExperimentConfig, out: str | Path | None = None, timing: bool = False, obs_log=None):
    """Run ``config`` and optionally write ``<out>.csv`` and ``<out>.json``.

    Returns ``(records, summary)``.
    """
    if obs_log is not None:
        config.record_observations = True
    records = run_trials(config)
    summary = summarize(records, config)
    if out is not None:
        out = Path(out)
        out.parent.mkdir(parents=True, exist_ok=True)
        write_csv(out.with_suffix(".csv"), records, timing)
        out.with_suffix(".json").write_text(json.dumps(summary, indent=2) + "\n")
    if obs_log is not None:
        write_observation_log(obs_log, [row for r in records for row in r.observations])
    return records, summary
