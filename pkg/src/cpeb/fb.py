"""Fixed-budget algorithms: successive accept-reject (BSAR) and a uniform baseline."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .classes import DecisionClass
from .env import Environment
from .model import INF, DomainError, min_weight
from .oracles import ArOracleQuery, ar_oracle


def harmonic(n: int) -> Fraction:
    return sum((Fraction(1, i) for i in range(1, n + 1)), Fraction(0))


def phase_quotas(n: int, T: int) -> list[int]:
    """Cumulative per-arm sample counts ``[T_0, T_1, ..., T_n]`` with ``T_0 = 0``.

    ``T_t = ceil((T - n) / (H_n (n - t + 1)))`` where ``H_n`` is the n-th
    harmonic number; computed in exact rational arithmetic.
    """
    if T <= n:
        raise DomainError(f"budget T={T} must exceed n={n}")
    h = harmonic(n)
    quotas = [0]
    for t in range(1, n + 1):
        quotas.append(math.ceil(Fraction(T - n) / (h * (n - t + 1))))
    return quotas


@dataclass
class BsarState:
    """Snapshot of a BSAR phase after sampling and before the decision."""

    phase: int
    accepted: frozenset
    rejected: frozenset
    undetermined: frozenset
    quota: int
    working_weights: list[float]
    emp_means: list[float]
    counts: list[int]


@dataclass
class FbResult:
    """Outcome of a fixed-budget run; ``answer`` is ``None`` when the run failed."""

    answer: frozenset | None
    total_pulls: int
    pulls_per_arm: list[int]
    failed: bool = False
    decisions: list[tuple[int, bool]] = field(default_factory=list)


def _gap(top: float, rival) -> float:
    if rival is None:
        return INF
    if top == rival:
        return 0.0
    return top - rival


def bsar(
    env: Environment,
    cls: DecisionClass,
    T: int,
    *,
    monitor: Optional[Callable[[BsarState], None]] = None,
) -> FbResult:
    """Run successive accept-reject with infinite working weights on accepted arms.

    Phase ``t`` tops every undetermined arm up to the cumulative quota
    ``T_t`` (ascending arm order), then accepts or rejects the arm with the
    largest empirical gap.  Accepted arms get weight ``+inf`` so that later
    oracle calls keep them.  The answer is the accepted set after ``n`` phases.
    """
    n = cls.n
    quotas = phase_quotas(n, T)
    counts = [0] * n
    sums = [0.0] * n
    accepted: set[int] = set()
    rejected: set[int] = set()
    decisions: list[tuple[int, bool]] = []

    for t in range(1, n + 1):
        U = [e for e in range(n) if e not in accepted and e not in rejected]
        extra = quotas[t] - quotas[t - 1]
        for e in U:
            if extra > 0:
                sums[e] += sum(env.pull_many(e, extra))
                counts[e] += extra
        emp = [s / c if c else 0.0 for s, c in zip(sums, counts)]
        w = [INF if e in accepted else emp[e] for e in range(n)]
        R_t = frozenset(rejected)
        if monitor is not None:
            monitor(
                BsarState(t, frozenset(accepted), R_t, frozenset(U), quotas[t], list(w), emp, list(counts))
            )
        M = ar_oracle(cls, ArOracleQuery(None, R_t, w))
        if M is None:
            return FbResult(None, sum(counts), counts, True, decisions)
        top = min_weight(M, w)
        best_e, best_gap = None, None
        for e in U:
            if e in M:
                rival = ar_oracle(cls, ArOracleQuery(None, R_t | {e}, w))
            else:
                rival = ar_oracle(cls, ArOracleQuery(e, R_t, w))
            gap = _gap(top, None if rival is None else min_weight(rival, w))
            if best_gap is None or gap > best_gap:
                best_e, best_gap = e, gap
        if best_e in M:
            accepted.add(best_e)
        else:
            rejected.add(best_e)
        decisions.append((best_e, best_e in M))

    return FbResult(frozenset(accepted), sum(counts), counts, False, decisions)


def uniform_fb(env: Environment, cls: DecisionClass, T: int) -> FbResult:
    """Pull every arm ``floor(T / n)`` times and return the empirical maximizer."""
    n = cls.n
    if T < n:
        raise DomainError(f"budget T={T} must be at least n={n}")
    per_arm = T // n
    emp = [sum(env.pull_many(e, per_arm)) / per_arm for e in range(n)]
    answer = cls.max_oracle(None, emp)
    return FbResult(answer, per_arm * n, [per_arm] * n, answer is None)
