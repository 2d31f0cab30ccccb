"""Fixed-confidence algorithms.

Each learner is written as a generator that yields the arm it wants to pull
and receives the observed reward through ``send``; this lets
:func:`blucb_parallel` interleave many learners one sample at a time.  The
``run_*`` helpers drive a single learner against an :class:`Environment`.

Every algorithm accepts an optional ``monitor(state, arm)`` callback, invoked
with the learner's :class:`EmpiricalState` right before each adaptive pull
(``arm`` is the arm about to be pulled) and once at termination
(``arm is None``).  It is meant for diagnostics such as checking concentration
events against true means.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Generator, Optional

from .classes import DecisionClass
from .env import EmpiricalState, Environment, log_inv
from .model import min_arm, min_weight
from .oracles import bottleneck_search, max_oracle_excluding

Monitor = Optional[Callable[[EmpiricalState, Optional[int]], None]]
Learner = Generator[int, float, object]

EXPLORE_KAPPA = 0.01


@dataclass
class FcResult:
    """Outcome of a fixed-confidence run.

    ``total_pulls`` counts every pull, initialization included.
    ``sub_algorithm_trace`` holds, for the parallel scheme only, how many
    samples each sub-learner ``k`` consumed.
    """

    answer: frozenset
    total_pulls: int
    pulls_per_arm: list[int]
    wall_steps: int
    sub_algorithm_trace: list[int] | None = None


@dataclass
class ExploreResult:
    hypothesized_best: frozenset
    near_bottleneck_set: frozenset
    pulls_per_arm: list[int] = field(default_factory=list)

    @property
    def total_pulls(self) -> int:
        return sum(self.pulls_per_arm)


def _argmax_radius(arms, rad) -> int:
    best = None
    for e in sorted(arms):
        if best is None or rad[e] > rad[best]:
            best = e
    return best


def _initialize(state: EmpiricalState):
    for e in range(state.n):
        x = yield e
        state.update(e, x)
    state.t = state.n + 1


def _advance(state: EmpiricalState, e: int, monitor: Monitor):
    if monitor is not None:
        monitor(state, e)
    x = yield e
    state.update(e, x)
    state.t += 1


def blucb_learner(
    cls: DecisionClass,
    R: float,
    log_inv_delta: float,
    epsilon: float = 0.0,
    monitor: Monitor = None,
) -> Learner:
    """Bottleneck-adaptive LUCB; returns the identified super arm."""
    st = EmpiricalState(cls.n, R, log_inv_delta)
    yield from _initialize(st)
    while True:
        lcb, ucb, rad = st.bounds()
        M = cls.max_oracle(None, lcb)
        rival = max_oracle_excluding(cls, M, ucb)
        if rival is None or min_weight(M, lcb) >= min_weight(rival, ucb) - epsilon:
            if monitor is not None:
                monitor(st, None)
            return M
        c = min_arm(M, lcb)
        # d is the lcb-bottleneck of the rival even though the rival was chosen under ucb
        d = min_arm(rival, lcb)
        p = _argmax_radius((c, d), rad)
        yield from _advance(st, p, monitor)


def explore_learner(
    cls: DecisionClass,
    R: float,
    kappa: float = EXPLORE_KAPPA,
    monitor: Monitor = None,
) -> Learner:
    """Explore phase; returns ``(hypothesized_best, near_bottleneck_set)``."""
    st = EmpiricalState(cls.n, R, log_inv(kappa))
    yield from _initialize(st)
    while True:
        lcb, ucb, rad = st.bounds()
        M = cls.max_oracle(None, lcb)
        B = bottleneck_search(cls, M, lcb)
        floor = min_weight(M, lcb)
        violators = [e for e in B if ucb[e] > 0.5 * (floor + lcb[e])]
        if not violators:
            if monitor is not None:
                monitor(st, None)
            return M, B
        c = min_arm(M, lcb)
        p = _argmax_radius(set(violators) | {c}, rad)
        yield from _advance(st, p, monitor)


def verify_learner(
    cls: DecisionClass,
    R: float,
    log_inv_delta: float,
    epsilon: float = 0.0,
    monitor: Monitor = None,
    explore_monitor: Monitor = None,
) -> Learner:
    """Explore with constant confidence, then verify the guess at the target confidence."""
    M_hat, B_hat = yield from explore_learner(cls, R, EXPLORE_KAPPA, explore_monitor)
    st = EmpiricalState(cls.n, R, log_inv_delta)
    yield from _initialize(st)
    while True:
        lcb, ucb, rad = st.bounds()
        rival = max_oracle_excluding(cls, M_hat, ucb)
        if rival is None or min_weight(M_hat, lcb) >= min_weight(rival, ucb) - epsilon:
            if monitor is not None:
                monitor(st, None)
            return M_hat
        c = min_arm(M_hat, lcb)
        F = [e for e in B_hat if ucb[e] > lcb[c]]
        p = _argmax_radius(set(F) | {c}, rad)
        yield from _advance(st, p, monitor)


def uniform_learner(
    cls: DecisionClass,
    R: float,
    log_inv_delta: float,
    epsilon: float = 0.0,
    monitor: Monitor = None,
) -> Learner:
    """Round-robin baseline: every round pulls all arms once."""
    st = EmpiricalState(cls.n, R, log_inv_delta)
    st.t = 0
    while True:
        st.t += 1
        for e in range(cls.n):
            x = yield e
            st.update(e, x)
        lcb, ucb, _ = st.bounds()
        if monitor is not None:
            monitor(st, None)
        M = cls.max_oracle(None, lcb)
        rival = max_oracle_excluding(cls, M, ucb)
        if rival is None or min_weight(M, lcb) >= min_weight(rival, ucb) - epsilon:
            return M


def drive(learner: Learner, env: Environment, stream: int = 0):
    """Run ``learner`` to completion; return ``(answer, pulls_per_arm)``."""
    counts = [0] * env.n
    pull = env.pull
    try:
        e = next(learner)
        while True:
            counts[e] += 1
            e = learner.send(pull(e, stream))
    except StopIteration as stop:
        return stop.value, counts


def _resolve(delta, log_inv_delta) -> float:
    return log_inv(delta, log_inv_delta)


def _check_epsilon(epsilon: float) -> None:
    if not epsilon >= 0:
        raise ValueError("epsilon must be non-negative")


def _R(env: Environment, R: float | None) -> float:
    return env.instance.noise_scale if R is None else R


def blucb(
    env: Environment,
    cls: DecisionClass,
    delta: float | None = None,
    epsilon: float = 0.0,
    *,
    log_inv_delta: float | None = None,
    R: float | None = None,
    monitor: Monitor = None,
) -> FcResult:
    """Run BLUCB; ``epsilon > 0`` accepts any ``epsilon``-optimal super arm.

    ``R`` defaults to the environment's noise scale.
    """
    L = _resolve(delta, log_inv_delta)
    _check_epsilon(epsilon)
    answer, counts = drive(blucb_learner(cls, _R(env, R), L, epsilon, monitor), env)
    total = sum(counts)
    return FcResult(answer, total, counts, total)


def blucb_explore(
    env: Environment,
    cls: DecisionClass,
    kappa: float = EXPLORE_KAPPA,
    *,
    R: float | None = None,
    monitor: Monitor = None,
) -> ExploreResult:
    if not 0 < kappa < 1:
        raise ValueError("kappa must lie in (0, 1)")
    (M, B), counts = drive(explore_learner(cls, _R(env, R), kappa, monitor), env)
    return ExploreResult(M, B, counts)


def blucb_verify(
    env: Environment,
    cls: DecisionClass,
    delta_v: float | None = None,
    epsilon: float = 0.0,
    *,
    log_inv_delta: float | None = None,
    R: float | None = None,
    monitor: Monitor = None,
) -> FcResult:
    """Run a single explore-then-verify learner; the answer is ``result.answer``."""
    L = _resolve(delta_v, log_inv_delta)
    _check_epsilon(epsilon)
    if L < math.log(100):
        warnings.warn("verification is analysed for delta_v < 0.01", stacklevel=2)
    answer, counts = drive(verify_learner(cls, _R(env, R), L, epsilon, monitor), env)
    total = sum(counts)
    return FcResult(answer, total, counts, total)


def blucb_parallel(
    env: Environment,
    cls: DecisionClass,
    delta: float | None = None,
    epsilon: float = 0.0,
    *,
    log_inv_delta: float | None = None,
    R: float | None = None,
    max_steps: int | None = None,
) -> FcResult:
    """Interleave verify learners ``k = 0, 1, ...`` at confidence ``delta / 2^(k+1)``.

    At global step ``t`` every learner ``k`` with ``t mod 2^k == 0`` receives
    exactly one sample; learners are created on their first turn and draw from
    their own random stream ``k + 1``.  The first learner to finish supplies
    the answer.  ``max_steps`` (testing aid) stops the schedule early, in which
    case ``answer`` is ``None``.
    """
    L = _resolve(delta, log_inv_delta)
    _check_epsilon(epsilon)
    if L < math.log(100):
        warnings.warn("the parallel scheme is analysed for delta < 0.01", stacklevel=2)
    R = _R(env, R)
    ln2 = math.log(2.0)
    learners: list = []
    pending: list[int] = []
    trace: list[int] = []
    counts = [0] * env.n
    t = 0
    while max_steps is None or t < max_steps:
        t += 1
        k = 0
        while t % (1 << k) == 0:
            if k == len(learners):
                g = verify_learner(cls, R, L + (k + 1) * ln2, epsilon)
                learners.append(g)
                pending.append(next(g))
                trace.append(0)
            e = pending[k]
            counts[e] += 1
            trace[k] += 1
            try:
                pending[k] = learners[k].send(env.pull(e, k + 1))
            except StopIteration as stop:
                for g in learners:
                    g.close()
                return FcResult(stop.value, sum(counts), counts, t, trace)
            k += 1
    for g in learners:
        g.close()
    return FcResult(None, sum(counts), counts, t, trace)


def uniform_fc(
    env: Environment,
    cls: DecisionClass,
    delta: float | None = None,
    epsilon: float = 0.0,
    *,
    log_inv_delta: float | None = None,
    R: float | None = None,
    monitor: Monitor = None,
) -> FcResult:
    L = _resolve(delta, log_inv_delta)
    _check_epsilon(epsilon)
    answer, counts = drive(uniform_learner(cls, _R(env, R), L, epsilon, monitor), env)
    total = sum(counts)
    return FcResult(answer, total, counts, total)
