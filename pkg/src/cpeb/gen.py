"""LUCB-style identification for general monotone, Lipschitz reward functions.

The maximization oracle is exhaustive enumeration of the decision class, which
is adequate for small classes only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .classes import DEFAULT_CAP, DecisionClass
from .env import EmpiricalState, Environment, log_inv
from .fc import FcResult, Monitor
from .model import ValidationError, min_weight, sort_key


@dataclass(frozen=True)
class RewardFunction:
    """A set function ``f(M, v)`` of super arm ``M`` and weight vector ``v``.

    Attributes:
        name: Registry name.
        evaluate: The function itself.
        lipschitz_U: Constant ``U`` with ``|f(M,v) - f(M,v')| <= U * max_{e in M} |v(e) - v'(e)|``.
        monotone: ``f`` is non-decreasing in every coordinate of ``v``.
        set_decreasing: ``f(M', v) <= f(M, v)`` whenever ``M' ⊇ M``; lets the
            competitor search skip supersets of the current leader.
    """

    name: str
    evaluate: Callable[[frozenset, Sequence[float]], float]
    lipschitz_U: float
    monotone: bool = True
    set_decreasing: bool = False

    def __call__(self, M, v) -> float:
        return self.evaluate(M, v)


def bottleneck_reward() -> RewardFunction:
    return RewardFunction("bottleneck", min_weight, 1.0, set_decreasing=True)


def linear_reward(max_size: int) -> RewardFunction:
    def evaluate(M, v):
        return sum(v[e] for e in M)

    return RewardFunction("linear", evaluate, float(max_size))


def smooth_quadratic(x: float) -> float:
    """Monotone, 2-Lipschitz scalar map that is quadratic on ``[0, 1]`` and linear outside."""
    if x < 0:
        return x
    if x <= 1:
        return x + 0.5 * x * x
    return 2.0 * x - 0.5


def quadratic_reward(max_size: int) -> RewardFunction:
    def evaluate(M, v):
        return sum(smooth_quadratic(v[e]) for e in M)

    return RewardFunction("quadratic", evaluate, 2.0 * max_size)


REWARD_NAMES = ("bottleneck", "linear", "quadratic")


def make_reward(name: str, cls: DecisionClass, cap: int = DEFAULT_CAP) -> RewardFunction:
    """Build a shipped reward function; ``U`` scales with the largest super arm."""
    if name == "bottleneck":
        return bottleneck_reward()
    size = max(len(M) for M in cls.enumerate(cap))
    if name == "linear":
        return linear_reward(size)
    if name == "quadratic":
        return quadratic_reward(size)
    raise ValueError(f"unknown reward function {name!r}; choose from {REWARD_NAMES}")


def _argmax(pool, f, v):
    best, best_val = None, None
    for M in pool:
        x = f(M, v)
        if best is None or x > best_val or (x == best_val and sort_key(M) < sort_key(best)):
            best, best_val = M, x
    return best


def genlucb(
    env: Environment,
    cls: DecisionClass,
    f: RewardFunction,
    delta: float | None = None,
    *,
    log_inv_delta: float | None = None,
    R: float | None = None,
    monitor: Monitor = None,
    cap: int = DEFAULT_CAP,
) -> FcResult:
    """Identify ``argmax_M f(M, w)`` with confidence ``1 - delta``.

    The competitor is searched outside the supersets of the leader when the
    class has no nested super arms or ``f`` is set-decreasing, and outside the
    leader alone otherwise.

    Raises:
        ValidationError: the environment is in exact mode and the optimum of
            ``f`` under the true means is not unique.
    """
    L = log_inv(delta, log_inv_delta)
    pool = cls.enumerate(cap)
    instance = env.instance
    if instance.exact_mode:
        values = [f(M, instance.means) for M in pool]
        if values.count(max(values)) > 1:
            raise ValidationError(f"{f.name} reward has several optimal super arms")
    R = instance.noise_scale if R is None else R
    skip_supersets = cls.antichain or f.set_decreasing
    n = cls.n
    st = EmpiricalState(n, R, L)
    counts = [0] * n
    for e in range(n):
        st.update(e, env.pull(e))
        counts[e] += 1
    st.t = n + 1
    while True:
        lcb, ucb, rad = st.bounds()
        M = _argmax(pool, f, lcb)
        if skip_supersets:
            rivals = [M2 for M2 in pool if not M <= M2]
        else:
            rivals = [M2 for M2 in pool if M2 != M]
        rival = _argmax(rivals, f, ucb)
        if rival is None or f(M, lcb) >= f(rival, ucb):
            if monitor is not None:
                monitor(st, None)
            total = sum(counts)
            return FcResult(M, total, counts, total)
        p = None
        for e in sorted(M | rival):
            if p is None or rad[e] > rad[p]:
                p = e
        if monitor is not None:
            monitor(st, p)
        st.update(p, env.pull(p))
        counts[p] += 1
        st.t += 1
