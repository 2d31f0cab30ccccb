"""Gaps, arm partition and hardness measures computed from the true means."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .classes import CapacityError, DecisionClass
from .env import EmpiricalState
from .model import Instance, ValidationError, min_weight, sort_key
from .oracles import ArOracleQuery, ar_oracle, max_oracle_excluding

IN_M_STAR = "InMStar"
NECESSARY = "N"
UNNECESSARY = "NTilde"


@dataclass
class GapProfile:
    """Per-arm gaps and hardness scalars of an instance.

    ``delta_c`` and ``delta_b`` hold ``nan`` for arms that belong to no super
    arm; such arms are tagged ``NTilde`` and left out of every hardness sum.
    """

    m_star: frozenset
    opt: float
    delta_c: list[float]
    delta_b: list[float]
    partition: list[str]
    h_v: float
    h_e: float
    h_b: float

    @property
    def n_tilde(self) -> frozenset:
        return frozenset(e for e, tag in enumerate(self.partition) if tag == UNNECESSARY)

    @property
    def necessary(self) -> frozenset:
        return frozenset(e for e, tag in enumerate(self.partition) if tag == NECESSARY)

    def to_json(self) -> dict:
        def num(x):
            return None if math.isnan(x) else ("inf" if math.isinf(x) else x)

        return {
            "m_star": sorted(self.m_star),
            "opt": self.opt,
            "delta_c": [num(x) for x in self.delta_c],
            "delta_b": [num(x) for x in self.delta_b],
            "partition": list(self.partition),
            "h_v": self.h_v,
            "h_e": self.h_e,
            "h_b": self.h_b,
        }


def validate_unique_optimum(instance: Instance, cls: DecisionClass | None = None, cap: int = 10**6):
    """Return ``(ok, message)``; ``ok`` is True iff exactly one super arm attains OPT.

    Classes too large to enumerate are checked with the oracles instead: the
    optimum is unique iff the best super arm outside ``S(M*)`` is strictly
    worse, which is exact for classes without nested super arms.
    """
    cls = cls or instance.decision_class()
    w = instance.means
    try:
        pool = cls.enumerate(cap)
    except CapacityError:
        best = cls.max_oracle(None, w)
        rival = max_oracle_excluding(cls, best, w)
        if rival is not None and min_weight(rival, w) >= min_weight(best, w):
            return False, f"super arms {sort_key(best)} and {sort_key(rival)} tie at the optimum"
        return True, "unique optimum (oracle check)"
    values = [min_weight(M, w) for M in pool]
    opt = max(values)
    tops = [M for M, x in zip(pool, values) if x == opt]
    if len(tops) > 1:
        shown = ", ".join(str(sort_key(M)) for M in tops[:3])
        return False, f"{len(tops)} super arms attain the optimum {opt}: {shown}"
    return True, f"unique optimum {sort_key(tops[0])} with value {opt}"


def compute_gap_profile(instance: Instance, cls: DecisionClass | None = None) -> GapProfile:
    cls = cls or instance.decision_class()
    ok, msg = validate_unique_optimum(instance, cls)
    if not ok:
        raise ValidationError(msg)
    w = list(instance.means)
    n = cls.n
    m_star = cls.max_oracle(None, w)
    opt = min_weight(m_star, w)
    second = max_oracle_excluding(cls, m_star, w)
    second_val = -math.inf if second is None else min_weight(second, w)

    delta_c = [math.nan] * n
    delta_b = [math.nan] * n
    partition = [UNNECESSARY] * n
    for e in range(n):
        if e in m_star:
            partition[e] = IN_M_STAR
            delta_c[e] = w[e] - second_val
            without = ar_oracle(cls, ArOracleQuery(None, frozenset({e}), w))
            delta_b[e] = opt - (-math.inf if without is None else min_weight(without, w))
            continue
        best_with = ar_oracle(cls, ArOracleQuery(e, frozenset(), w))
        if best_with is None:
            continue
        top = min_weight(best_with, w)
        delta_b[e] = opt - top
        if w[e] < opt:
            partition[e] = NECESSARY
            delta_c[e] = opt - top
        else:
            delta_c[e] = w[e] - top

    R2 = instance.noise_scale**2

    def inv_sq(x):
        return R2 / (x * x)

    h_v = sum(inv_sq(delta_c[e]) for e in range(n) if partition[e] in (IN_M_STAR, NECESSARY))
    h_e = sum(inv_sq(delta_c[e]) for e in range(n) if not math.isnan(delta_c[e]))
    ordered = sorted(x for x in delta_b if not math.isnan(x))
    h_b = max((i / (x * x) for i, x in enumerate(ordered, start=1)), default=0.0)
    return GapProfile(m_star, opt, delta_c, delta_b, partition, h_v, h_e, h_b)


def within_confidence(state: EmpiricalState, means: Sequence[float]) -> bool:
    """True when every pulled arm's empirical mean is strictly inside its radius."""
    rad = state.radii()
    for e, (s, c) in enumerate(zip(state.sums, state.counts)):
        if c and not abs(s / c - means[e]) < rad[e]:
            return False
    return True


def near_bottleneck_property(cls: DecisionClass, means: Sequence[float], m_hat, b_hat, cap: int = 10**6) -> bool:
    """Check an explore answer against the true means.

    Holds when ``m_hat`` is the optimum and every other super arm ``M``
    contains an arm ``e`` of ``b_hat`` with ``w(e) <= (OPT + MinW(M)) / 2``.
    """
    m_hat, b_hat = frozenset(m_hat), frozenset(b_hat)
    pool = cls.enumerate(cap)
    values = {M: min_weight(M, means) for M in pool}
    m_star = max(pool, key=values.__getitem__)
    if m_hat != m_star:
        return False
    opt = values[m_star]
    for M in pool:
        if M == m_star:
            continue
        bound = 0.5 * (opt + values[M])
        if not any(means[e] <= bound for e in M & b_hat):
            return False
    return True
