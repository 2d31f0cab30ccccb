"""Randomized cross-check of the fast oracles against exhaustive enumeration."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..model import KINDS, min_weight
from ..oracles import (
    ArOracleQuery,
    ar_oracle,
    bottleneck_search,
    brute_force_ar,
    brute_force_best,
    brute_force_excluding,
    brute_force_exist,
    max_oracle_excluding,
    satisfies_bottleneck_definition,
)
from .generators import random_small_instance


@dataclass
class OracleCheckReport:
    instances: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def _value(M, v):
    return None if M is None else min_weight(M, v)


def check_instance(instance, rng: np.random.Generator) -> list[str]:
    """Compare every oracle with brute force on one instance; return failure messages."""
    cls = instance.decision_class()
    v = list(instance.means)
    n = cls.n
    problems = []
    pool = cls.enumerate()

    def fail(what):
        problems.append(f"{instance.class_spec.kind} {instance.to_json()}: {what}")

    got = cls.max_oracle(None, v)
    if got is None or not cls.is_feasible(got) or _value(got, v) != _value(brute_force_best(cls, v), v):
        fail(f"max_oracle returned {got}")

    allowed = frozenset(int(a) for a in np.flatnonzero(rng.random(n) < 0.7))
    got = cls.max_oracle(allowed, v)
    ref = brute_force_best(cls, v, allowed)
    if (got is None) != (ref is None) or (got is not None and (not got <= allowed or _value(got, v) != _value(ref, v))):
        fail(f"restricted max_oracle over {sorted(allowed)} returned {got}")

    for e in sorted(allowed):
        got = cls.exist_oracle(allowed, e)
        ref = brute_force_exist(cls, allowed, e)
        if (got is None) != (ref is None) or (got is not None and not (e in got and got <= allowed and cls.is_feasible(got))):
            fail(f"exist_oracle({sorted(allowed)}, {e}) returned {got}")

    M_ex = pool[int(rng.integers(len(pool)))]
    got = max_oracle_excluding(cls, M_ex, v)
    ref = brute_force_excluding(cls, M_ex, v)
    if (got is None) != (ref is None) or (got is not None and (M_ex <= got or not cls.is_feasible(got) or _value(got, v) != _value(ref, v))):
        fail(f"max_oracle_excluding({sorted(M_ex)}) returned {got}")

    B = bottleneck_search(cls, M_ex, v)
    if not satisfies_bottleneck_definition(cls, M_ex, v, B):
        fail(f"bottleneck_search({sorted(M_ex)}) returned {sorted(B)}")

    w = list(v)
    for a in np.flatnonzero(rng.random(n) < 0.25):
        w[int(a)] = float("inf")
    rejected = frozenset(int(a) for a in np.flatnonzero(rng.random(n) < 0.25))
    free = [a for a in range(n) if a not in rejected]
    choices = [None] + free
    required = choices[int(rng.integers(len(choices)))]
    q = ArOracleQuery(required, rejected, w)
    got = ar_oracle(cls, q)
    ref = brute_force_ar(cls, q)
    if (got is None) != (ref is None) or (
        got is not None
        and (got & rejected or not cls.is_feasible(got) or (required is not None and required not in got) or _value(got, w) != _value(ref, w))
    ):
        fail(f"ar_oracle({required}, {sorted(rejected)}) returned {got}")
    return problems


def run_oracle_check(per_kind: int = 1000, seed: int = 0, kinds=KINDS) -> OracleCheckReport:
    report = OracleCheckReport()
    rng = np.random.default_rng(seed)
    for kind in kinds:
        for _ in range(per_kind):
            inst = random_small_instance(kind, rng)
            report.failures += check_instance(inst, rng)
        report.instances[kind] = per_kind
    return report
