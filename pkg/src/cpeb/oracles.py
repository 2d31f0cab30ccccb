"""Class-generic oracle compositions and brute-force reference answers.

``S(M)`` below denotes the super arms of the class that contain ``M``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .classes import DEFAULT_CAP, DecisionClass, ordinal_key
from .model import DomainError, min_weight, sort_key


@dataclass(frozen=True)
class ArOracleQuery:
    """Query for the best super arm containing ``required`` and avoiding ``rejected``.

    ``required=None`` drops the containment constraint.
    """

    required: int | None
    rejected: frozenset = field(default_factory=frozenset)
    weights: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "rejected", frozenset(self.rejected))
        object.__setattr__(self, "weights", tuple(self.weights))
        if self.required is not None and self.required in self.rejected:
            raise DomainError("required arm is also rejected")


def _better(a, b, v) -> bool:
    """True when super arm ``a`` beats ``b``: higher bottleneck, then smaller sorted tuple."""
    if b is None:
        return True
    wa, wb = min_weight(a, v), min_weight(b, v)
    return wa > wb or (wa == wb and sort_key(a) < sort_key(b))


def max_oracle_excluding(cls: DecisionClass, M_ex: frozenset, v: Sequence[float]):
    """Best super arm outside ``S(M_ex)`` under ``v``, or ``None``.

    Every super arm outside ``S(M_ex)`` misses some arm of ``M_ex``, so the
    answer is the best of the maximizers with one arm of ``M_ex`` removed.
    """
    M_ex = frozenset(M_ex)
    key = None
    if cls.memo_enabled:
        key = ("exc", M_ex, ordinal_key(v))
        hit = cls.memo_get(key)
        if hit is not None:
            return hit[0]
    best = cls._max_excluding(M_ex, v)
    if best is NotImplemented:
        best = _generic_excluding(cls, M_ex, v)
    if key is not None:
        cls.memo_put(key, (best,))
    return best


def _generic_excluding(cls, M_ex, v):
    top = cls.max_oracle(None, v)
    if top is not None and not M_ex <= top:
        best = top
    else:
        best = None
        everything = cls.all_arms
        for e in sorted(M_ex):
            cand = cls.max_oracle(everything - {e}, v)
            if cand is not None and _better(cand, best, v):
                best = cand
    return best


def bottleneck_search(cls: DecisionClass, M_ex: frozenset, v: Sequence[float]) -> frozenset:
    """Arms that are the bottleneck of some super arm outside ``S(M_ex)``.

    For each arm ``e`` the class is restricted to arms weighing at least
    ``v(e)`` and an existence check for ``e`` is run.  When ``e`` is a
    bottleneck of ``M_ex`` itself, the witness must additionally miss some
    other arm of ``M_ex``.
    """
    M_ex = frozenset(M_ex)
    key = None
    if cls.memo_enabled:
        key = ("bs", M_ex, ordinal_key(v))
        hit = cls.memo_get(key)
        if hit is not None:
            return hit
    n = cls.n
    floor = min_weight(M_ex, v)
    order = sorted(range(n), key=lambda a: -v[a])
    out = []
    # arms with weight >= v(e) form a prefix of the descending order
    end = 0
    for pos, e in enumerate(order):
        while end < n and v[order[end]] >= v[e]:
            end += 1
        thr = frozenset(order[:end])
        if e in M_ex and v[e] == floor:
            for e0 in sorted(M_ex - {e}):
                if cls.exist_oracle(thr - {e0}, e) is not None:
                    out.append(e)
                    break
        elif cls.exist_oracle(thr, e) is not None:
            out.append(e)
    result = frozenset(out)
    if key is not None:
        cls.memo_put(key, result)
    return result


def ar_oracle(cls: DecisionClass, q: ArOracleQuery):
    """Best super arm containing ``q.required`` and disjoint from ``q.rejected``.

    Scans weight thresholds from the top and returns the first existence
    witness; since existence is monotone in the threshold the scan is done by
    bisection over the distinct weight levels.  ``inf`` weights rank above
    every finite weight.
    """
    v = q.weights
    key = None
    if cls.memo_enabled:
        key = ("ar", q.required, q.rejected, ordinal_key(v))
        hit = cls.memo_get(key)
        if hit is not None:
            return hit[0]
    allowed = cls.all_arms - q.rejected
    if q.required is None:
        best = cls.max_oracle(allowed, v)
    else:
        e = q.required
        cap = v[e]
        levels = sorted({v[a] for a in allowed if v[a] <= cap}, reverse=True)
        best = None
        lo, hi = 0, len(levels) - 1
        while lo <= hi:
            mid = (lo + hi) // 2
            lam = levels[mid]
            witness = cls.exist_oracle(frozenset(a for a in allowed if v[a] >= lam), e)
            if witness is not None:
                best, hi = witness, mid - 1
            else:
                lo = mid + 1
    if key is not None:
        cls.memo_put(key, (best,))
    return best


# -- brute-force references ----------------------------------------------------


def _best_of(arms_list: Iterable[frozenset], v):
    best = None
    for M in arms_list:
        if _better(M, best, v):
            best = M
    return best


def brute_force_best(cls: DecisionClass, v: Sequence[float], allowed=None, cap: int = DEFAULT_CAP):
    """Exhaustive maximizer of the bottleneck value (ties: smallest sorted tuple)."""
    pool = cls.enumerate(cap)
    if allowed is not None:
        allowed = frozenset(allowed)
        pool = [M for M in pool if M <= allowed]
    return _best_of(pool, v)


def brute_force_excluding(cls: DecisionClass, M_ex, v, cap: int = DEFAULT_CAP):
    M_ex = frozenset(M_ex)
    return _best_of((M for M in cls.enumerate(cap) if not M_ex <= M), v)


def brute_force_exist(cls: DecisionClass, allowed, e: int, cap: int = DEFAULT_CAP):
    """Smallest-sorted super arm inside ``allowed`` that contains ``e``."""
    allowed = cls.all_arms if allowed is None else frozenset(allowed)
    for M in cls.enumerate(cap):
        if e in M and M <= allowed:
            return M
    return None


def brute_force_bottleneck_set(cls: DecisionClass, M_ex, v, cap: int = DEFAULT_CAP) -> frozenset:
    """Every arm that is a minimum-weight arm of some super arm outside ``S(M_ex)``."""
    M_ex = frozenset(M_ex)
    out = set()
    for M in cls.enumerate(cap):
        if M_ex <= M:
            continue
        w = min_weight(M, v)
        out.update(a for a in M if v[a] == w)
    return frozenset(out)


def brute_force_ar(cls: DecisionClass, q: ArOracleQuery, cap: int = DEFAULT_CAP):
    pool = (
        M
        for M in cls.enumerate(cap)
        if not (M & q.rejected) and (q.required is None or q.required in M)
    )
    return _best_of(pool, q.weights)


def satisfies_bottleneck_definition(cls: DecisionClass, M_ex, v, A, cap: int = DEFAULT_CAP) -> bool:
    """Check both defining clauses of a bottleneck-search answer ``A`` by enumeration.

    (i) every super arm outside ``S(M_ex)`` has a minimum-weight arm in ``A``;
    (ii) every arm of ``A`` is a minimum-weight arm of some such super arm.
    """
    M_ex, A = frozenset(M_ex), frozenset(A)
    witnessed = set()
    for M in cls.enumerate(cap):
        if M_ex <= M:
            continue
        w = min_weight(M, v)
        mins = {a for a in M if v[a] == w}
        if not mins & A:
            return False
        witnessed |= mins & A
    return witnessed == A
