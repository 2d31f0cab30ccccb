"""Problem representation: instances, super arms and the bottleneck reward.

Arm indices are 0-based everywhere, including on disk.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

SuperArm = frozenset
"""A super arm is a ``frozenset`` of base-arm indices."""

INF = math.inf

KINDS = ("TopK", "STPath", "BipartiteMatching", "SpanningTree")


class DomainError(ValueError):
    """Raised when an operation receives an argument outside its domain."""


class ValidationError(ValueError):
    """Raised when an instance violates a modelling assumption."""


def as_super_arm(arms: Iterable[int]) -> frozenset[int]:
    return frozenset(int(a) for a in arms)


def sort_key(arms: Iterable[int]) -> tuple[int, ...]:
    """Canonical ordering key for super arms (sorted arm-index tuple)."""
    return tuple(sorted(arms))


def min_weight(arms: Iterable[int], v: Sequence[float]) -> float:
    """Bottleneck value of ``arms`` under weights ``v``.

    ``math.inf`` entries are allowed and compare above every finite value.
    """
    best = None
    for a in arms:
        x = v[a]
        if best is None or x < best:
            best = x
    if best is None:
        raise DomainError("min_weight of an empty arm set")
    return best


def min_arm(arms: Iterable[int], v: Sequence[float]) -> int:
    """Arm attaining :func:`min_weight`; ties go to the smallest index."""
    best_arm = None
    for a in sorted(arms):
        if best_arm is None or v[a] < v[best_arm]:
            best_arm = a
    if best_arm is None:
        raise DomainError("min_arm of an empty arm set")
    return best_arm


@dataclass(frozen=True)
class DecisionClassSpec:
    """Serializable description of a decision class.

    ``params`` holds the kind-specific payload:

    * ``TopK``: ``{"k": int}``
    * ``STPath``: ``{"edges": [[u, v], ...], "s": s, "t": t}``
    * ``BipartiteMatching``: ``{"edges": [[left, right], ...]}``
    * ``SpanningTree``: ``{"edges": [[u, v], ...]}``

    Edge ``i`` of an edge list is labelled by arm ``i`` unless the entry is a
    triple ``[u, v, arm]``.
    """

    kind: str
    params: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown decision class kind {self.kind!r}")

    def to_json(self) -> dict:
        return {"kind": self.kind, **_jsonable(dict(self.params))}

    @classmethod
    def from_json(cls, obj: Mapping[str, Any]) -> "DecisionClassSpec":
        obj = dict(obj)
        kind = obj.pop("kind")
        return cls(kind, obj)


@dataclass(frozen=True)
class Instance:
    """Ground truth of a simulation: true means, noise scale and class."""

    n: int
    means: tuple[float, ...]
    noise_scale: float
    class_spec: DecisionClassSpec
    exact_mode: bool = True

    def __post_init__(self):
        means = tuple(float(x) for x in self.means)
        object.__setattr__(self, "means", means)
        if self.n <= 0:
            raise ValidationError("n must be positive")
        if len(means) != self.n:
            raise ValidationError(f"expected {self.n} means, got {len(means)}")
        if not all(math.isfinite(x) for x in means):
            raise ValidationError("means must be finite")
        if not self.noise_scale >= 0:
            raise ValidationError("noise_scale must be non-negative")

    def decision_class(self):
        from .classes import build_class

        return build_class(self.class_spec, self.n)

    def with_means(self, means: Sequence[float]) -> "Instance":
        return Instance(self.n, tuple(means), self.noise_scale, self.class_spec, self.exact_mode)

    def with_noise(self, noise_scale: float) -> "Instance":
        return Instance(self.n, self.means, noise_scale, self.class_spec, self.exact_mode)

    def to_json(self) -> dict:
        out = {
            "n": self.n,
            "means": list(self.means),
            "noise_scale": self.noise_scale,
            "class": self.class_spec.to_json(),
        }
        if not self.exact_mode:
            out["exact_mode"] = False
        return out

    @classmethod
    def from_json(cls, obj: Mapping[str, Any]) -> "Instance":
        try:
            return cls(
                n=int(obj["n"]),
                means=tuple(obj["means"]),
                noise_scale=float(obj["noise_scale"]),
                class_spec=DecisionClassSpec.from_json(obj["class"]),
                exact_mode=bool(obj.get("exact_mode", True)),
            )
        except KeyError as exc:
            raise ValidationError(f"instance JSON is missing field {exc}") from None

    def dump(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=2) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "Instance":
        return cls.from_json(json.loads(Path(path).read_text()))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj
