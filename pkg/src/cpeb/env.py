"""Stochastic bandit environment and the learner's empirical state."""

from __future__ import annotations

import csv
import math
from typing import Sequence

import numpy as np

from .model import DomainError, Instance

_BLOCK = 1024


def log_inv(delta: float | None = None, log_inv_delta: float | None = None) -> float:
    """Return ``ln(1/delta)``, taking ``log_inv_delta`` verbatim when given.

    Passing the logarithm directly keeps tiny confidence levels such as
    ``exp(-1000)`` exact in double precision.
    """
    if log_inv_delta is not None:
        if not log_inv_delta > 0:
            raise DomainError("log_inv_delta must be positive")
        return float(log_inv_delta)
    if delta is None:
        raise DomainError("either delta or log_inv_delta is required")
    if not 0 < delta < 1:
        raise DomainError(f"delta must lie in (0, 1), got {delta}")
    return -math.log(delta)


def radius(
    count: int,
    t: int,
    n: int,
    delta: float | None = None,
    R: float = 1.0,
    log_inv_delta: float | None = None,
) -> float:
    """Confidence radius ``R * sqrt(2 ln(4 n t^3 / delta) / count)``."""
    if count < 1:
        raise DomainError("radius needs at least one observation")
    if t < 1:
        raise DomainError("t must be at least 1")
    L = log_inv(delta, log_inv_delta)
    return R * math.sqrt(2.0 * (math.log(4 * n) + 3.0 * math.log(t) + L) / count)


class Environment:
    """Gaussian bandit over an :class:`Instance`.

    Every (stream, arm) pair owns an independent Philox stream keyed by
    ``(seed, stream, arm)``, so the k-th draw of an arm is a fixed function of
    the seed regardless of how pulls are interleaved.  Stream 0 is the default;
    algorithms that run independent sub-learners give each its own stream.
    """

    def __init__(self, instance: Instance, seed: int = 0, record: bool = False):
        self.instance = instance
        self.seed = int(seed)
        self.pull_counter = 0
        self.log: list[tuple[int, int, float]] | None = [] if record else None
        self._means = instance.means
        self._scale = instance.noise_scale
        self._buffers: dict[tuple[int, int], list] = {}

    @property
    def n(self) -> int:
        return self.instance.n

    def _generator(self, stream: int, arm: int) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=(stream, arm))
        return np.random.Generator(np.random.Philox(ss))

    def _normals(self, stream: int, arm: int, count: int) -> list[float]:
        key = (stream, arm)
        buf = self._buffers.get(key)
        if buf is None:
            buf = self._buffers[key] = [self._generator(stream, arm), [], 0]
        gen, values, pos = buf
        out: list[float] = []
        while count > 0:
            if pos == len(values):
                values = buf[1] = gen.standard_normal(_BLOCK).tolist()
                pos = 0
            take = min(count, len(values) - pos)
            out.extend(values[pos:pos + take])
            pos += take
            count -= take
        buf[2] = pos
        return out

    def pull(self, e: int, stream: int = 0) -> float:
        if not 0 <= e < self.n:
            raise DomainError(f"arm {e} out of range [0, {self.n})")
        buf = self._buffers.get((stream, e))
        if buf is not None and buf[2] < len(buf[1]):
            z = buf[1][buf[2]]
            buf[2] += 1
        else:
            z = self._normals(stream, e, 1)[0]
        x = self._means[e] + self._scale * z
        self.pull_counter += 1
        if self.log is not None:
            self.log.append((self.pull_counter, e, x))
        return x

    def pull_many(self, e: int, count: int, stream: int = 0) -> list[float]:
        """Pull arm ``e`` ``count`` times; same draws as ``count`` calls to :meth:`pull`."""
        if not 0 <= e < self.n:
            raise DomainError(f"arm {e} out of range [0, {self.n})")
        if count <= 0:
            return []
        mean, scale = self._means[e], self._scale
        xs = [mean + scale * z for z in self._normals(stream, e, count)]
        if self.log is not None:
            for i, x in enumerate(xs, start=self.pull_counter + 1):
                self.log.append((i, e, x))
        self.pull_counter += count
        return xs


def write_observation_log(path, rows: Sequence[tuple[int, int, int, float]]) -> None:
    """Write ``(trial, t, arm, reward)`` rows as CSV."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["trial", "t", "arm", "reward"])
        for trial, t, arm, reward in rows:
            writer.writerow([trial, t, arm, repr(float(reward))])


class EmpiricalState:
    """Per-learner pull counts, reward sums and confidence bounds.

    ``t`` is the owning algorithm's own round counter; ``log_inv_delta`` is
    ``ln(1/delta)`` for the learner's confidence level.
    """

    def __init__(self, n: int, R: float, log_inv_delta: float):
        self.n = n
        self.R = R
        self.log_inv_delta = log_inv_delta
        self.t = 1
        self.counts = [0] * n
        self.sums = [0.0] * n
        self._log4n = math.log(4 * n)

    def update(self, e: int, x: float) -> None:
        self.counts[e] += 1
        self.sums[e] += x

    @property
    def emp_means(self) -> list[float]:
        return [s / c if c else math.nan for s, c in zip(self.sums, self.counts)]

    def radius(self, e: int) -> float:
        c = self.counts[e]
        if c < 1:
            raise DomainError(f"arm {e} has not been pulled")
        return self.R * math.sqrt(2.0 * self._log_term() / c)

    def _log_term(self) -> float:
        return self._log4n + 3.0 * math.log(self.t) + self.log_inv_delta

    def radii(self) -> list[float]:
        """Radii of all arms; ``inf`` for arms never pulled."""
        scale = self.R * math.sqrt(2.0 * self._log_term())
        sqrt = math.sqrt
        return [scale / sqrt(c) if c else math.inf for c in self.counts]

    def bounds(self) -> tuple[list[float], list[float], list[float]]:
        """Return ``(lcb, ucb, rad)`` for every arm."""
        rad = self.radii()
        means = [s / c for s, c in zip(self.sums, self.counts)]
        lcb = [m - r for m, r in zip(means, rad)]
        ucb = [m + r for m, r in zip(means, rad)]
        return lcb, ucb, rad
