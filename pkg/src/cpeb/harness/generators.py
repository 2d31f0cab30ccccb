"""Named instance generators.

Weight tables (arms are 0-based, ``d`` is the gap parameter):

``diamond``
    s-a (0), a-t (1), s-b (2), b-t (3) with means 1.0, 0.9, 0.8, 0.5.
    Optimal path {0, 1} with value 0.9.

``path(d)``
    s-v1-v2-v3 followed by a 12-edge segment v3 to t forms the optimal path
    (arms 0..14, weights 2d, 3d, ..., 16d in order from s).  Five further
    v3-t branches of 14 edges each (arms 15..84) weigh ``d`` throughout.
    OPT = 2d and every competing path has bottleneck d.

``matching(d)``
    Complete bipartite L0..L4 x R0..R2, arms in (left, right) order.  The
    optimal matching L0-R0, L1-R1, L2-R2 weighs 0.1+14d, 0.1+13d, 0.1+12d; the
    remaining 12 edges weigh 0.1, 0.1+d, ..., 0.1+11d in arm order.
    OPT = 0.1+12d.

``air_route``
    Nine flights between LA, Chicago, Denver, Dallas, Houston and Atlanta with
    synthetic seat counts in [0.62, 1.84]; the best LA-Atlanta route is
    LA-Chicago-Atlanta (value 1.30).

``figure1``
    Six edges: e1 s-a (0), e2 s-b (1), e3 a-c (2), e4 b-t (3), e5 a-t (4),
    e6 c-t (5).  Paths {e2, e4}, {e1, e5}, {e1, e3, e6}.  ``e1`` is a
    necessary arm below OPT; e3, e5 and e6 lie above OPT.
"""

from __future__ import annotations

import itertools
import warnings
from typing import Callable

import numpy as np

from ..classes import build_class
from ..model import DecisionClassSpec, Instance, ValidationError

PATH_PREFIX = 3
PATH_RED_TAIL = 12
PATH_BRANCHES = 5
PATH_BRANCH_LEN = 14


def diamond(noise_scale: float = 1.0, means=(1.0, 0.9, 0.8, 0.5)) -> Instance:
    spec = DecisionClassSpec(
        "STPath",
        {"edges": [["s", "a"], ["a", "t"], ["s", "b"], ["b", "t"]], "s": "s", "t": "t"},
    )
    return Instance(4, tuple(means), noise_scale, spec)


def path(delta_min: float = 0.5, noise_scale: float = 1.0) -> Instance:
    if not 0.4 <= delta_min <= 0.7:
        warnings.warn(f"path instances are calibrated for delta_min in [0.4, 0.7], got {delta_min}")
    red_nodes = ["s", "v1", "v2", "v3"] + [f"r{i}" for i in range(1, PATH_RED_TAIL)] + ["t"]
    edges = [[a, b] for a, b in zip(red_nodes, red_nodes[1:])]
    means = [(i + 2) * delta_min for i in range(len(edges))]
    for b in range(PATH_BRANCHES):
        nodes = ["v3"] + [f"b{b}_{i}" for i in range(1, PATH_BRANCH_LEN)] + ["t"]
        edges += [[x, y] for x, y in zip(nodes, nodes[1:])]
        means += [delta_min] * PATH_BRANCH_LEN
    spec = DecisionClassSpec("STPath", {"edges": edges, "s": "s", "t": "t"})
    return Instance(len(edges), tuple(means), noise_scale, spec)


def matching(delta_min: float = 0.05, noise_scale: float = 1.0) -> Instance:
    if not 0.03 <= delta_min <= 0.07:
        warnings.warn(f"matching instances are calibrated for delta_min in [0.03, 0.07], got {delta_min}")
    edges, means = [], []
    rest = 0
    for i in range(5):
        for j in range(3):
            edges.append([f"L{i}", f"R{j}"])
            if i == j:
                means.append(0.1 + (14 - i) * delta_min)
            else:
                means.append(0.1 + rest * delta_min)
                rest += 1
    spec = DecisionClassSpec("BipartiteMatching", {"edges": edges})
    return Instance(15, tuple(means), noise_scale, spec)


AIR_ROUTES = [
    ("Los Angeles", "Chicago", 1.45),
    ("Chicago", "Atlanta", 1.30),
    ("Los Angeles", "Denver", 1.84),
    ("Denver", "Chicago", 0.95),
    ("Denver", "Dallas", 1.10),
    ("Los Angeles", "Dallas", 0.62),
    ("Dallas", "Atlanta", 1.05),
    ("Los Angeles", "Houston", 0.88),
    ("Houston", "Atlanta", 1.20),
]


def air_route(noise_scale: float = 1.0) -> Instance:
    edges = [[u, v] for u, v, _ in AIR_ROUTES]
    means = tuple(w for _, _, w in AIR_ROUTES)
    spec = DecisionClassSpec("STPath", {"edges": edges, "s": "Los Angeles", "t": "Atlanta"})
    return Instance(len(edges), means, noise_scale, spec)


def figure1(
    noise_scale: float = 1.0,
    low: float = 0.6,
    opt: float = 1.0,
    m_star_other: float = 1.2,
    above: tuple = (1.05, 1.1, 1.15),
) -> Instance:
    """Three-path instance with one necessary arm and three unnecessary arms.

    ``above`` gives the weights of e3, e5, e6, which must be at least ``opt``.
    """
    if not (low < opt <= m_star_other and min(above) >= opt):
        raise ValidationError("figure1 needs low < opt <= m_star_other and above >= opt")
    e3, e5, e6 = above
    edges = [["s", "a"], ["s", "b"], ["a", "c"], ["b", "t"], ["a", "t"], ["c", "t"]]
    means = (low, opt, e3, m_star_other, e5, e6)
    spec = DecisionClassSpec("STPath", {"edges": edges, "s": "s", "t": "t"})
    return Instance(6, means, noise_scale, spec)


def topk(means=(3.0, 1.0, 2.0), k: int = 2, noise_scale: float = 1.0) -> Instance:
    return Instance(len(means), tuple(means), noise_scale, DecisionClassSpec("TopK", {"k": k}))


GENERATORS: dict[str, Callable[..., Instance]] = {
    "diamond": diamond,
    "path": path,
    "matching": matching,
    "air_route": air_route,
    "figure1": figure1,
    "topk": topk,
}


def generate_instance(name: str, **params) -> Instance:
    try:
        gen = GENERATORS[name]
    except KeyError:
        raise ValidationError(f"unknown generator {name!r}; choose from {sorted(GENERATORS)}") from None
    return gen(**params)


# -- random small instances for oracle cross-checks ---------------------------------

MAX_SMALL_SUPER_ARMS = 12


def _random_weights(rng: np.random.Generator, n: int) -> tuple:
    # a small integer palette produces plenty of ties
    levels = int(rng.integers(2, n + 2))
    return tuple(float(x) for x in rng.integers(0, levels, size=n))


def _random_graph(rng, num_vertices, num_edges, connected=False):
    edges = []
    if connected:
        order = rng.permutation(num_vertices)
        for i in range(1, num_vertices):
            edges.append([int(order[i]), int(order[rng.integers(0, i)])])
    while len(edges) < num_edges:
        u, v = (int(x) for x in rng.integers(0, num_vertices, size=2))
        if u != v or rng.random() < 0.1:
            edges.append([u, v])
    rng.shuffle(edges)
    return edges


def random_small_instance(kind: str, rng: np.random.Generator, max_super_arms: int = MAX_SMALL_SUPER_ARMS) -> Instance:
    """Random instance of ``kind`` with at most ``max_super_arms`` super arms.

    Self-loops and parallel edges are allowed in the graph kinds.  Weights come
    from a small integer palette so ties are frequent.
    """
    for _ in range(10_000):
        if kind == "TopK":
            n = int(rng.integers(1, 7))
            k = int(rng.integers(1, n + 1))
            spec = DecisionClassSpec("TopK", {"k": k})
        elif kind == "STPath":
            nv = int(rng.integers(2, 8))
            n = int(rng.integers(1, 11))
            edges = _random_graph(rng, nv, n)
            spec = DecisionClassSpec("STPath", {"edges": edges, "s": 0, "t": 1})
            if not {0, 1} <= {x for e in edges for x in e}:
                continue
        elif kind == "BipartiteMatching":
            nl, nr = int(rng.integers(1, 5)), int(rng.integers(1, 5))
            n = int(rng.integers(1, 10))
            edges = [[f"L{rng.integers(0, nl)}", f"R{rng.integers(0, nr)}"] for _ in range(n)]
            spec = DecisionClassSpec("BipartiteMatching", {"edges": edges})
        elif kind == "SpanningTree":
            nv = int(rng.integers(2, 6))
            n = int(rng.integers(nv - 1, nv + 4))
            spec = DecisionClassSpec("SpanningTree", {"edges": _random_graph(rng, nv, n, connected=True)})
        else:
            raise ValidationError(f"unknown class kind {kind!r}")
        try:
            cls = build_class(spec, n)
        except ValidationError:
            continue
        count = sum(1 for _ in itertools.islice(cls._enumerate(), max_super_arms + 1))
        if 1 <= count <= max_super_arms:
            return Instance(n, _random_weights(rng, n), 1.0, spec)
    raise RuntimeError(f"could not draw a small {kind} instance")
