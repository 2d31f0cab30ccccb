"""Concrete decision classes with bottleneck-maximization and existence oracles.

Every class exposes three offline procedures over a restricted arm set
``allowed`` (``None`` means every arm):

* ``max_oracle(allowed, v)`` - a feasible super arm using only allowed arms
  that maximizes the bottleneck value under ``v``, or ``None``.
* ``exist_oracle(allowed, e)`` - a feasible super arm using only allowed arms
  that contains ``e``, or ``None``.
* ``enumerate()`` - every feasible super arm, sorted, for small classes.

Bottleneck maximization only depends on the ranking of ``v``, so results are
memoized on ``(allowed, dense ranks of v)`` for classes with few arms.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from typing import Hashable, Iterable, Sequence

from .model import DecisionClassSpec, DomainError, ValidationError, sort_key

DEFAULT_CAP = 10**6
MEMO_MAX_ARMS = 24
MEMO_SIZE = 1 << 16


class CapacityError(RuntimeError):
    """Raised when enumeration would exceed the configured cap."""


def ordinal_key(v: Sequence[float]) -> tuple[int, ...]:
    """Dense ranks of ``v``: equal values share a rank, larger values rank higher."""
    order = sorted(range(len(v)), key=v.__getitem__)
    ranks = [0] * len(v)
    rank, prev = 0, None
    for a in order:
        x = v[a]
        if prev is not None and x != prev:
            rank += 1
        ranks[a] = rank
        prev = x
    return tuple(ranks)


class _UnionFind:
    __slots__ = ("parent",)

    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


def _parse_edges(raw, n: int) -> list[tuple[Hashable, Hashable]]:
    edges: list = [None] * n
    if len(raw) != n:
        raise ValidationError(f"edge list has {len(raw)} entries for {n} arms")
    for pos, item in enumerate(raw):
        if isinstance(item, dict):
            u, v, arm = item["u"], item["v"], item.get("arm", pos)
        elif len(item) == 3:
            u, v, arm = item
        else:
            (u, v), arm = item, pos
        arm = int(arm)
        if not 0 <= arm < n or edges[arm] is not None:
            raise ValidationError(f"arm label {arm} is out of range or repeated")
        edges[arm] = (_hashable(u), _hashable(v))
    return edges


def _hashable(x):
    return tuple(x) if isinstance(x, list) else x


class DecisionClass:
    """Base class; subclasses implement ``_max``, ``_exist``, ``_enumerate`` and ``is_feasible``."""

    kind = ""
    #: True when no feasible super arm is a proper subset of another.
    antichain = True

    def __init__(self, n: int, memo: bool | None = None):
        self.n = n
        self.all_arms = frozenset(range(n))
        if memo is None:
            memo = n <= MEMO_MAX_ARMS
        self._memo: dict | None = {} if memo else None

    # -- public API ---------------------------------------------------------
    def max_oracle(self, allowed: Iterable[int] | None, v: Sequence[float]):
        allowed = self._norm(allowed)
        memo = self._memo
        if memo is None:
            return self._max(allowed, v)
        key = ("max", allowed, ordinal_key(v))
        try:
            return memo[key]
        except KeyError:
            pass
        out = memo[key] = self._max(allowed, v)
        self._trim()
        return out

    def exist_oracle(self, allowed: Iterable[int] | None, e: int):
        allowed = self._norm(allowed)
        if allowed is not None and e not in allowed:
            raise DomainError(f"arm {e} is not in the allowed set")
        if not 0 <= e < self.n:
            raise DomainError(f"arm {e} out of range")
        memo = self._memo
        if memo is None:
            return self._exist(allowed, e)
        key = ("exist", allowed, e)
        try:
            return memo[key]
        except KeyError:
            pass
        out = memo[key] = self._exist(allowed, e)
        self._trim()
        return out

    def enumerate(self, cap: int = DEFAULT_CAP) -> list[frozenset[int]]:
        found: list[frozenset[int]] = []
        for arms in self._enumerate():
            found.append(frozenset(arms))
            if len(found) > cap:
                raise CapacityError(f"{self.kind} class has more than {cap} super arms")
        found.sort(key=sort_key)
        return found

    def is_feasible(self, arms: Iterable[int]) -> bool:
        raise NotImplementedError

    def memo_get(self, key):
        """Shared memo for ordinal compositions built on top of this class."""
        if self._memo is None:
            return None
        return self._memo.get(key)

    def memo_put(self, key, value) -> None:
        if self._memo is not None:
            self._memo[key] = value
            self._trim()

    @property
    def memo_enabled(self) -> bool:
        return self._memo is not None

    # -- helpers ------------------------------------------------------------
    def _norm(self, allowed):
        if allowed is None:
            return None
        allowed = allowed if isinstance(allowed, frozenset) else frozenset(allowed)
        if len(allowed) == self.n:
            return None
        return allowed

    def _arms(self, allowed) -> Iterable[int]:
        return range(self.n) if allowed is None else sorted(allowed)

    def _trim(self):
        if len(self._memo) > MEMO_SIZE:
            self._memo.clear()

    def _max(self, allowed, v):
        raise NotImplementedError

    def _max_excluding(self, M_ex, v):
        """Optional class-specific superset-excluding maximizer."""
        return NotImplemented

    def _exist(self, allowed, e):
        raise NotImplementedError

    def _enumerate(self):
        raise NotImplementedError


class TopK(DecisionClass):
    """All ``k``-subsets of the arms."""

    kind = "TopK"

    def __init__(self, n: int, k: int, memo: bool | None = None):
        super().__init__(n, memo)
        if not 1 <= k <= n:
            raise ValidationError(f"TopK needs 1 <= k <= n, got k={k}, n={n}")
        self.k = k

    def _max(self, allowed, v):
        arms = sorted(self._arms(allowed), key=lambda a: (-v[a], a))
        if len(arms) < self.k:
            return None
        return frozenset(arms[: self.k])

    def _exist(self, allowed, e):
        others = [a for a in self._arms(allowed) if a != e][: self.k - 1]
        if len(others) < self.k - 1:
            return None
        return frozenset(others) | {e}

    def _enumerate(self):
        return itertools.combinations(range(self.n), self.k)

    def is_feasible(self, arms) -> bool:
        arms = set(arms)
        return len(arms) == self.k and all(0 <= a < self.n for a in arms)


class _GraphClass(DecisionClass):
    def __init__(self, n: int, edges, memo: bool | None = None):
        super().__init__(n, memo)
        self.edges = _parse_edges(edges, n)
        labels: dict[Hashable, int] = {}
        for u, v in self.edges:
            for x in (u, v):
                if x not in labels:
                    labels[x] = len(labels)
        self.vertex_index = labels
        self.num_vertices = len(labels)
        self.ends = [(labels[u], labels[v]) for u, v in self.edges]


class STPath(_GraphClass):
    """Simple s-t paths in an undirected multigraph whose edges are the arms."""

    kind = "STPath"

    def __init__(self, n: int, edges, s, t, memo: bool | None = None):
        super().__init__(n, edges, memo)
        s, t = _hashable(s), _hashable(t)
        if s not in self.vertex_index or t not in self.vertex_index:
            raise ValidationError("s and t must be endpoints of some edge")
        if s == t:
            raise ValidationError("s and t must differ")
        self.s = self.vertex_index[s]
        self.t = self.vertex_index[t]
        self.adj: list[list[tuple[int, int]]] = [[] for _ in range(self.num_vertices)]
        for arm, (u, v) in enumerate(self.ends):
            if u != v:
                self.adj[u].append((v, arm))
                self.adj[v].append((u, arm))
        if self._bfs_path(lambda a: True) is None:
            raise ValidationError("no s-t path exists")

    def _bfs_path(self, usable) -> frozenset[int] | None:
        s, t = self.s, self.t
        prev: dict[int, tuple[int, int]] = {s: (-1, -1)}
        queue = deque([s])
        while queue:
            x = queue.popleft()
            if x == t:
                break
            for y, arm in self.adj[x]:
                if y not in prev and usable(arm):
                    prev[y] = (x, arm)
                    queue.append(y)
        if t not in prev:
            return None
        arms = []
        x = t
        while x != s:
            x, arm = prev[x]
            arms.append(arm)
        return frozenset(arms)

    def _forest(self, allowed, v, stop_at_st: bool):
        """Kruskal in descending weight order; returns forest adjacency lists.

        With ``stop_at_st`` the scan ends as soon as s and t are connected.
        Returns ``None`` when s and t end up disconnected.
        """
        if allowed is None:
            order = sorted(range(self.n), key=v.__getitem__, reverse=True)
        else:
            order = sorted(sorted(allowed), key=v.__getitem__, reverse=True)
        parent = list(range(self.num_vertices))
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.num_vertices)]
        ends, s, t = self.ends, self.s, self.t
        joined = False
        for a in order:
            u, w = ends[a]
            while parent[u] != u:
                parent[u] = parent[parent[u]]
                u = parent[u]
            while parent[w] != w:
                parent[w] = parent[parent[w]]
                w = parent[w]
            if u == w:
                continue
            parent[w] = u
            x, y = ends[a]
            adj[x].append((y, a))
            adj[y].append((x, a))
            if stop_at_st:
                rs, rt = s, t
                while parent[rs] != rs:
                    rs = parent[rs]
                while parent[rt] != rt:
                    rt = parent[rt]
                if rs == rt:
                    return adj
        if not stop_at_st:
            return adj
        return None

    def _rooted(self, adj):
        """BFS of the forest from s: ``(order, parent_vertex, parent_arm)``."""
        s = self.s
        pv = [-1] * self.num_vertices
        pa = [-1] * self.num_vertices
        pv[s] = s
        order = [s]
        for x in order:
            for y, a in adj[x]:
                if pv[y] < 0:
                    pv[y] = x
                    pa[y] = a
                    order.append(y)
        return order, pv, pa

    def _tree_path(self, pv, pa) -> list[int]:
        arms = []
        x = self.t
        while x != self.s:
            arms.append(pa[x])
            x = pv[x]
        arms.reverse()
        return arms

    def _max(self, allowed, v):
        # the s-t path of the partial maximum spanning forest is a widest path
        adj = self._forest(allowed, v, True)
        if adj is None:
            return None
        _, pv, pa = self._rooted(adj)
        return frozenset(self._tree_path(pv, pa))

    def _max_excluding(self, M_ex, v):
        """Widest path that is not a superset of ``M_ex``.

        Uses a maximum spanning tree ``F``: if its s-t path misses an arm of
        ``M_ex`` it is the answer.  Otherwise, for every path edge in
        ``M_ex``, swapping it for the heaviest non-tree edge that reconnects
        the two halves gives a maximum spanning tree of the graph without that
        edge, whose s-t path is a widest path avoiding it.
        """
        adj = self._forest(None, v, False)
        order, pv, pa = self._rooted(adj)
        s, t = self.s, self.t
        if pv[t] < 0:
            return None
        path = self._tree_path(pv, pa)
        if not M_ex <= set(path):
            return frozenset(path)
        L = len(path)
        # pos[x]: index of the path vertex where x's branch attaches; -1 off s's tree
        pos = [-1] * self.num_vertices
        bmin = [math.inf] * self.num_vertices
        on_path = [False] * self.num_vertices
        x = t
        for i in range(L, -1, -1):
            pos[x] = i
            on_path[x] = True
            x = pv[x]
        for x in order:
            if pos[x] < 0:
                pos[x] = pos[pv[x]]
                bmin[x] = min(bmin[pv[x]], v[pa[x]])
        # prefix[i]: min over path[0:i]; suffix[i]: min over path[i:]
        prefix = [math.inf] * (L + 1)
        for i in range(L):
            prefix[i + 1] = min(prefix[i], v[path[i]])
        suffix = [math.inf] * (L + 1)
        for i in range(L - 1, -1, -1):
            suffix[i] = min(suffix[i + 1], v[path[i]])
        # best[i]: heaviest non-tree edge crossing path edge path[i - 1]
        best = [None] * (L + 1)
        missing = L
        tree_arms = {pa[x] for x in order if x != s}
        for a in sorted(range(self.n), key=v.__getitem__, reverse=True):
            if a in tree_arms:
                continue
            p, q = pos[self.ends[a][0]], pos[self.ends[a][1]]
            if p < 0 or p == q:
                continue
            lo, hi = (p, q) if p < q else (q, p)
            for i in range(lo + 1, hi + 1):
                if best[i] is None:
                    best[i] = a
                    missing -= 1
            if not missing:
                break
        top, top_i = None, None
        for i in range(1, L + 1):
            f = best[i]
            if f is None or path[i - 1] not in M_ex:
                continue
            u, w = self.ends[f]
            if pos[u] > pos[w]:
                u, w = w, u
            val = min(prefix[pos[u]], bmin[u], v[f], bmin[w], suffix[pos[w]])
            if top is None or val > top:
                top, top_i = val, i
        if top is None:
            return None
        f = best[top_i]
        u, w = self.ends[f]
        if pos[u] > pos[w]:
            u, w = w, u
        arms = path[: pos[u]] + path[pos[w]:] + [f]
        for x in (u, w):
            while not on_path[x]:
                arms.append(pa[x])
                x = pv[x]
        return frozenset(arms)

    def _exist(self, allowed, e):
        u_e, v_e = self.ends[e]
        if u_e == v_e:
            return None
        usable = self._arms(allowed)
        return _path_through_edge(self.num_vertices, self.ends, usable, e, self.s, self.t)

    def _enumerate(self):
        s, t, adj = self.s, self.t, self.adj
        visited = [False] * self.num_vertices
        arms: list[int] = []

        def walk(x):
            if x == t:
                yield tuple(arms)
                return
            visited[x] = True
            for y, arm in adj[x]:
                if not visited[y]:
                    arms.append(arm)
                    yield from walk(y)
                    arms.pop()
            visited[x] = False

        return walk(s)

    def is_feasible(self, arms) -> bool:
        arms = set(arms)
        if not arms or not all(0 <= a < self.n for a in arms):
            return False
        degree: dict[int, int] = {}
        uf = _UnionFind(self.num_vertices)
        for a in arms:
            u, v = self.ends[a]
            if u == v or not uf.union(u, v):
                return False
            degree[u] = degree.get(u, 0) + 1
            degree[v] = degree.get(v, 0) + 1
        for x, d in degree.items():
            want = 1 if x in (self.s, self.t) else 2
            if d != want:
                return False
        return self.s in degree and self.t in degree


def _path_through_edge(num_vertices, ends, usable, e, s, t):
    """Simple s-t path containing edge ``e``, via two vertex-disjoint paths.

    Edge ``e = (u, v)`` is subdivided by a new vertex ``w`` and a new vertex
    ``z`` is joined to ``s`` and ``t``.  A simple s-t path through ``e`` exists
    iff ``w`` and ``z`` are joined by two internally vertex-disjoint paths,
    found here as a unit-capacity max-flow of value 2 on the node-split graph.
    """
    # node x_in = 2x, x_out = 2x + 1; w and z are extra terminals
    W, Z = 2 * num_vertices, 2 * num_vertices + 1
    graph: list[list[int]] = [[] for _ in range(2 * num_vertices + 2)]
    to: list[int] = []
    cap: list[int] = []
    label: list[int] = []

    def add_arc(a, b, arm):
        graph[a].append(len(to))
        to.append(b), cap.append(1), label.append(arm)
        graph[b].append(len(to))
        to.append(a), cap.append(0), label.append(-1)

    for x in range(num_vertices):
        add_arc(2 * x, 2 * x + 1, -1)
    for a in usable:
        if a == e:
            continue
        u, v = ends[a]
        if u != v:
            add_arc(2 * u + 1, 2 * v, a)
            add_arc(2 * v + 1, 2 * u, a)
    u_e, v_e = ends[e]
    add_arc(W, 2 * u_e, e)
    add_arc(W, 2 * v_e, e)
    add_arc(2 * s + 1, Z, -1)
    add_arc(2 * t + 1, Z, -1)

    for _ in range(2):
        via = {W: -1}
        queue = deque([W])
        while queue and Z not in via:
            x = queue.popleft()
            for arc in graph[x]:
                y = to[arc]
                if cap[arc] > 0 and y not in via:
                    via[y] = arc
                    queue.append(y)
        if Z not in via:
            return None
        y = Z
        while y != W:
            arc = via[y]
            cap[arc] -= 1
            cap[arc ^ 1] += 1
            y = to[arc ^ 1]

    # forward arcs sit at even positions; flow on them is 1 - cap
    def carries(arc):
        return arc % 2 == 0 and cap[arc] == 0

    halves = {}
    for first in graph[W]:
        if not carries(first):
            continue
        arms: list[int] = []
        x = to[first]
        while x != Z:
            nxt = next(arc for arc in graph[x] if carries(arc))
            if label[nxt] >= 0:
                arms.append(label[nxt])
            last = x
            x = to[nxt]
        halves[(last - 1) // 2] = arms
    if set(halves) != {s, t}:
        return None
    return frozenset(halves[s]) | frozenset(halves[t]) | {e}


def hopcroft_karp(adj: Sequence[Sequence[tuple[int, int]]], num_right: int) -> dict[int, tuple[int, int]]:
    """Maximum bipartite matching.

    ``adj[l]`` lists ``(right, label)`` pairs; returns ``{left: (right, label)}``.
    """
    num_left = len(adj)
    match_left: list[tuple[int, int] | None] = [None] * num_left
    match_right: list[int] = [-1] * num_right
    inf = num_left + 1

    while True:
        dist = [inf] * num_left
        queue = deque()
        for l in range(num_left):
            if match_left[l] is None:
                dist[l] = 0
                queue.append(l)
        found = False
        while queue:
            l = queue.popleft()
            for r, _ in adj[l]:
                l2 = match_right[r]
                if l2 < 0:
                    found = True
                elif dist[l2] == inf:
                    dist[l2] = dist[l] + 1
                    queue.append(l2)
        if not found:
            break

        def augment(l):
            for r, lab in adj[l]:
                l2 = match_right[r]
                if l2 < 0 or (dist[l2] == dist[l] + 1 and augment(l2)):
                    match_left[l] = (r, lab)
                    match_right[r] = l
                    return True
            dist[l] = inf
            return False

        for l in range(num_left):
            if match_left[l] is None:
                augment(l)
    return {l: m for l, m in enumerate(match_left) if m is not None}


class BipartiteMatching(_GraphClass):
    """Maximum-cardinality matchings of a bipartite graph.

    Only matchings whose size equals the maximum cardinality of the whole
    graph are super arms; edge endpoints are ``[left, right]``.
    """

    kind = "BipartiteMatching"

    def __init__(self, n: int, edges, memo: bool | None = None):
        DecisionClass.__init__(self, n, memo)
        self.edges = _parse_edges(edges, n)
        lefts: dict[Hashable, int] = {}
        rights: dict[Hashable, int] = {}
        for l, r in self.edges:
            lefts.setdefault(l, len(lefts))
            rights.setdefault(r, len(rights))
        self.num_left, self.num_right = len(lefts), len(rights)
        self.ends = [(lefts[l], rights[r]) for l, r in self.edges]
        self.size = len(self._matching(range(n)))
        if self.size == 0:
            raise ValidationError("matching class is empty")

    def _matching(self, arms: Iterable[int], skip_left=-1, skip_right=-1) -> list[int]:
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.num_left)]
        for a in arms:
            l, r = self.ends[a]
            if l != skip_left and r != skip_right:
                adj[l].append((r, a))
        return [lab for _, lab in hopcroft_karp(adj, self.num_right).values()]

    def _max(self, allowed, v):
        arms = list(self._arms(allowed))
        levels = sorted({v[a] for a in arms}, reverse=True)
        best = None
        lo, hi = 0, len(levels) - 1
        while lo <= hi:
            mid = (lo + hi) // 2
            level = levels[mid]
            m = self._matching(a for a in arms if v[a] >= level)
            if len(m) == self.size:
                best, hi = m, mid - 1
            else:
                lo = mid + 1
        return None if best is None else frozenset(best)

    def _exist(self, allowed, e):
        l, r = self.ends[e]
        m = self._matching((a for a in self._arms(allowed) if a != e), l, r)
        if len(m) < self.size - 1:
            return None
        return frozenset(m) | {e}

    def _enumerate(self):
        by_left: list[list[tuple[int, int]]] = [[] for _ in range(self.num_left)]
        for a, (l, r) in enumerate(self.ends):
            by_left[l].append((r, a))
        used = [False] * self.num_right
        chosen: list[int] = []
        size, num_left = self.size, self.num_left

        def walk(l):
            if len(chosen) + (num_left - l) < size:
                return
            if l == num_left:
                yield tuple(chosen)
                return
            for r, a in by_left[l]:
                if not used[r]:
                    used[r] = True
                    chosen.append(a)
                    yield from walk(l + 1)
                    chosen.pop()
                    used[r] = False
            yield from walk(l + 1)

        return walk(0)

    def is_feasible(self, arms) -> bool:
        arms = set(arms)
        if len(arms) != self.size or not all(0 <= a < self.n for a in arms):
            return False
        ls = {self.ends[a][0] for a in arms}
        rs = {self.ends[a][1] for a in arms}
        return len(ls) == len(rs) == len(arms)


class SpanningTree(_GraphClass):
    """Spanning trees of a connected undirected multigraph."""

    kind = "SpanningTree"

    def __init__(self, n: int, edges, memo: bool | None = None):
        super().__init__(n, edges, memo)
        if self.num_vertices < 2:
            raise ValidationError("spanning-tree class needs at least two vertices")
        if self._max(None, [0.0] * n) is None:
            raise ValidationError("graph is not connected")

    def _max(self, allowed, v):
        uf = _UnionFind(self.num_vertices)
        tree = []
        need = self.num_vertices - 1
        for a in sorted(self._arms(allowed), key=lambda a: (-v[a], a)):
            u, w = self.ends[a]
            if uf.union(u, w):
                tree.append(a)
                if len(tree) == need:
                    return frozenset(tree)
        return None

    def _exist(self, allowed, e):
        u_e, v_e = self.ends[e]
        if u_e == v_e:
            return None
        uf = _UnionFind(self.num_vertices)
        uf.union(u_e, v_e)
        tree = [e]
        need = self.num_vertices - 1
        if len(tree) == need:
            return frozenset(tree)
        for a in self._arms(allowed):
            if a == e:
                continue
            u, w = self.ends[a]
            if uf.union(u, w):
                tree.append(a)
                if len(tree) == need:
                    return frozenset(tree)
        return None

    def _enumerate(self):
        need = self.num_vertices - 1
        ends, n = self.ends, self.n
        chosen: list[int] = []

        def walk(start, parent):
            if len(chosen) == need:
                yield tuple(chosen)
                return
            for a in range(start, n - (need - len(chosen)) + 1):
                u, v = ends[a]
                ru, rv = _find(parent, u), _find(parent, v)
                if ru == rv:
                    continue
                child = list(parent)
                child[rv] = ru
                chosen.append(a)
                yield from walk(a + 1, child)
                chosen.pop()

        return walk(0, list(range(self.num_vertices)))

    def is_feasible(self, arms) -> bool:
        arms = set(arms)
        if len(arms) != self.num_vertices - 1 or not all(0 <= a < self.n for a in arms):
            return False
        uf = _UnionFind(self.num_vertices)
        return all(uf.union(*self.ends[a]) for a in arms)


def _find(parent, x):
    while parent[x] != x:
        x = parent[x]
    return x


def build_class(spec: DecisionClassSpec, n: int, memo: bool | None = None) -> DecisionClass:
    """Instantiate the decision class described by ``spec`` over ``n`` arms."""
    p = spec.params
    try:
        if spec.kind == "TopK":
            return TopK(n, int(p["k"]), memo=memo)
        if spec.kind == "STPath":
            return STPath(n, p["edges"], p["s"], p["t"], memo=memo)
        if spec.kind == "BipartiteMatching":
            return BipartiteMatching(n, p["edges"], memo=memo)
        if spec.kind == "SpanningTree":
            return SpanningTree(n, p["edges"], memo=memo)
    except KeyError as exc:
        raise ValidationError(f"{spec.kind} class is missing parameter {exc}") from None
    raise ValidationError(f"unknown class kind {spec.kind!r}")
