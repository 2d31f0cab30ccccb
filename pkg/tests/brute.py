"""Independent subset-enumeration references used as test oracles.

Nothing here calls into the package's oracles or enumerators: feasibility is
decided from scratch for every subset of arms.
"""

import itertools

import networkx as nx


def _edges(spec):
    return [tuple(e[:2]) for e in spec.params["edges"]]


def _is_simple_st_path(edges, subset, s, t):
    g = nx.MultiGraph()
    for a in subset:
        u, v = edges[a]
        if u == v:
            return False
        g.add_edge(u, v, key=a)
    if s not in g or t not in g or not nx.is_connected(g):
        return False
    if g.number_of_edges() != g.number_of_nodes() - 1:
        return False
    return all(g.degree(x) == (1 if x in (s, t) else 2) for x in g.nodes)


def _is_matching(edges, subset):
    ls = [edges[a][0] for a in subset]
    rs = [edges[a][1] for a in subset]
    return len(set(ls)) == len(ls) and len(set(rs)) == len(rs)


def _is_spanning_tree(edges, subset, vertices):
    g = nx.MultiGraph()
    g.add_nodes_from(vertices)
    for a in subset:
        g.add_edge(*edges[a], key=a)
    return g.number_of_edges() == len(vertices) - 1 and nx.is_connected(g) and nx.is_forest(g)


def super_arms(instance):
    """All feasible super arms, sorted, by checking every subset of arms."""
    spec, n = instance.class_spec, instance.n
    subsets = [frozenset(c) for r in range(1, n + 1) for c in itertools.combinations(range(n), r)]
    if spec.kind == "TopK":
        out = [S for S in subsets if len(S) == spec.params["k"]]
    elif spec.kind == "STPath":
        edges = _edges(spec)
        out = [S for S in subsets if _is_simple_st_path(edges, S, spec.params["s"], spec.params["t"])]
    elif spec.kind == "BipartiteMatching":
        edges = _edges(spec)
        matchings = [S for S in subsets if _is_matching(edges, S)]
        size = max(len(S) for S in matchings)
        out = [S for S in matchings if len(S) == size]
    elif spec.kind == "SpanningTree":
        edges = _edges(spec)
        vertices = {x for e in edges for x in e}
        out = [S for S in subsets if _is_spanning_tree(edges, S, vertices)]
    else:
        raise ValueError(spec.kind)
    return sorted(out, key=lambda S: tuple(sorted(S)))


def bottleneck(S, v):
    return min(v[a] for a in S)


def best_value(pool, v):
    return max((bottleneck(S, v) for S in pool), default=None)
