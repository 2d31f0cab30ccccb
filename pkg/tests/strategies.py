"""Hypothesis strategies for small decision-class instances with frequent ties."""

from hypothesis import assume
from hypothesis import strategies as st

from cpeb.classes import build_class
from cpeb.model import DecisionClassSpec, Instance, ValidationError

weights = st.integers(0, 4).map(float)


def _finish(draw, spec, n, max_super_arms=40):
    try:
        cls = build_class(spec, n)
    except ValidationError:
        assume(False)
    assume(len(cls.enumerate()) <= max_super_arms)
    means = tuple(draw(st.lists(weights, min_size=n, max_size=n)))
    return Instance(n, means, 1.0, spec)


@st.composite
def topk_instances(draw):
    n = draw(st.integers(1, 6))
    k = draw(st.integers(1, n))
    return _finish(draw, DecisionClassSpec("TopK", {"k": k}), n)


@st.composite
def graph_edges(draw, max_vertices=6, max_edges=9):
    nv = draw(st.integers(2, max_vertices))
    vertex = st.integers(0, nv - 1)
    return draw(st.lists(st.tuples(vertex, vertex).map(list), min_size=1, max_size=max_edges))


@st.composite
def stpath_instances(draw):
    edges = draw(graph_edges())
    return _finish(draw, DecisionClassSpec("STPath", {"edges": edges, "s": 0, "t": 1}), len(edges))


@st.composite
def matching_instances(draw):
    left = st.integers(0, 3).map(lambda i: f"L{i}")
    right = st.integers(0, 3).map(lambda i: f"R{i}")
    edges = draw(st.lists(st.tuples(left, right).map(list), min_size=1, max_size=8))
    return _finish(draw, DecisionClassSpec("BipartiteMatching", {"edges": edges}), len(edges))


@st.composite
def spanning_tree_instances(draw):
    edges = draw(graph_edges(max_vertices=5, max_edges=8))
    return _finish(draw, DecisionClassSpec("SpanningTree", {"edges": edges}), len(edges))


any_instance = st.one_of(topk_instances(), stpath_instances(), matching_instances(), spanning_tree_instances())
