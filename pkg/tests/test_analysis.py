import math

import pytest
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

import brute
from strategies import any_instance
from cpeb.analysis import (
    IN_M_STAR,
    NECESSARY,
    UNNECESSARY,
    compute_gap_profile,
    near_bottleneck_property,
    validate_unique_optimum,
    within_confidence,
)
from cpeb.env import EmpiricalState
from cpeb.harness.generators import diamond, figure1, matching
from cpeb.model import DecisionClassSpec, Instance, ValidationError


def _reference_profile(inst):
    """Gaps straight from the definitions over an enumerated pool."""
    pool = brute.super_arms(inst)
    w = inst.means
    val = {M: brute.bottleneck(M, w) for M in pool}
    m_star = max(pool, key=val.get)
    opt = val[m_star]
    second = max((x for M, x in val.items() if M != m_star), default=-math.inf)
    dc, db, tags = [], [], []
    for e in range(inst.n):
        if e in m_star:
            tags.append(IN_M_STAR)
            dc.append(w[e] - second)
            db.append(opt - max((x for M, x in val.items() if e not in M), default=-math.inf))
            continue
        with_e = [x for M, x in val.items() if e in M]
        if not with_e:
            tags.append(UNNECESSARY)
            dc.append(math.nan)
            db.append(math.nan)
            continue
        top = max(with_e)
        tags.append(NECESSARY if w[e] < opt else UNNECESSARY)
        dc.append(opt - top if w[e] < opt else w[e] - top)
        db.append(opt - top)
    return m_star, opt, dc, db, tags


def _same(a, b):
    return all((math.isnan(x) and math.isnan(y)) or x == pytest.approx(y) for x, y in zip(a, b))


class TestDiamond:
    def test_profile(self):
        p = compute_gap_profile(diamond())
        assert p.m_star == {0, 1} and p.opt == 0.9
        assert p.delta_c == pytest.approx([0.5, 0.4, 0.4, 0.4])
        assert p.delta_b == pytest.approx([0.4] * 4)
        assert p.partition == [IN_M_STAR, IN_M_STAR, NECESSARY, NECESSARY]

    def test_hardness(self):
        p = compute_gap_profile(diamond())
        assert p.h_v == pytest.approx(1 / 0.25 + 3 / 0.16)
        assert p.h_e == pytest.approx(p.h_v)
        assert p.h_b == pytest.approx(4 / 0.16)

    def test_unique(self):
        assert validate_unique_optimum(diamond())[0]


def test_matching_opt():
    p = compute_gap_profile(matching())
    assert p.opt == pytest.approx(0.70)
    assert p.m_star == {0, 4, 8}


def test_figure1_has_unnecessary_arms():
    p = compute_gap_profile(figure1())
    assert p.n_tilde
    assert p.h_e > p.h_v


def test_parallel_identical_paths_not_unique():
    spec = DecisionClassSpec("STPath", {"edges": [["s", "t"], ["s", "t"]], "s": "s", "t": "t"})
    inst = Instance(2, (0.5, 0.5), 1.0, spec)
    ok, _ = validate_unique_optimum(inst)
    assert not ok
    with pytest.raises(ValidationError):
        compute_gap_profile(inst)


def test_single_super_arm_is_unique():
    inst = Instance(2, (0.5, 0.5), 1.0, DecisionClassSpec("TopK", {"k": 2}))
    assert validate_unique_optimum(inst)[0]
    p = compute_gap_profile(inst)
    assert p.delta_c == [math.inf, math.inf]


def test_arm_in_no_super_arm_is_excluded():
    # the self-loop belongs to no s-t path
    spec = DecisionClassSpec("STPath", {"edges": [["s", "t"], ["s", "s"], ["s", "t"]], "s": "s", "t": "t"})
    p = compute_gap_profile(Instance(3, (1.0, 5.0, 0.5), 1.0, spec))
    assert p.partition[1] == UNNECESSARY
    assert math.isnan(p.delta_c[1]) and math.isnan(p.delta_b[1])
    assert p.h_e == pytest.approx(1 / 0.25 + 1 / 0.25)
    assert json_safe(p.to_json())


def json_safe(obj):
    import json

    return json.loads(json.dumps(obj)) is not None


@settings(max_examples=300, deadline=None, suppress_health_check=[HealthCheck.filter_too_much, HealthCheck.too_slow])
@given(any_instance)
def test_matches_definitions(inst):
    ok, _ = validate_unique_optimum(inst)
    pool = brute.super_arms(inst)
    vals = sorted((brute.bottleneck(M, inst.means) for M in pool), reverse=True)
    assert ok == (len(vals) == 1 or vals[0] > vals[1])
    assume(ok)
    m_star, opt, dc, db, tags = _reference_profile(inst)
    p = compute_gap_profile(inst)
    assert p.m_star == m_star and p.opt == opt
    assert p.partition == tags
    assert _same(p.delta_c, dc) and _same(p.delta_b, db)


@given(st.floats(0.1, 10))
def test_scaling(c):
    base = figure1()
    p = compute_gap_profile(base)
    q = compute_gap_profile(base.with_means(tuple(c * x for x in base.means)).with_noise(c))
    assert q.delta_c == pytest.approx([c * x for x in p.delta_c])
    assert q.delta_b == pytest.approx([c * x for x in p.delta_b])
    assert q.h_v == pytest.approx(p.h_v)
    assert q.h_e == pytest.approx(p.h_e)
    # the fixed-budget hardness carries no noise factor, so R^2 H^B is the invariant
    assert c * c * q.h_b == pytest.approx(p.h_b)


@given(st.permutations(range(4)))
def test_relabeling(perm):
    base = diamond()
    edges = [["s", "a"], ["a", "t"], ["s", "b"], ["b", "t"]]
    new_edges = [None] * 4
    new_means = [None] * 4
    for old, new in enumerate(perm):
        new_edges[new] = edges[old]
        new_means[new] = base.means[old]
    spec = DecisionClassSpec("STPath", {"edges": new_edges, "s": "s", "t": "t"})
    p = compute_gap_profile(base)
    q = compute_gap_profile(Instance(4, tuple(new_means), 1.0, spec))
    assert (q.h_v, q.h_e, q.h_b) == pytest.approx((p.h_v, p.h_e, p.h_b))
    assert q.m_star == {perm[a] for a in p.m_star}


class TestWithinConfidence:
    def test_inside_and_outside(self):
        st_ = EmpiricalState(2, 1.0, math.log(10))
        st_.update(0, 0.1)
        st_.t = 2
        rad = st_.radius(0)
        assert within_confidence(st_, [0.1 + 0.99 * rad, 123.0])
        assert not within_confidence(st_, [0.1 + rad, 0.0])


class TestNearBottleneck:
    def test_diamond_truth(self):
        cls = diamond().decision_class()
        w = diamond().means
        assert near_bottleneck_property(cls, w, {0, 1}, {3})
        # 0.8 exceeds (0.9 + 0.5) / 2, so arm 2 alone does not witness
        assert not near_bottleneck_property(cls, w, {0, 1}, {2})
        assert not near_bottleneck_property(cls, w, {2, 3}, {3})
