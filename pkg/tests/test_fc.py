import math
import warnings

import pytest

from conftest import P1
from cpeb.analysis import IN_M_STAR, NECESSARY, UNNECESSARY, compute_gap_profile, within_confidence
from cpeb.classes import TopK
from cpeb.env import Environment
from cpeb.fc import (
    blucb,
    blucb_explore,
    blucb_parallel,
    blucb_verify,
    uniform_fc,
)
from cpeb.harness.generators import diamond, figure1, topk
from cpeb.model import DecisionClassSpec, Instance


def _zero_noise():
    inst = diamond(noise_scale=0.0)
    return Environment(inst, seed=0), inst.decision_class()


class TestZeroNoise:
    def test_blucb_stops_after_initialization(self):
        env, cls = _zero_noise()
        res = blucb(env, cls, 0.05)
        assert res.answer == P1
        assert res.total_pulls == 4 == sum(res.pulls_per_arm)

    def test_uniform_one_round(self):
        env, cls = _zero_noise()
        res = uniform_fc(env, cls, 0.05)
        assert res.answer == P1 and res.total_pulls == 4

    def test_explore(self):
        env, cls = _zero_noise()
        res = blucb_explore(env, cls)
        assert res.hypothesized_best == P1
        assert res.near_bottleneck_set == {3}
        assert res.total_pulls == 4

    def test_verify_pays_two_initializations(self):
        env, cls = _zero_noise()
        res = blucb_verify(env, cls, 0.005)
        assert res.answer == P1 and res.total_pulls == 8

    def test_parallel_first_learner_finishes(self):
        env, cls = _zero_noise()
        res = blucb_parallel(env, cls, 0.005)
        assert res.answer == P1
        # learner 0 needs 8 samples and finishes at step 8 before learners 1
        # and 2 take their step-8 turn, so they got 3 and 1 samples
        assert res.wall_steps == 8
        assert res.sub_algorithm_trace == [8, 3, 1]
        assert res.total_pulls == 12 == sum(res.pulls_per_arm)


def test_single_super_arm_class():
    inst = Instance(2, (0.3, 0.1), 1.0, DecisionClassSpec("TopK", {"k": 2}))
    env = Environment(inst, seed=1)
    cls = inst.decision_class()
    assert blucb(env, cls, 0.1).answer == {0, 1}
    res = blucb_explore(env, cls)
    assert res.hypothesized_best == {0, 1} and res.near_bottleneck_set == frozenset()
    assert res.total_pulls == 2


@pytest.mark.parametrize("steps", [1, 7, 64, 1000])
def test_parallel_schedule(steps):
    inst = diamond()
    res = blucb_parallel(Environment(inst, seed=2), inst.decision_class(), log_inv_delta=50.0, max_steps=steps)
    assert res.answer is None and res.wall_steps == steps
    assert res.sub_algorithm_trace == [steps >> k for k in range(steps.bit_length())]
    assert res.total_pulls == sum(res.sub_algorithm_trace)


def test_parallel_warns_for_large_delta():
    inst = diamond(noise_scale=0.0)
    with pytest.warns(UserWarning):
        blucb_parallel(Environment(inst), inst.decision_class(), 0.1)


def test_verify_warns_for_large_delta():
    inst = diamond(noise_scale=0.0)
    with pytest.warns(UserWarning):
        blucb_verify(Environment(inst), inst.decision_class(), 0.1)


class TestArguments:
    def test_delta_range(self):
        env, cls = _zero_noise()
        for bad in (0.0, 1.0, -0.2):
            with pytest.raises(ValueError):
                blucb(env, cls, bad)

    def test_negative_epsilon(self):
        env, cls = _zero_noise()
        with pytest.raises(ValueError):
            blucb(env, cls, 0.1, -0.1)

    def test_kappa_range(self):
        env, cls = _zero_noise()
        with pytest.raises(ValueError):
            blucb_explore(env, cls, kappa=1.0)


def test_uniform_pulls_multiple_of_n():
    inst = diamond()
    cls = inst.decision_class()
    for seed in range(5):
        res = uniform_fc(Environment(inst, seed), cls, 0.05)
        assert res.total_pulls % inst.n == 0
        assert len(set(res.pulls_per_arm)) == 1


def test_log_inv_delta_matches_delta():
    inst = diamond()
    cls = inst.decision_class()
    a = blucb(Environment(inst, 4), cls, 0.01)
    b = blucb(Environment(inst, 4), cls, log_inv_delta=math.log(100))
    assert a.pulls_per_arm == b.pulls_per_arm


def test_epsilon_never_costs_more():
    inst = diamond()
    cls = inst.decision_class()
    for seed in range(15):
        exact = blucb(Environment(inst, seed), cls, 0.05).total_pulls
        loose = blucb(Environment(inst, seed), cls, 0.05, 0.1).total_pulls
        looser = blucb(Environment(inst, seed), cls, 0.05, 0.4).total_pulls
        assert looser <= loose <= exact


def test_large_epsilon_returns_immediately_on_diamond():
    inst = diamond()
    res = blucb(Environment(inst, 0), inst.decision_class(), 0.05, epsilon=100.0)
    assert res.total_pulls == inst.n


class _Recorder:
    """Monitor that tracks the concentration event and the radius at each pull."""

    def __init__(self, means):
        self.means = means
        self.held = True
        self.pulls = []

    def __call__(self, state, arm):
        self.held = self.held and within_confidence(state, self.means)
        if arm is not None:
            self.pulls.append((arm, state.radius(arm)))


@pytest.mark.parametrize("make", [diamond, figure1, topk], ids=["diamond", "figure1", "topk"])
def test_pull_radius_thresholds(make):
    inst = make()
    cls = inst.decision_class()
    prof = compute_gap_profile(inst)
    checked = 0
    for seed in range(30):
        rec = _Recorder(inst.means)
        res = blucb(Environment(inst, seed), cls, 0.05, monitor=rec)
        if not rec.held:
            continue
        checked += 1
        assert res.answer == prof.m_star
        for arm, rad in rec.pulls:
            tag = prof.partition[arm]
            if tag in (IN_M_STAR, NECESSARY):
                assert rad >= prof.delta_c[arm] / 4
            elif tag == UNNECESSARY and not math.isnan(prof.delta_c[arm]):
                assert rad >= prof.delta_c[arm] / 2
    assert checked >= 20


@pytest.mark.parametrize("algo", [blucb, uniform_fc])
def test_sound_under_concentration(algo):
    inst = figure1()
    cls = inst.decision_class()
    m_star = compute_gap_profile(inst).m_star
    for seed in range(25):
        rec = _Recorder(inst.means)
        res = algo(Environment(inst, seed), cls, 0.2, monitor=rec)
        if rec.held:
            assert res.answer == m_star


def test_verify_sound_under_concentration():
    inst = diamond()
    cls = inst.decision_class()
    for seed in range(20):
        rec = _Recorder(inst.means)
        explore_rec = _Recorder(inst.means)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            from cpeb.fc import drive, verify_learner

            answer, _ = drive(verify_learner(cls, 1.0, math.log(200), 0.0, rec, explore_rec), Environment(inst, seed))
        if rec.held and explore_rec.held:
            assert answer == P1


def test_parallel_uses_independent_streams():
    inst = diamond()
    cls = inst.decision_class()
    res = blucb_parallel(Environment(inst, 3), cls, 0.005)
    assert res.answer == P1
    assert res.total_pulls == sum(res.sub_algorithm_trace)


def test_topk_generic_class():
    cls = TopK(3, 2)
    inst = topk(noise_scale=0.5)
    res = blucb(Environment(inst, 0), cls, 0.05)
    assert res.answer == {0, 2}
