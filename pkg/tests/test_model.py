import json
import math

import pytest

from cpeb.model import DecisionClassSpec, DomainError, Instance, ValidationError, min_arm, min_weight


class TestMinWeight:
    def test_picks_smallest_value(self):
        assert min_weight({0, 2}, [3.0, 1.0, 2.0]) == 2.0

    def test_infinite_entries_rank_above_finite(self):
        assert min_weight({0, 1}, [math.inf, -5.0]) == -5.0
        assert min_weight({0}, [math.inf]) == math.inf

    def test_empty_set_is_rejected(self):
        with pytest.raises(DomainError):
            min_weight(set(), [1.0])

    def test_min_arm_breaks_ties_by_index(self):
        assert min_arm({3, 1, 2}, [0, 5, 5, 5]) == 1


class TestInstance:
    def test_json_round_trip(self, tmp_path, diamond_instance):
        path = tmp_path / "d.json"
        diamond_instance.dump(path)
        again = Instance.load(path)
        assert again == diamond_instance
        assert json.loads(path.read_text())["class"]["kind"] == "STPath"

    def test_non_exact_flag_survives_round_trip(self, diamond_instance):
        inst = Instance(4, diamond_instance.means, 1.0, diamond_instance.class_spec, exact_mode=False)
        assert Instance.from_json(inst.to_json()).exact_mode is False

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(n=0, means=()),
            dict(n=2, means=(1.0,)),
            dict(n=1, means=(math.nan,)),
        ],
    )
    def test_bad_means_rejected(self, kwargs):
        with pytest.raises(ValidationError):
            Instance(noise_scale=1.0, class_spec=DecisionClassSpec("TopK", {"k": 1}), **kwargs)

    def test_negative_noise_rejected(self):
        with pytest.raises(ValidationError):
            Instance(1, (0.0,), -1.0, DecisionClassSpec("TopK", {"k": 1}))

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValidationError):
            DecisionClassSpec("Hypergraph", {})

    def test_missing_field_reported(self):
        with pytest.raises(ValidationError, match="means"):
            Instance.from_json({"n": 1, "noise_scale": 1, "class": {"kind": "TopK", "k": 1}})

    def test_explicit_arm_labels(self):
        spec = DecisionClassSpec("STPath", {"edges": [["a", "t", 1], ["s", "a", 0]], "s": "s", "t": "t"})
        inst = Instance(2, (1.0, 2.0), 1.0, spec)
        cls = inst.decision_class()
        assert cls.edges[0] == ("s", "a")
        assert cls.enumerate() == [frozenset({0, 1})]
