import json

import numpy as np
import pytest

from robustkz.errors import InstanceValidationError
from robustkz.instance import Instance, instance_digest, load_instance, save_instance, solution_cost
from robustkz.instance.io import canonical_json, instance_to_dict, parse_instance
from robustkz.metric.space import LqSpace, MatrixSpace

from conftest import random_instance


def test_line_instance_costs(line_instance):
    cost, per_group = solution_cost(line_instance, [0])
    assert cost == 2.0
    assert per_group.tolist() == [2.0]


def test_zero_weight_points_do_not_count():
    inst = Instance(LqSpace(q=2.0), [0.0, 100.0], [0.0], 1, 1, [{0: 1.0, 1: 0.0}])
    assert inst.evaluate([0]).cost == 0.0
    assert inst.active_points.tolist() == [0]


def test_z_raises_distances():
    inst = Instance(LqSpace(q=2.0), [0.0, 3.0], [0.0], 1, 2, [{0: 1.0, 1: 2.0}])
    assert inst.evaluate([0]).cost == pytest.approx(18.0)


def test_max_over_groups():
    inst = Instance(LqSpace(q=2.0), [0.0, 4.0], [0.0, 4.0], 1, 1, [{0: 1.0}, {1: 3.0}])
    solution = inst.evaluate([0])
    assert solution.group_costs == (0.0, 12.0)
    assert solution.cost == 12.0


@pytest.mark.parametrize("kwargs, message", [
    ({"k": 3}, "exceeds"),
    ({"k": 0}, "positive"),
    ({"z": 0}, "positive"),
    ({"groups": []}, "at least one group"),
    ({"groups": [{}]}, "empty"),
    ({"groups": [{0: -1.0}]}, "invalid weight"),
    ({"groups": [{5: 1.0}]}, "out of range"),
    ({"groups": [{0: 0.0}]}, "strictly positive"),
])
def test_validation(kwargs, message):
    args = {"k": 1, "z": 1, "groups": [{0: 1.0}]}
    args.update(kwargs)
    with pytest.raises(InstanceValidationError, match=message):
        Instance(LqSpace(q=2.0), [0.0, 1.0], [0.0, 1.0], args["k"], args["z"], args["groups"])


def test_from_subsets_uses_point_weights():
    inst = Instance.from_subsets(LqSpace(q=2.0), [0.0, 1.0, 2.0], [0.0], 1, 1,
                                 [[0, 2], [1]], point_weights=[1.0, 2.0, 3.0])
    assert inst.groups == ({0: 1.0, 2: 3.0}, {1: 2.0})


@pytest.mark.parametrize("seed", range(20))
def test_group_cost_shrinks_as_centers_are_added(seed):
    inst = random_instance(seed=seed, n=15, f=7, z=1 + seed % 2)
    rng = np.random.default_rng(seed)
    order = rng.permutation(inst.f).tolist()
    for w in inst.groups:
        costs = [inst.group_cost(w, order[:size]) for size in range(1, inst.f + 1)]
        assert all(b <= a for a, b in zip(costs, costs[1:]))
    for size in range(1, inst.f):
        _, smaller = inst.solution_cost(order[:size])
        _, larger = inst.solution_cost(order[:size + 1])
        assert np.all(larger <= smaller)


def test_kcenter_has_singleton_groups():
    inst = Instance.kcenter(LqSpace(q=2.0), [0.0, 1.0, 5.0], 1)
    assert inst.z == 1
    assert inst.m == 3
    assert inst.facilities_alias
    assert inst.evaluate([0]).cost == 5.0


def test_aspect_ratios():
    inst = Instance(LqSpace(q=2.0), [0.0, 1.0, 10.0], [0.0], 1, 1, [{1: 1.0, 2: 4.0}])
    assert inst.weight_aspect_ratio == 4.0
    assert inst.distance_aspect_ratio == 10.0


def test_aspect_ratio_warning(caplog):
    Instance(LqSpace(q=2.0), [0.0, 1.0], [0.0], 1, 1, [{0: 1.0, 1: 1e6}],
             aspect_warning_exponent=1.0)
    assert "Weight aspect ratio" in caplog.text


class TestDocuments:

    def test_save_load_is_exact(self, tmp_path):
        inst = random_instance(seed=3)
        path = tmp_path / "inst.json"
        save_instance(inst, path)
        assert load_instance(path) == inst
        assert instance_digest(load_instance(path)) == instance_digest(inst)

    def test_canonical_json_sorted_and_newline_terminated(self):
        text = canonical_json(instance_to_dict(random_instance(seed=1)))
        assert text.endswith("\n")
        doc = json.loads(text)
        assert list(doc) == sorted(doc)

    def test_same_as_points_alias(self):
        inst = random_instance(seed=2, separate_facilities=False)
        assert instance_to_dict(inst)["facilities"] == "same_as_points"
        assert parse_instance(canonical_json(instance_to_dict(inst))) == inst

    def test_subset_groups(self):
        doc = {"metric": {"kind": "lq", "q": 2}, "points": [[0.0], [1.0]],
               "facilities": "same_as_points", "k": 1, "z": 1,
               "groups": [{"subset": [0, 1]}], "point_weights": [2.0, 3.0]}
        inst = parse_instance(json.dumps(doc))
        assert inst.groups == ({0: 2.0, 1: 3.0},)

    def test_matrix_metric(self):
        doc = {"metric": {"kind": "matrix", "d": [[0, 1], [1, 0]]}, "points": [0, 1],
               "facilities": [0], "k": 1, "z": 1, "groups": [{"weights": {"0": 1, "1": 1}}]}
        inst = parse_instance(json.dumps(doc))
        assert isinstance(inst.space, MatrixSpace)
        assert inst.evaluate([0]).cost == 1.0

    @pytest.mark.parametrize("text", [
        '{"metric": {"kind": "lq"}, "points": [[0.0]], "facilities": "same_as_points",'
        ' "k": 1, "z": 1, "groups": [{"weights": {"0": 1}, "subset": [0]}]}',
        '{"metric": {"kind": "lq"}, "points": [[0.0]], "facilities": "same_as_points",'
        ' "k": 1, "z": 1, "groups": [], "extra": 1}',
        '{"metric": {"kind": "lq"}, "points": [[Infinity]], "facilities": "same_as_points",'
        ' "k": 1, "z": 1, "groups": [{"weights": {"0": 1}}]}',
        '{"metric": {"kind": "lq"}, "points": [[0.0]], "facilities": "same_as_points",'
        ' "k": 1.5, "z": 1, "groups": [{"weights": {"0": 1}}]}',
    ])
    def test_schema_violations(self, text):
        with pytest.raises(InstanceValidationError):
            parse_instance(text)

    def test_asymmetric_matrix_rejected(self):
        doc = {"metric": {"kind": "matrix", "d": [[0, 1], [2, 0]]}, "points": [0, 1],
               "facilities": [0], "k": 1, "z": 1, "groups": [{"weights": {"0": 1}}]}
        with pytest.raises(InstanceValidationError, match="symmetric"):
            parse_instance(json.dumps(doc))

    def test_points_are_read_only(self):
        inst = random_instance(seed=4)
        with pytest.raises(ValueError):
            inst.points[0, 0] = 1.0
        assert isinstance(inst.points, np.ndarray)
