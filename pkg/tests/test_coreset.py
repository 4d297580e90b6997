import dataclasses
import math
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from robustkz.coreset import (
    build_coreset,
    check_coreset_guarantee,
    coreset_error_report,
    coreset_instance,
    coreset_to_dict,
)
from robustkz.coreset.builder import _ring_indices, sub_ball_radius
from robustkz.errors import DegenerateConfigurationError
from robustkz.instance.model import Instance
from robustkz.metric.space import LqSpace
from robustkz.solvers import AlphaMode, BicriteriaSolution, bicriteria_exact, bicriteria_greedy

from conftest import random_instance

GRID = [(k, z, eps) for k in (1, 2, 3) for z in (1, 2) for eps in (0.2, 0.4)]


def test_ring_indices():
    dist = np.array([0.0, 1.0, 1.5, 2.0, 4.0001])
    assert _ring_indices(dist, 1.0).tolist() == [0, 0, 1, 1, 3]


def test_sub_ball_radius_scales_with_ring():
    assert sub_ball_radius(0.5, 1.0, 1, 0, 27.0) == pytest.approx(0.5)
    assert sub_ball_radius(0.5, 1.0, 1, 3, 27.0) == pytest.approx(4.0)


def test_rejects_eps_outside_unit_interval(small_instance):
    bic = bicriteria_exact(small_instance)
    for eps in (0.0, 1.0, -0.1):
        with pytest.raises(ValueError):
            build_coreset(small_instance, bic, eps)


def test_rejects_unknown_alpha(small_instance):
    bic = bicriteria_greedy(small_instance, budget=1)
    assert bic.alpha_mode is AlphaMode.UNKNOWN
    with pytest.raises(DegenerateConfigurationError):
        build_coreset(small_instance, bic, 0.3)


def test_zero_cost_bicriteria_gives_trivial_coreset():
    pts = [0.0, 0.0, 0.0, 10.0, 10.0, 10.0]
    inst = Instance(LqSpace(q=2.0), pts, pts, 2, 1, [{0: 1.0, 1: 1.0, 3: 2.0}, {4: 1.0, 5: 1.0}],
                    facilities_alias=True)
    coreset = build_coreset(inst, bicriteria_exact(inst), 0.3)
    assert coreset.params.degenerate
    assert coreset.points == (0, 3)
    assert coreset.groups == ({0: 2.0, 3: 2.0}, {3: 2.0})
    report = check_coreset_guarantee(inst, coreset)
    assert report.passed
    assert report.metrics["max_relative_gap"] == 0.0


@pytest.mark.parametrize("seed", range(5))
def test_structure(seed):
    inst = random_instance(seed=seed, n=30, f=8, k=2, m=3)
    coreset = build_coreset(inst, bicriteria_exact(inst), 0.4)
    assert set(coreset.rep) == set(inst.active_points.tolist())
    assert set(coreset.rep.values()) == set(coreset.points)
    for p, r in coreset.rep.items():
        assert r <= p
        cell = coreset.ring_assignment[p]
        moved = inst.space.distance(inst.points[p], inst.points[r])
        assert moved <= 2 * coreset.sub_ball_radius(cell.ring) * (1 + 1e-9)
    for before, after in zip(inst.groups, coreset.groups):
        assert sum(after.values()) == pytest.approx(sum(before.values()), rel=1e-12)
    size = coreset.size_report()
    assert size["points"] == len(coreset.points)
    assert size["points"] <= size["size_bound"]


@pytest.mark.parametrize("seed", range(13))
@pytest.mark.parametrize("k, z, eps", GRID[::3])
def test_guarantee_holds_for_every_subset(seed, k, z, eps):
    inst = random_instance(seed=100 + seed, n=25, f=10, k=k, z=z, m=3)
    coreset = build_coreset(inst, bicriteria_exact(inst), eps)
    report = check_coreset_guarantee(inst, coreset)
    assert report.passed, report.failures[:3]
    assert report.metrics["subsets"] == math.comb(10, k)
    assert report.metrics["per_group_lower_bound_misses"] == 0


@pytest.mark.parametrize("seed", range(4))
def test_guarantee_with_greedy_seeding(seed):
    inst = random_instance(seed=seed, n=20, f=9, k=2, m=2)
    coreset = build_coreset(inst, bicriteria_greedy(inst, target_beta=2.0), 0.3)
    assert check_coreset_guarantee(inst, coreset).passed


def test_error_split_adds_up(small_instance):
    coreset = build_coreset(small_instance, bicriteria_exact(small_instance), 0.4)
    reduced = coreset_instance(coreset, small_instance)
    centers = (0, 3)
    _, before = small_instance.solution_cost(centers)
    _, after = reduced.solution_cost(centers)
    for gi, split in enumerate(coreset_error_report(small_instance, coreset, centers)):
        assert split.total == pytest.approx(split.near + split.bicriteria_far + split.solution_far)
        assert abs(after[gi] - before[gi]) <= split.total * (1 + 1e-9) + 1e-12


def test_configured_alpha_is_used():
    inst = random_instance(seed=9)
    bic = bicriteria_exact(inst)
    loose = BicriteriaSolution(bic.centers, 1.0, 4.0, AlphaMode.CONFIGURED, bic.cost)
    assert build_coreset(inst, loose, 0.3).params.alpha == 4.0


def test_document(small_instance):
    coreset = build_coreset(small_instance, bicriteria_exact(small_instance), 0.4)
    doc = coreset_to_dict(coreset, small_instance)
    assert doc["source_points"] == list(coreset.points)
    assert set(doc["rep"].values()) <= set(range(len(coreset.points)))
    assert doc["params"]["eps"] == 0.4
    assert doc["k"] == small_instance.k
    assert len(doc["groups"]) == small_instance.m


def test_underweighted_group_fails_the_lower_bound(small_instance):
    coreset = build_coreset(small_instance, bicriteria_exact(small_instance), 0.4)
    halved = {p: w / 2 for p, w in coreset.groups[0].items()}
    tampered = dataclasses.replace(coreset, groups=(halved, *coreset.groups[1:]))
    report = check_coreset_guarantee(small_instance, tampered)
    assert not report.passed
    assert report.metrics["per_group_lower_bound_misses"] > 0


@pytest.mark.parametrize("module", ["robustkz.coreset", "robustkz.solvers", "robustkz.euclid"])
def test_package_imports_on_its_own(module):
    root = Path(__file__).resolve().parent.parent
    result = subprocess.run([sys.executable, "-c", f"import {module}"], cwd=root,
                            capture_output=True, text=True)
    assert result.returncode == 0, result.stderr
