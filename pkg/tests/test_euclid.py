from fractions import Fraction

import numpy as np
import pytest

from robustkz.errors import DegenerateConfigurationError, NonEuclideanError
from robustkz.euclid import (
    check_assignment_lemma,
    check_claim,
    check_projection_lemma,
    claim_value,
    cost_split,
    displacement_ratio,
    fpt_bound_chain,
    fpt_solve,
    midpoint_closure,
    projection_assign,
    projection_cost,
    ratio_bound,
    sigma_assign,
)
from robustkz.euclid.assignment import GAMMA_BOUND
from robustkz.instance.model import Instance
from robustkz.metric.space import LqSpace
from robustkz.solvers import AlphaMode, BicriteriaSolution, bicriteria_greedy, exact_solve

from conftest import random_instance


def tight_bicriteria(instance):
    cost, _ = instance.solution_cost((0, 2))
    return BicriteriaSolution((0, 2), 2.0, 1.0, AlphaMode.CERTIFIED, cost, 1.0)


class TestClosure:

    def test_line_midpoint(self):
        closure = midpoint_closure(np.array([[-1.0], [0.0], [1.0]]), [0, 2])
        assert closure.members == (0, 1, 2)
        assert closure.origin[1] == ("midpoint", 0, 2)
        assert closure.origin[0] == ("center", 0, 0)

    def test_size_bound(self):
        rng = np.random.default_rng(0)
        facilities = rng.normal(size=(30, 3))
        b = [0, 4, 9, 17]
        closure = midpoint_closure(facilities, b)
        assert set(b) <= set(closure.members)
        assert len(closure) <= len(b) + len(b) * (len(b) + 1) // 2

    def test_rejects_l1(self):
        with pytest.raises(NonEuclideanError):
            midpoint_closure(np.zeros((2, 1)), [0], LqSpace(q=1.0))

    def test_rejects_empty_center_set(self):
        with pytest.raises(ValueError):
            midpoint_closure(np.zeros((2, 1)), [])


class TestAssignment:

    def test_projection_ties_to_lowest_index(self):
        assert projection_assign([[0.0]], [[-1.0], [1.0]]).tolist() == [0]

    def test_displacement_ratio(self):
        assert displacement_ratio([0.0], [1.0], [0.0], [1.0]) == 1.0

    def test_displacement_ratio_degenerate(self):
        with pytest.raises(DegenerateConfigurationError):
            displacement_ratio([0.0], [1.0], [0.0], [0.0])

    def test_crowded_mirror_uses_closure(self):
        report = sigma_assign([[0.0]], [[-1.0], [1.0]], [[-1.0], [0.0], [1.0]])
        assert report.uses_closure == [True]
        assert report.sigma.tolist() == [[0.0]]

    def test_empty_mirror_ball_keeps_projection(self):
        report = sigma_assign([[0.0]], [[-1.0], [5.0]], [[-1.0], [2.0], [5.0]])
        assert report.uses_closure == [False]
        assert report.sigma.tolist() == [[-1.0]]

    def test_far_ratios(self):
        report = sigma_assign([[0.0]], [[-1.0], [5.0]], [[-1.0], [5.0]], points=[[0.0], [3.0]])
        assert report.far.tolist() == [False, True]
        assert report.ratios[1] == pytest.approx(4.0 / 8.0)
        assert report.max_far_ratio == pytest.approx(0.5)


class TestMonteCarlo:

    def test_projection_lemma(self):
        report = check_projection_lemma(samples=1000, dims=(1, 2, 3, 5, 10), seed=0)
        assert report.passed, report.failures[:3]
        assert report.assertions == 1000
        assert report.metrics["max_ratio"] <= 1.0 + 1e-12

    def test_assignment_lemma(self):
        report = check_assignment_lemma(samples=100_000, seed=1)
        assert report.passed, report.failures[:3]
        assert report.metrics["far_points"] > 0
        assert report.metrics["max_ratio"] <= GAMMA_BOUND + 1e-9

    def test_assignment_report_independent_of_threads(self):
        one = check_assignment_lemma(samples=3000, seed=2, threads=1)
        four = check_assignment_lemma(samples=3000, seed=2, threads=4)
        assert one.model_dump() == four.model_dump()

    def test_claim_values(self):
        assert claim_value(1) == Fraction(19982, 10000)
        assert claim_value(2) == Fraction(1994028, 1000000)
        report = check_claim()
        assert report.passed
        assert report.assertions == 10


class TestFpt:

    def test_ratio_bound(self):
        assert ratio_bound(1) == pytest.approx(2.9982)
        assert ratio_bound(2) == pytest.approx(9 * (1 - 0.0006))

    def test_tight_line_instance(self, tight_instance):
        bic = tight_bicriteria(tight_instance)
        opt = exact_solve(tight_instance)
        assert opt.cost == 0.5
        assert projection_cost(tight_instance, opt.centers, bic.centers).cost == 1.5
        solution = fpt_solve(tight_instance, bic)
        assert solution.cost == 0.5
        assert solution.certified
        assert solution.counters["closure_size"] == 3

    def test_rejects_non_euclidean(self):
        inst = Instance(LqSpace(q=1.0), [0.5], [-1.0, 0.0, 1.0], 1, 1, [{0: 1.0}])
        bic = BicriteriaSolution((0, 2), 2.0, 1.0, AlphaMode.CERTIFIED, 1.5)
        with pytest.raises(NonEuclideanError):
            fpt_solve(inst, bic)

    @pytest.mark.parametrize("seed", range(50))
    @pytest.mark.parametrize("z", [1, 2])
    def test_margin_on_random_instances(self, seed, z):
        inst = random_instance(seed=300 + seed, n=12, f=10, k=2, z=z, m=2, dim=5)
        bic = bicriteria_greedy(inst, target_beta=2.0)
        opt = exact_solve(inst)
        solution = fpt_solve(inst, bic)
        assert solution.cost >= opt.cost * (1 - 1e-12)
        assert solution.cost <= ratio_bound(z) * opt.cost * (1 + 1e-9)
        assert solution.cost <= 3 ** z * opt.cost
        chain = fpt_bound_chain(inst, solution.centers, opt.centers, bic.centers)
        assert all(chain.near_bound_holds())

    def test_cost_split_adds_up(self, small_instance):
        bic = bicriteria_greedy(small_instance)
        opt = exact_solve(small_instance)
        _, per_group = small_instance.solution_cost((1, 2))
        for split, total in zip(cost_split(small_instance, (1, 2), opt.centers, bic.centers),
                                per_group):
            assert split.near + split.far == pytest.approx(total)

    def test_cost_split_rejects_bad_beta(self, small_instance):
        with pytest.raises(ValueError):
            cost_split(small_instance, (0, 1), (0, 1), (0, 1), beta0=1.5)
