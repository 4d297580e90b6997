import itertools

import pytest

from robustkz.errors import BudgetExceededError
from robustkz.instance.model import Instance
from robustkz.metric.space import LqSpace
from robustkz.solvers import enumerate_costs, exact_solve
from robustkz.solvers.oracle import oracle_affordable
from robustkz.solvers.search import SubsetSearch

from conftest import random_instance


def test_line_optimum(line_instance):
    solution = exact_solve(line_instance)
    assert solution.centers == (0,)
    assert solution.cost == 2.0
    assert solution.counters["subsets_enumerated"] == 2


def test_ties_pick_lexicographically_smallest():
    inst = Instance(LqSpace(q=2.0), [0.0], [1.0, -1.0, 1.0], 1, 1, [{0: 1.0}])
    assert exact_solve(inst).centers == (0,)


def test_k_equals_f_single_subset():
    inst = random_instance(seed=1, f=3, k=3)
    solution = exact_solve(inst)
    assert solution.centers == (0, 1, 2)
    assert solution.counters["subsets_enumerated"] == 1


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("k", [1, 2, 3])
def test_matches_brute_force(seed, k):
    inst = random_instance(seed=seed, n=10, f=6, k=k, m=3)
    best = min(inst.solution_cost(x)[0] for x in itertools.combinations(range(inst.f), k))
    assert exact_solve(inst).cost == pytest.approx(best, rel=1e-12)


@pytest.mark.parametrize("seed", range(3))
def test_result_independent_of_threads(seed):
    inst = random_instance(seed=seed, n=15, f=9, k=3, m=4)
    one = exact_solve(inst, threads=1)
    four = exact_solve(inst, threads=4)
    assert one.centers == four.centers
    assert one.cost == four.cost
    assert one.counters == four.counters


def test_budget_exceeded():
    inst = random_instance(seed=0, f=8, k=4)
    assert not oracle_affordable(inst, budget=10)
    with pytest.raises(BudgetExceededError) as info:
        exact_solve(inst, budget=10)
    assert info.value.required == 70
    assert info.value.budget == 10


def test_enumerate_costs_covers_every_subset():
    inst = random_instance(seed=4, f=5, k=2)
    costs = enumerate_costs(inst)
    assert len(costs) == 10
    for centers, cost in costs.items():
        assert cost == pytest.approx(inst.solution_cost(centers)[0], rel=1e-12)
    assert min(costs.values()) == pytest.approx(exact_solve(inst).cost, rel=1e-12)


def test_truncated_search_evaluates_a_prefix():
    inst = random_instance(seed=5, f=6, k=2)
    result = SubsetSearch(inst, range(inst.f), 2).run(budget=4, truncate=True)
    assert result.truncated
    assert result.subsets_enumerated == 4
    prefix = list(itertools.combinations(range(6), 2))[:4]
    assert result.cost == pytest.approx(min(inst.solution_cost(x)[0] for x in prefix))


@pytest.mark.parametrize("seed", range(10))
def test_weight_scaling_keeps_the_optimum(seed):
    inst = random_instance(seed=seed, n=12, f=8, k=2, m=3)
    scaled = Instance(inst.space, inst.points, inst.facilities, inst.k, inst.z,
                      [{p: 3.7 * w for p, w in g.items()} for g in inst.groups])
    base, big = exact_solve(inst), exact_solve(scaled)
    assert big.centers == base.centers
    assert big.cost == pytest.approx(3.7 * base.cost, rel=1e-12)
    _, before = inst.solution_cost(base.centers)
    _, after = scaled.solution_cost(base.centers)
    assert after == pytest.approx(3.7 * before, rel=1e-12)


@pytest.mark.parametrize("seed", range(10))
def test_extra_facility_never_raises_the_optimum(seed):
    inst = random_instance(seed=seed, n=12, f=7, k=2, m=2)
    fewer = inst.with_facilities(inst.facilities[:-1])
    more_cost = min(enumerate_costs(inst).values())
    assert more_cost <= min(enumerate_costs(fewer).values()) * (1 + 1e-12)
