"""
Leader-guessing approximation scheme and the full EPAS pipeline.

For every leader point l and radius lam on a geometric grid, the facilities
in ball(l, lam) are decomposed into sub-balls of radius eps/(20z) * lam and
the lowest-index facility of each sub-ball becomes a candidate. Leader and
radius tuples range independently per coordinate with repetition, so the
union of T_1 x ... x T_k over all guesses is exactly the set of k-tuples of
U, the union of all candidate lists. Leader search therefore evaluates each
min(k, |U|)-subset of U once instead of re-evaluating it per guess.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from robustkz.config import settings
from robustkz.coreset.builder import build_coreset, coreset_instance
from robustkz.instance.model import Instance, Solution
from robustkz.metric.nets import greedy_net, net_cells
from robustkz.solvers.bicriteria import (
    AlphaMode,
    BicriteriaSolution,
    bicriteria_exact,
    bicriteria_greedy,
)
from robustkz.solvers.oracle import oracle_affordable
from robustkz.solvers.search import SubsetSearch

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LeaderGuess:
    """Leader points and ball radii that produced a center set."""

    leaders: Tuple[int, ...]
    radii: Tuple[float, ...]

    def __post_init__(self):
        if len(self.leaders) != len(self.radii):
            raise ValueError("one radius per leader")
        if any(r < 0 for r in self.radii):
            raise ValueError("radii must be nonnegative")


@dataclass(frozen=True)
class LeaderSearchOutcome:
    solution: Solution
    guess: LeaderGuess
    candidates: Tuple[int, ...]
    tuples_nominal: int


def radii_grid(instance: Instance, eps: float) -> List[float]:
    """
    Powers of (1 + eps/(10z)) from the smallest positive point-facility
    distance up to and including the first value >= the largest one.
    """
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    d = instance.distances
    positive = d[d > 0]
    if len(positive) == 0:
        return [0.0]
    base, top = float(positive.min()), float(positive.max())
    step = 1.0 + eps / (10.0 * instance.z)
    grid = []
    i = 0
    while True:
        value = base * step ** i
        grid.append(value)
        if value >= top:
            return grid
        i += 1


class LeaderSearch:
    """Candidate generation and search for one instance and accuracy."""

    def __init__(self, instance: Instance, eps: float):
        if not eps > 0:
            raise ValueError(f"eps must be positive, got {eps}")
        self.instance = instance
        self.eps = eps
        self.grid = radii_grid(instance, eps)
        # lam = 0 stands for a leader sitting on a facility
        self.radii = [0.0] + [r for r in self.grid if r > 0]
        self._ff = instance.space.pairwise(instance.facilities, instance.facilities)
        self.candidate_total = 0

    def candidates_for(self, leader: int, radius: float) -> List[int]:
        """T(leader, radius): lowest-index facility of each sub-ball of the ball."""
        to_leader = self.instance.distances[leader]
        inside = np.flatnonzero(to_leader <= radius)
        if len(inside) == 0:
            return []
        if radius == 0:
            return [int(inside[0])]
        sub = self._ff[np.ix_(inside, inside)]
        net = greedy_net(sub, self.eps / (20.0 * self.instance.z) * radius)
        cells = net_cells(sub[:, net])
        return sorted(int(inside[cells == c].min()) for c in np.unique(cells))

    def guesses(self) -> Dict[int, Tuple[int, float]]:
        """
        Union of all candidate lists, each facility mapped to the first
        (leader, radius) guess that produced it.
        """
        origin: Dict[int, Tuple[int, float]] = {}
        self.candidate_total = 0
        for leader in range(self.instance.n):
            for radius in self.radii:
                found = self.candidates_for(leader, radius)
                self.candidate_total += len(found)
                for f in found:
                    origin.setdefault(f, (leader, radius))
        return origin

    def run(self, budget: Optional[int] = None, threads: Optional[int] = None
            ) -> LeaderSearchOutcome:
        origin = self.guesses()
        union = sorted(origin)
        size = min(self.instance.k, len(union))
        tuples_nominal = self.candidate_total ** self.instance.k
        result = SubsetSearch(self.instance, union, size).run(
            budget=settings.search_budget if budget is None else budget,
            threads=settings.threads if threads is None else threads,
            truncate=True,
        )
        counters = {
            "tuples_nominal": tuples_nominal,
            "subsets_enumerated": result.subsets_enumerated,
            "candidate_facilities": len(union),
            "guesses": self.instance.n * len(self.radii),
        }
        logger.info("Leader search: %d candidates, %d subsets evaluated, OPT estimate %.6g",
                    len(union), result.subsets_enumerated, result.cost)
        solution = self.instance.evaluate(result.centers, certified=not result.truncated,
                                          counters=counters)
        guess = LeaderGuess(tuple(origin[c][0] for c in solution.centers),
                            tuple(origin[c][1] for c in solution.centers))
        return LeaderSearchOutcome(solution, guess, tuple(union), tuples_nominal)


def leader_search(instance: Instance, eps: float, budget: Optional[int] = None,
                  threads: Optional[int] = None) -> Solution:
    """
    (1 + eps)-approximation by leader guessing.

    Args:
        instance: instance to solve (usually a coreset instance)
        eps: accuracy
        budget: cap on evaluated subsets; when hit the best-so-far solution is
            returned with certified=False
        threads: worker count
    """
    return LeaderSearch(instance, eps).run(budget, threads).solution


def single_candidate_solution(instance: Instance, leaders: Sequence[int],
                              radii: Sequence[float]) -> Solution:
    """One arbitrary (lowest-index) facility from each ball(leader, radius)."""
    guess = LeaderGuess(tuple(int(l) for l in leaders), tuple(float(r) for r in radii))
    centers = []
    for leader, radius in zip(guess.leaders, guess.radii):
        inside = np.flatnonzero(instance.distances[leader] <= radius)
        if len(inside) == 0:
            raise ValueError(f"ball({leader}, {radius}) contains no facility")
        centers.append(int(inside[0]))
    return instance.evaluate(centers)


def choose_bicriteria(instance: Instance, mode: str = "auto", beta: float = 2.0,
                      assume_alpha: Optional[float] = None, budget: Optional[int] = None,
                      threads: Optional[int] = None) -> BicriteriaSolution:
    """Bicriteria provider by name: exact, greedy, or exact when affordable."""
    if mode not in ("auto", "exact", "greedy"):
        raise ValueError(f"unknown bicriteria provider {mode!r}")
    if mode == "exact" or (mode == "auto" and oracle_affordable(instance, budget)):
        return bicriteria_exact(instance, budget=budget, threads=threads)
    return bicriteria_greedy(instance, target_beta=beta, assume_alpha=assume_alpha,
                             budget=budget, threads=threads)


def epas_solve(instance: Instance, eps: float, bicriteria: Optional[BicriteriaSolution] = None,
               search_budget: Optional[int] = None, threads: Optional[int] = None,
               **bicriteria_options) -> Solution:
    """
    Coreset at eps/10, leader search at eps/10, cost re-evaluated on the
    original instance.

    Args:
        instance: original instance
        eps: accuracy in (0, 1)
        bicriteria: precomputed bicriteria solution (built with
            choose_bicriteria(**bicriteria_options) when omitted)
        search_budget: cap on subsets evaluated by leader search
        threads: worker count

    Returns:
        Solution on the original instance; certified when the search was
        complete and the bicriteria alpha came from the oracle.
    """
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    bic = bicriteria or choose_bicriteria(instance, threads=threads, **bicriteria_options)
    coreset = build_coreset(instance, bic, eps / 10)
    reduced = coreset_instance(coreset, instance)
    found = leader_search(reduced, eps / 10, budget=search_budget, threads=threads)
    counters = dict(found.counters)
    counters["coreset_points"] = len(coreset.points)
    certified = found.certified and bic.alpha_mode is AlphaMode.CERTIFIED
    solution = instance.evaluate(found.centers, certified=certified, counters=counters)
    logger.info("EPAS: coreset of %d points, cost %.6g (certified=%s)", len(coreset.points),
                solution.cost, certified)
    return solution


def certified_epas_ratio(eps: float) -> float:
    """(1 + eps/10)^2 * (1 + 2 eps/10), at most 1 + eps for eps in (0, 1)."""
    e = eps / 10
    return (1 + e) ** 2 * (1 + 2 * e)
