"""
FPT approximation for discrete Euclidean instances.

Some k-subset of the midpoint closure cl(B) of a good bicriteria solution B
costs at most 3^(z-1) (3 - 0.0018) OPT, so the solver enumerates every
k-subset of cl(B) and keeps the best. The remaining helpers split costs into
near and far points and evaluate the inequality chain behind that bound.
"""

import logging
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Sequence

import numpy as np

from robustkz.config import settings
from robustkz.euclid.assignment import BETA0, EPS0
from robustkz.euclid.closure import midpoint_closure, require_euclidean
from robustkz.instance.model import Instance, Solution
from robustkz.solvers.bicriteria import BicriteriaSolution
from robustkz.solvers.search import SubsetSearch

logger = logging.getLogger(__name__)

RATIO_SLACK = 0.0018


def ratio_bound(z: int) -> float:
    """3^(z-1) * (3 - 0.0018) = 3^z * (1 - 0.0006)."""
    return 3.0 ** (z - 1) * (3.0 - RATIO_SLACK)


def fpt_solve(instance: Instance, bic: BicriteriaSolution, budget: Optional[int] = None,
              threads: Optional[int] = None) -> Solution:
    """
    Best k-subset of the midpoint closure of B.

    Args:
        instance: l2 instance
        bic: bicriteria solution supplying B
        budget: cap on C(|cl(B)|, k) (default: oracle budget)
        threads: worker count

    Returns:
        Solution; certified when alpha was certified by the oracle and is
        at most 1 + EPS0.

    Raises:
        NonEuclideanError: the metric is not l2 over coordinates
        BudgetExceededError: too many subsets
    """
    require_euclidean(instance.space)
    closure = midpoint_closure(instance.facilities, bic.centers, instance.space)
    size = min(instance.k, len(closure))
    result = SubsetSearch(instance, closure.members, size).run(
        budget=settings.oracle_budget if budget is None else budget,
        threads=settings.threads if threads is None else threads,
    )
    certified = bic.alpha_certified and bic.alpha <= 1 + EPS0
    logger.info("FPT over cl(B) of %d facilities: %d subsets, cost %.6g", len(closure),
                result.subsets_enumerated, result.cost)
    return instance.evaluate(result.centers, certified=certified, counters={
        "subsets_enumerated": result.subsets_enumerated,
        "closure_size": len(closure),
    })


def projection_cost(instance: Instance, centers: Sequence[int], bicriteria: Sequence[int]
                    ) -> Solution:
    """Solution pi_B(O): every center of O moved to its nearest member of B."""
    b = list(bicriteria)
    to_b = instance.space.pairwise(instance.facilities[list(centers)], instance.facilities[b])
    return instance.evaluate([b[i] for i in np.argmin(to_b, axis=1)])


class CostSplit(NamedTuple):
    near: float
    far: float


def far_mask(instance: Instance, centers: Sequence[int], bicriteria: Sequence[int],
             beta0: float = BETA0) -> np.ndarray:
    """Points with d(p, O) >= beta0 * d(p, B)."""
    to_o = instance.distances[:, list(centers)].min(axis=1)
    to_b = instance.distances[:, list(bicriteria)].min(axis=1)
    return to_o >= beta0 * to_b


def cost_split(instance: Instance, solution: Sequence[int], centers: Sequence[int],
               bicriteria: Sequence[int], beta0: float = BETA0) -> List[CostSplit]:
    """
    Per-group cost of X split over near and far points, where far means
    d(p, O) >= beta0 * d(p, B).
    """
    if not 0 < beta0 < 1:
        raise ValueError(f"beta0 must lie in (0, 1), got {beta0}")
    far = far_mask(instance, centers, bicriteria, beta0).astype(np.float64)
    service = instance.service_costs(solution)
    weights = instance.weights
    far_cost = np.asarray(weights @ (service * far)).ravel()
    near_cost = np.asarray(weights @ (service * (1.0 - far))).ravel()
    return [CostSplit(float(n), float(f)) for n, f in zip(near_cost, far_cost)]


@dataclass(frozen=True)
class BoundChain:
    """
    Per-group terms of the approximation chain: ALG, OPT and BIC costs
    restricted to near (_n) and far (_f) points.
    """

    alg_near: List[float]
    alg_far: List[float]
    opt_near: List[float]
    opt_far: List[float]
    bic_near: List[float]
    bic_far: List[float]
    beta0: float
    eps0: float

    def near_bound_holds(self, rel_tol: float = 1e-9) -> List[bool]:
        """OPT_n <= beta0 * BIC_n for every group."""
        return [o <= self.beta0 * b * (1 + rel_tol)
                for o, b in zip(self.opt_near, self.bic_near)]


def fpt_bound_chain(instance: Instance, solution: Sequence[int], centers: Sequence[int],
                    bicriteria: Sequence[int], beta0: float = BETA0, eps0: float = EPS0
                    ) -> BoundChain:
    """
    Evaluate ALG_n, ALG_f, OPT_n, OPT_f, BIC_n and BIC_f per group.

    Args:
        instance: l2 instance
        solution: X, the algorithm's centers
        centers: O, typically an optimal solution
        bicriteria: B
        beta0: far/near threshold
        eps0: saving on far points, carried for reporting
    """
    alg = cost_split(instance, solution, centers, bicriteria, beta0)
    opt = cost_split(instance, centers, centers, bicriteria, beta0)
    bic = cost_split(instance, bicriteria, centers, bicriteria, beta0)
    return BoundChain(
        alg_near=[c.near for c in alg], alg_far=[c.far for c in alg],
        opt_near=[c.near for c in opt], opt_far=[c.far for c in opt],
        bic_near=[c.near for c in bic], bic_far=[c.far for c in bic],
        beta0=beta0, eps0=eps0,
    )
