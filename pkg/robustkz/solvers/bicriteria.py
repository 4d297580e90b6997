"""
(alpha, beta)-bicriteria solutions: at most beta*k centers costing at most
alpha times the optimum. They seed the coreset builder and the Euclidean FPT
solver, which consume any such pair, so alpha is carried explicitly and
certified against the oracle whenever that is affordable.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Tuple

import numpy as np

from robustkz.errors import DegenerateConfigurationError
from robustkz.instance.model import Instance
from robustkz.solvers.oracle import exact_solve, oracle_affordable

logger = logging.getLogger(__name__)


class AlphaMode(str, Enum):
    CERTIFIED = "certified-by-oracle"
    CONFIGURED = "configured"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class BicriteriaSolution:
    """Open facility set B with its approximation factor."""

    centers: Tuple[int, ...]
    beta: float
    alpha: float
    alpha_mode: AlphaMode
    cost: float
    raw_ratio: Optional[float] = None

    def __post_init__(self):
        if not self.centers:
            raise ValueError("a bicriteria solution needs at least one center")
        if self.alpha_mode is AlphaMode.CERTIFIED and not self.alpha >= 1:
            raise ValueError(f"certified alpha must be >= 1, got {self.alpha}")

    @property
    def alpha_certified(self) -> bool:
        return self.alpha_mode is AlphaMode.CERTIFIED


def certify_alpha(instance: Instance, centers: Sequence[int], budget: Optional[int] = None,
                  threads: Optional[int] = None) -> float:
    """
    Ratio cost(B) / OPT with B treated as an open set.

    Returns 1 when both costs are zero. The ratio may fall below 1 when
    |B| > k.

    Raises:
        DegenerateConfigurationError: OPT = 0 while cost(B) > 0
        BudgetExceededError: the oracle is unaffordable
    """
    cost, _ = instance.solution_cost(centers)
    opt = exact_solve(instance, budget=budget, threads=threads).cost
    if opt == 0:
        if cost == 0:
            return 1.0
        raise DegenerateConfigurationError(
            f"OPT is 0 but the bicriteria solution costs {cost}: ratio is infinite"
        )
    return cost / opt


def bicriteria_exact(instance: Instance, budget: Optional[int] = None,
                     threads: Optional[int] = None) -> BicriteriaSolution:
    """The exact optimum as a (1, 1)-bicriteria solution."""
    opt = exact_solve(instance, budget=budget, threads=threads)
    return BicriteriaSolution(centers=opt.centers, beta=1.0, alpha=1.0,
                              alpha_mode=AlphaMode.CERTIFIED, cost=opt.cost, raw_ratio=1.0)


def _greedy_centers(instance: Instance, count: int) -> Tuple[int, ...]:
    """Farthest-point traversal on max_w w[p] * dist(p, B)^z."""
    # max_w w[p] * c = (max_w w[p]) * c for c >= 0
    top_weight = np.asarray(instance.weights.max(axis=0).todense()).ravel()
    dist = instance.distances
    heaviest = int(np.argmax(top_weight))
    opened = [int(np.argmin(dist[heaviest]))]
    is_open = np.zeros(instance.f, dtype=bool)
    is_open[opened[0]] = True
    service = instance.cost_matrix[:, opened[0]].copy()

    while len(opened) < count:
        score = top_weight * service
        if score.max() > 0:
            target = int(np.argmax(score))
            row = np.where(is_open, np.inf, dist[target])
            pick = int(np.argmin(row))
        else:
            # every weighted point is served at distance 0; pad with far facilities
            spread = instance.space.pairwise(instance.facilities,
                                             instance.facilities[opened]).min(axis=1)
            pick = int(np.argmax(np.where(is_open, -np.inf, spread)))
        opened.append(pick)
        is_open[pick] = True
        service = np.minimum(service, instance.cost_matrix[:, pick])
    return tuple(sorted(opened))


def bicriteria_greedy(instance: Instance, target_beta: float = 2.0,
                      assume_alpha: Optional[float] = None, budget: Optional[int] = None,
                      threads: Optional[int] = None) -> BicriteriaSolution:
    """
    Greedy bicriteria solution with floor(target_beta * k) centers.

    Args:
        instance: instance to cover
        target_beta: center multiplier, at least 1
        assume_alpha: alpha to record when the oracle is unaffordable
        budget: oracle budget used for certification
        threads: oracle worker count

    Returns:
        BicriteriaSolution; alpha is certified by the oracle when affordable,
        otherwise taken from assume_alpha, otherwise infinite (unknown).
    """
    if not target_beta >= 1:
        raise ValueError(f"target_beta must be >= 1, got {target_beta}")
    count = int(math.floor(target_beta * instance.k))
    if count > instance.f:
        raise ValueError(f"target_beta * k = {count} exceeds the number of facilities {instance.f}")

    centers = _greedy_centers(instance, count)
    cost, _ = instance.solution_cost(centers)
    beta = len(centers) / instance.k

    if oracle_affordable(instance, budget):
        ratio = certify_alpha(instance, centers, budget=budget, threads=threads)
        logger.info("Greedy bicriteria: %d centers, certified ratio %.6g", len(centers), ratio)
        return BicriteriaSolution(centers, beta, max(1.0, ratio), AlphaMode.CERTIFIED, cost, ratio)
    if assume_alpha is not None:
        if not assume_alpha >= 1:
            raise ValueError(f"assume_alpha must be >= 1, got {assume_alpha}")
        return BicriteriaSolution(centers, beta, float(assume_alpha), AlphaMode.CONFIGURED, cost)
    logger.warning("Oracle unaffordable and no alpha configured; alpha is unknown")
    return BicriteriaSolution(centers, beta, math.inf, AlphaMode.UNKNOWN, cost)
