"""
Exact brute-force solver.

Ground truth for approximation ratios, coreset checks and bicriteria
certification. Every k-subset of F is evaluated directly.
"""

import logging
from typing import Dict, Optional, Tuple

from robustkz.config import settings
from robustkz.errors import BudgetExceededError
from robustkz.instance.model import Instance, Solution
from robustkz.solvers.search import SubsetSearch

logger = logging.getLogger(__name__)


def _budget(budget: Optional[int]) -> int:
    return settings.oracle_budget if budget is None else budget


def oracle_affordable(instance: Instance, budget: Optional[int] = None) -> bool:
    """True when C(|F|, k) fits within the oracle budget."""
    return SubsetSearch(instance, range(instance.f), instance.k).total <= _budget(budget)


def exact_solve(instance: Instance, budget: Optional[int] = None,
                threads: Optional[int] = None) -> Solution:
    """
    Optimal k-subset of F.

    Args:
        instance: instance to solve
        budget: maximum number of subsets to enumerate (default from settings)
        threads: worker count (default from settings)

    Returns:
        Solution with the lexicographically smallest optimal center set.

    Raises:
        BudgetExceededError: C(|F|, k) > budget
    """
    search = SubsetSearch(instance, range(instance.f), instance.k)
    result = search.run(budget=_budget(budget),
                        threads=settings.threads if threads is None else threads)
    logger.info("Oracle enumerated %d subsets, OPT = %.6g", result.subsets_enumerated, result.cost)
    return instance.evaluate(result.centers,
                             counters={"subsets_enumerated": result.subsets_enumerated})


def enumerate_costs(instance: Instance, budget: Optional[int] = None
                    ) -> Dict[Tuple[int, ...], float]:
    """
    Cost of every k-subset of F.

    Raises:
        BudgetExceededError: C(|F|, k) > budget
    """
    search = SubsetSearch(instance, range(instance.f), instance.k)
    if search.total > _budget(budget):
        raise BudgetExceededError("cost enumeration", search.total, _budget(budget))
    return search.all_costs()
