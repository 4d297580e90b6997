"""
Machine-readable solver output.
"""

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from robustkz.instance.io import instance_digest
from robustkz.instance.model import Instance, Solution


class SolutionDoc(BaseModel):
    centers: List[int]
    cost: float
    group_costs: List[float]


class Certification(BaseModel):
    ratio_bound: Optional[float] = None
    certified: bool


class RunResult(BaseModel):
    """One solver run: what was asked, on which instance, and what came out."""

    command: str
    params: Dict[str, Any] = Field(default_factory=dict)
    instance_digest: str
    algo: str
    solution: SolutionDoc
    certification: Certification
    counters: Dict[str, int] = Field(default_factory=dict)
    tuples_enumerated: int = 0
    wall_ms: Optional[float] = None
    seed: Optional[int] = None


def run_result(instance: Instance, solution: Solution, algo: str, ratio_bound: Optional[float],
               params: Dict[str, Any], wall_ms: Optional[float] = None,
               seed: Optional[int] = None) -> RunResult:
    """Build a RunResult, re-deriving the cost from the centers."""
    fresh = instance.evaluate(solution.centers, certified=solution.certified,
                              counters=solution.counters)
    counters = {k: int(v) for k, v in sorted(fresh.counters.items())}
    return RunResult(
        command="solve",
        params=params,
        instance_digest=instance_digest(instance),
        algo=algo,
        solution=SolutionDoc(centers=list(fresh.centers), cost=fresh.cost,
                             group_costs=list(fresh.group_costs)),
        certification=Certification(ratio_bound=ratio_bound, certified=fresh.certified),
        counters=counters,
        tuples_enumerated=counters.get("subsets_enumerated", 0),
        wall_ms=wall_ms,
        seed=seed,
    )
