# Exact oracle, bicriteria providers and the leader-guessing scheme
from robustkz.solvers.bicriteria import (
    AlphaMode,
    BicriteriaSolution,
    bicriteria_exact,
    bicriteria_greedy,
    certify_alpha,
)
from robustkz.solvers.epas import (
    LeaderGuess,
    epas_solve,
    leader_search,
    radii_grid,
    single_candidate_solution,
)
from robustkz.solvers.oracle import enumerate_costs, exact_solve

__all__ = [
    "AlphaMode",
    "BicriteriaSolution",
    "LeaderGuess",
    "bicriteria_exact",
    "bicriteria_greedy",
    "certify_alpha",
    "enumerate_costs",
    "epas_solve",
    "exact_solve",
    "leader_search",
    "radii_grid",
    "single_candidate_solution",
]
