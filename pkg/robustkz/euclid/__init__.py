# Euclidean FPT approximation: midpoint closure, assignment rules and checkers
from robustkz.euclid.assignment import (
    AssignmentReport,
    displacement_ratio,
    projection_assign,
    sigma_assign,
)
from robustkz.euclid.closure import ClosureSet, midpoint_closure
from robustkz.euclid.fpt import (
    cost_split,
    fpt_bound_chain,
    fpt_solve,
    projection_cost,
    ratio_bound,
)
from robustkz.euclid.montecarlo import (
    check_assignment_lemma,
    check_claim,
    check_projection_lemma,
    claim_value,
)

__all__ = [
    "AssignmentReport",
    "ClosureSet",
    "check_assignment_lemma",
    "check_claim",
    "check_projection_lemma",
    "claim_value",
    "cost_split",
    "displacement_ratio",
    "fpt_bound_chain",
    "fpt_solve",
    "midpoint_closure",
    "projection_assign",
    "projection_cost",
    "ratio_bound",
    "sigma_assign",
]
