"""
Exhaustive check of the coreset guarantee over every k-subset of F.

For each center set X and group w, with w_X the costliest group at X:
    |cost(eta(w), X) - cost(w, X)| <= eps * cost(w_X, X)
which gives cost(eta(w), X) <= (1 + eps) * cost(w_X, X) and the two-sided
bound on the robust objective itself. Every group also has to keep
cost(eta(w), X) >= (1 - eps) * cost(w, X). The per-part errors are held to
eps/3 * OPT (P_R, P_B) and eps/3 * cost(w, X) (P_X).
"""

import logging
import math
from typing import Optional

from robustkz.coreset.builder import Coreset, coreset_error_report, coreset_instance
from robustkz.instance.model import Instance
from robustkz.reports import CheckReport
from robustkz.solvers.oracle import enumerate_costs

logger = logging.getLogger(__name__)

REL_TOL = 1e-9


def _leq(a: float, b: float) -> bool:
    return a <= b or math.isclose(a, b, rel_tol=REL_TOL, abs_tol=1e-12)


def check_coreset_guarantee(instance: Instance, coreset: Coreset,
                            budget: Optional[int] = None) -> CheckReport:
    """
    Verify the coreset on every k-subset X.

    Args:
        instance: original instance
        coreset: coreset built from it
        budget: cap on C(|F|, k)

    Returns:
        CheckReport of kind "coreset".
    """
    eps = coreset.params.eps
    reduced = coreset_instance(coreset, instance)
    report = CheckReport(kind="coreset", params={
        "eps": eps, "alpha": coreset.params.alpha, "k": instance.k, "z": instance.z,
        **coreset.size_report(),
    })

    # Weight conservation and representative displacement do not depend on X
    for gi, (w, eta) in enumerate(zip(instance.groups, coreset.groups)):
        total = sum(v for v in w.values() if v > 0)
        report.record(math.isclose(sum(eta.values()), total, rel_tol=REL_TOL),
                      "group weight not conserved", group=gi)
    for p, r in coreset.rep.items():
        cell = coreset.ring_assignment[p]
        limit = 2 * coreset.sub_ball_radius(cell.ring)
        moved = instance.space.pairwise(instance.points[[p]], instance.points[[r]])[0, 0]
        report.record(_leq(moved, limit), "representative displaced too far", point=p, rep=r,
                      distance=moved, limit=limit)

    originals = enumerate_costs(instance, budget)
    opt = min(originals.values())
    lower_misses = 0
    worst_gap = 0.0
    for x in originals:
        _, before = instance.solution_cost(x)
        _, after = reduced.solution_cost(x)
        top = float(before.max())
        splits = coreset_error_report(instance, coreset, x)
        for gi in range(instance.m):
            gap = abs(after[gi] - before[gi])
            report.record(_leq(gap, eps * top), "displacement error above eps * cost(w_X, X)",
                          centers=x, group=gi, error=gap, limit=eps * top)
            split = splits[gi]
            report.record(_leq(split.near, eps / 3 * opt), "P_R error above eps/3 * OPT",
                          centers=x, group=gi, error=split.near)
            report.record(_leq(split.bicriteria_far, eps / 3 * opt),
                          "P_B error above eps/3 * OPT", centers=x, group=gi,
                          error=split.bicriteria_far)
            report.record(_leq(split.solution_far, eps / 3 * before[gi]),
                          "P_X error above eps/3 * cost(w, X)", centers=x, group=gi,
                          error=split.solution_far)
            if not report.record(_leq((1 - eps) * before[gi], after[gi]),
                                 "group cost below (1 - eps) * cost(w, X)", centers=x,
                                 group=gi, original=before[gi], coreset=after[gi]):
                lower_misses += 1
            if top > 0:
                worst_gap = max(worst_gap, gap / top)
        robust_after = float(after.max())
        report.record(_leq((1 - eps) * top, robust_after) and _leq(robust_after, (1 + eps) * top),
                      "robust cost outside [(1-eps), (1+eps)] of the original", centers=x,
                      original=top, coreset=robust_after)

    report.metrics.update({
        "subsets": len(originals),
        "opt": opt,
        "max_relative_gap": worst_gap,
        "per_group_lower_bound_misses": lower_misses,
    })
    logger.info("Coreset check over %d subsets: %s", len(originals),
                "passed" if report.passed else f"{report.failure_count} failures")
    return report

