"""
Greedy eps-nets and ball decomposition over finite candidate sets.

A ball is decomposed by building an eps-net of the candidates it contains:
every contained candidate is within eps of a net member (dense) and net
members are pairwise more than eps apart (separated). Candidates are scanned
in ascending index order so the output is reproducible.
"""

import logging
import math
from typing import Any, List, Optional, Sequence

import numpy as np

from robustkz.errors import MetricError
from robustkz.metric.space import Ball, LqSpace, MetricSpace
from robustkz.reports import CheckReport

logger = logging.getLogger(__name__)


def greedy_net(dist: np.ndarray, eps: float) -> List[int]:
    """
    Greedy eps-net of the rows of a square distance matrix.

    Args:
        dist: pairwise distances among the candidates, in scan order
        eps: covering radius

    Returns:
        Positions (into dist) of the net members, ascending.
    """
    n = dist.shape[0]
    covered = np.zeros(n, dtype=bool)
    net: List[int] = []
    for i in range(n):
        if covered[i]:
            continue
        net.append(i)
        covered |= dist[i] <= eps
    return net


def net_cells(dist_to_net: np.ndarray) -> np.ndarray:
    """Index of the nearest net member for each candidate row (ties: first member)."""
    return np.argmin(dist_to_net, axis=1)


def ball_decompose(space: MetricSpace, ball: Ball, eps: float, candidates: Any) -> List[int]:
    """
    Decompose a ball into sub-balls of radius eps centered at candidates.

    Args:
        space: metric the candidates live in
        ball: the ball to decompose
        eps: sub-ball radius
        candidates: finite point set; only members inside the ball are used

    Returns:
        Indices into candidates of the sub-ball centers (an eps-net of
        candidates inside the ball). Empty when no candidate lies inside.
    """
    if not eps > 0:
        raise MetricError(f"eps must be positive, got {eps}")
    cand = space.coerce(candidates)
    if len(cand) == 0:
        return []
    to_center = space.pairwise(space.coerce([ball.center]), cand)[0]
    inside = np.flatnonzero(to_center <= ball.radius)
    if len(inside) == 0:
        return []
    sub = space.pairwise(cand[inside], cand[inside])
    net = [int(inside[i]) for i in greedy_net(sub, eps)]
    _log_net_size(space, ball.radius, eps, len(net))
    return net


def _log_net_size(space: MetricSpace, radius: float, eps: float, size: int) -> None:
    dim = space.doubling_dimension
    if dim is None and isinstance(space, LqSpace):
        dim = space.dim
    if dim and radius > 0:
        logger.debug("eps-net of %d centers, (r/eps)^d = %.3g", size, (radius / eps) ** dim)


def verify_net(dist_inside: np.ndarray, net_positions: Sequence[int], eps: float) -> tuple:
    """
    Check density and separation of a net exhaustively.

    Args:
        dist_inside: pairwise distances among all candidates inside the ball
        net_positions: positions of the net members in dist_inside
        eps: covering radius

    Returns:
        (dense, separated) booleans.
    """
    if dist_inside.shape[0] == 0:
        return True, len(net_positions) == 0
    if len(net_positions) == 0:
        return False, True
    net = list(net_positions)
    dense = bool(np.all(dist_inside[:, net].min(axis=1) <= eps))
    block = dist_inside[np.ix_(net, net)]
    off_diagonal = block[~np.eye(len(net), dtype=bool)]
    separated = bool(np.all(off_diagonal > eps))
    return dense, separated


def check_eps_nets(calls: int = 200, seed: int = 0, dims: Sequence[int] = (1, 2, 3),
                   max_points: int = 120, space: Optional[MetricSpace] = None) -> CheckReport:
    """Run ball_decompose on random inputs and assert density and separation."""
    report = CheckReport(kind="eps-net", params={"calls": calls, "seed": seed, "dims": list(dims)})
    rng = np.random.default_rng(seed)
    largest_ratio = 0.0
    for call in range(calls):
        dim = int(dims[call % len(dims)])
        lq = space or LqSpace(q=float(rng.choice([1.0, 2.0])), dim=dim)
        n = int(rng.integers(1, max_points + 1))
        pts = rng.uniform(-1.0, 1.0, size=(n, dim))
        radius = float(rng.uniform(0.2, 1.5))
        eps = float(rng.uniform(0.02, 0.5)) * radius
        ball = Ball(pts[0], radius)
        net = ball_decompose(lq, ball, eps, pts)
        to_center = lq.pairwise(pts[:1], pts)[0]
        inside = np.flatnonzero(to_center <= radius)
        positions = [int(np.searchsorted(inside, i)) for i in net]
        dense, separated = verify_net(lq.pairwise(pts[inside], pts[inside]), positions, eps)
        report.record(dense, "net is not eps-dense", seed=seed, call=call)
        report.record(separated, "net is not eps-separated", seed=seed, call=call)
        report.record(set(net) <= set(inside.tolist()), "net member outside the ball",
                      seed=seed, call=call)
        if net:
            largest_ratio = max(largest_ratio, math.log(len(net)) / max(math.log(radius / eps), 1e-12))
    report.metrics["max_log_size_over_log_spread"] = largest_ratio
    return report
