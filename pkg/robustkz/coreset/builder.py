"""
Coreset construction for Robust (k,z)-Clustering.

Around every bicriteria center b_i the points are carved into rings
ball(b_i, 2^j R), each ring is covered by sub-balls of radius
eps / (alpha * 3^(z+2)) * 2^j R and every nonempty sub-ball keeps one
representative carrying the summed weight of its members, separately for
every group. Each positively weighted point belongs to the smallest ring j
containing it over all centers, ties to the smallest i.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Dict, List, Mapping, NamedTuple, Sequence, Tuple

import numpy as np

from robustkz.errors import DegenerateConfigurationError
from robustkz.instance.model import Instance
from robustkz.metric.nets import ball_decompose, net_cells
from robustkz.metric.space import Ball

if TYPE_CHECKING:
    from robustkz.solvers.bicriteria import BicriteriaSolution

logger = logging.getLogger(__name__)


class RingCell(NamedTuple):
    center: int
    ring: int
    sub_ball: int


@dataclass(frozen=True)
class CoresetParams:
    eps: float
    alpha: float
    radius: float
    tau: float
    rings: int
    bicriteria_centers: Tuple[int, ...]
    degenerate: bool = False


@dataclass
class Coreset:
    """
    Reduced point set with remapped group weights.

    points: representatives, as ascending original point indices
    groups: eta(w) for every input group, keyed by original point index
    rep: original point -> representative (positively weighted points only)
    ring_assignment: original point -> (center i, ring j, sub-ball id)
    """

    points: Tuple[int, ...]
    groups: Tuple[Dict[int, float], ...]
    rep: Dict[int, int]
    params: CoresetParams
    ring_assignment: Dict[int, RingCell] = field(default_factory=dict)
    z: int = 1

    def sub_ball_radius(self, ring: int) -> float:
        p = self.params
        return sub_ball_radius(p.eps, p.alpha, self.z, ring, p.radius)

    def size_report(self) -> Dict[str, int]:
        """Coreset size against the |B| * (J+1) * (sub-balls per ring) bound."""
        per_ring: Dict[Tuple[int, int], set] = {}
        for cell in self.ring_assignment.values():
            per_ring.setdefault((cell.center, cell.ring), set()).add(cell.sub_ball)
        widest = max((len(s) for s in per_ring.values()), default=1)
        return {
            "points": len(self.points),
            "represented_points": len(self.rep),
            "rings": self.params.rings + 1,
            "rings_used": len(per_ring),
            "max_sub_balls_per_ring": widest,
            "size_bound": len(self.params.bicriteria_centers) * (self.params.rings + 1) * widest,
        }


def sub_ball_radius(eps: float, alpha: float, z: int, ring: int, radius: float) -> float:
    # Sub-ball radius eps / (alpha * 3^(z+2)) rather than the looser eps / (40 alpha)
    return eps / (alpha * 3.0 ** (z + 2)) * (2.0 ** ring) * radius


def _ring_indices(dist: np.ndarray, radius: float) -> np.ndarray:
    """Smallest j >= 0 with dist <= 2^j * radius, elementwise."""
    ratio = np.maximum(dist / radius, 1e-300)
    j = np.clip(np.ceil(np.log2(ratio)), 0, None).astype(np.int64)
    # log2 rounding can be off by one in either direction
    j[dist > radius * np.exp2(j)] += 1
    lower = (j > 0) & (dist <= radius * np.exp2(j - 1))
    j[lower] -= 1
    return j


def _aggregate(groups: Sequence[Mapping[int, float]], rep: Mapping[int, int]
               ) -> Tuple[Dict[int, float], ...]:
    out = []
    for group in groups:
        eta: Dict[int, float] = {}
        for p in sorted(group):
            w = group[p]
            if w > 0:
                r = rep[p]
                eta[r] = eta.get(r, 0.0) + w
        out.append(dict(sorted(eta.items())))
    return tuple(out)


def _trivial_coreset(instance: Instance, bic: "BicriteriaSolution", eps: float) -> Coreset:
    """Zero-cost bicriteria: one representative per distinct point location."""
    active = instance.active_points
    same = instance.space.pairwise(instance.points[active], instance.points[active]) == 0
    rep = {int(p): int(active[np.argmax(same[i])]) for i, p in enumerate(active)}
    tau = float(np.asarray(instance.weights.sum(axis=1)).max())
    params = CoresetParams(eps, bic.alpha, 0.0, tau, 0, tuple(bic.centers), degenerate=True)
    cells = {p: RingCell(0, 0, r) for p, r in rep.items()}
    points = tuple(sorted(set(rep.values())))
    logger.info("Bicriteria cost is 0: trivial coreset of %d locations", len(points))
    return Coreset(points, _aggregate(instance.groups, rep), rep, params, cells, instance.z)


def build_coreset(instance: Instance, bic: "BicriteriaSolution", eps: float) -> Coreset:
    """
    Build a coreset of the clients of an instance.

    Args:
        instance: original instance
        bic: bicriteria solution (centers B and a finite alpha)
        eps: accuracy in (0, 1)

    Returns:
        Coreset with a representative for every positively weighted point.
    """
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    if not math.isfinite(bic.alpha):
        raise DegenerateConfigurationError(
            "bicriteria alpha is unknown; certify it with the oracle or pass --assume-alpha"
        )
    centers = list(bic.centers)
    cost_b, _ = instance.solution_cost(centers)
    if cost_b == 0:
        return _trivial_coreset(instance, bic, eps)

    alpha = float(bic.alpha)
    z = instance.z
    tau = float(np.asarray(instance.weights.sum(axis=1)).max())
    radius = (cost_b / (alpha * tau)) ** (1.0 / z)
    rings = max(0, math.ceil(2 * math.log2(alpha * instance.weight_aspect_ratio)))

    active = instance.active_points
    to_b = instance.distances[np.ix_(active, centers)]
    ring_of = _ring_indices(to_b, radius)
    owner = np.argmin(ring_of, axis=1)
    ring = ring_of[np.arange(len(active)), owner]
    if len(ring) and int(ring.max()) > rings:
        logger.warning("Ring count %d too small for the weighted points; extending to %d",
                       rings, int(ring.max()))
        rings = int(ring.max())

    rep: Dict[int, int] = {}
    cells: Dict[int, RingCell] = {}
    for i, b in enumerate(centers):
        for j in sorted(set(ring[owner == i].tolist())):
            members = active[(owner == i) & (ring == j)]
            rho = sub_ball_radius(eps, alpha, z, j, radius)
            ball = Ball(instance.facilities[b], (2.0 ** j) * radius)
            pts = instance.points[members]
            if rho > 0:
                net = ball_decompose(instance.space, ball, rho, pts)
                cell = net_cells(instance.space.pairwise(pts, pts[net]))
            else:
                cell = np.zeros(len(members), dtype=np.int64)
            for c in np.unique(cell):
                in_cell = members[cell == c]
                r = int(in_cell.min())
                for p in in_cell.tolist():
                    rep[int(p)] = r
                    cells[int(p)] = RingCell(i, int(j), int(c))

    params = CoresetParams(eps, alpha, radius, tau, rings, tuple(int(b) for b in centers))
    points = tuple(sorted(set(rep.values())))
    logger.info("Coreset: %d of %d weighted points kept (R=%.4g, tau=%.4g, J=%d)",
                len(points), len(active), radius, tau, rings)
    return Coreset(points, _aggregate(instance.groups, rep), rep, params, cells, z)


def coreset_instance(coreset: Coreset, original: Instance) -> Instance:
    """Instance over the representatives with the eta-images as groups."""
    position = {p: i for i, p in enumerate(coreset.points)}
    groups = [{position[p]: w for p, w in g.items()} for g in coreset.groups]
    return original.with_points(coreset.points, groups)


class ErrorSplit(NamedTuple):
    """Displacement error of one group, split over the three point parts."""

    total: float
    near: float
    bicriteria_far: float
    solution_far: float


def coreset_error_report(instance: Instance, coreset: Coreset, centers: Sequence[int]
                         ) -> List[ErrorSplit]:
    """
    Per-group displacement error sum_p w[p] * |d(p,X)^z - d(r(p),X)^z|.

    Points are split into P_R (d(p,B) <= R and d(p,X) <= R),
    P_B (d(p,B) > R and d(p,X) <= d(p,B)) and P_X (everything else).
    """
    z = instance.z
    radius = coreset.params.radius
    x = list(centers)
    b = list(coreset.params.bicriteria_centers)
    to_x = instance.distances[:, x].min(axis=1)
    to_b = instance.distances[:, b].min(axis=1)

    near = (to_b <= radius) & (to_x <= radius)
    b_far = (to_b > radius) & (to_x <= to_b)

    out = []
    for group in instance.groups:
        parts = [0.0, 0.0, 0.0]
        for p, w in group.items():
            if w <= 0:
                continue
            diff = w * abs(to_x[p] ** z - to_x[coreset.rep[p]] ** z)
            parts[0 if near[p] else 1 if b_far[p] else 2] += diff
        out.append(ErrorSplit(sum(parts), *parts))
    return out
