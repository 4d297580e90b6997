"""
Assignment rules from centers O to a bicriteria set B in Euclidean space.

projection_assign sends every center to its nearest member of B, giving
d(p, sigma(X)) <= 2 d(p, X) + d(p, B) for every point p. sigma_assign refines
this with the mirror point q = 2o - b of b = pi_B(o): when some member of B
lies within ALPHA * |o - b| of q, o is sent to its nearest member of cl(B)
instead of to b. For points p with d(p, O) >= BETA0 * d(p, B) the ratio
d(p, sigma(O)) / (2 d(p, O) + d(p, B)) then stays below GAMMA_BOUND.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List

import numpy as np
from scipy.spatial.distance import cdist

from robustkz.errors import DegenerateConfigurationError, MetricError

ALPHA = 0.6
BETA0 = 0.05
EPS0 = 0.002
GAMMA_BOUND = 0.9978


def _as_points(x: Any) -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    return arr


def projection_assign(centers: Any, targets: Any) -> np.ndarray:
    """Index into targets of the nearest target for each center (ties: lowest index)."""
    x, b = _as_points(centers), _as_points(targets)
    if len(b) == 0:
        raise MetricError("projection onto an empty set")
    return np.argmin(cdist(x, b), axis=1)


def displacement_ratio(o: Any, sigma_o: Any, p: Any, b_prime: Any) -> float:
    """|p - sigma(o)| / (2 |p - o| + |p - b'|)."""
    o, s, p, b = (np.asarray(v, dtype=np.float64).ravel() for v in (o, sigma_o, p, b_prime))
    denominator = 2.0 * np.linalg.norm(p - o) + np.linalg.norm(p - b)
    if denominator == 0:
        raise DegenerateConfigurationError("displacement ratio undefined: p = o = b'")
    return float(np.linalg.norm(p - s) / denominator)


@dataclass
class AssignmentReport:
    """
    sigma: image of each center (coordinates), row-aligned with O
    uses_closure: whether sigma(o) came from cl(B) rather than from b
    far: per evaluated point, d(p, O) >= beta0 * d(p, B)
    ratios: per evaluated point, d(p, sigma(O)) / (2 d(p, O) + d(p, B)); 0 when undefined
    """

    sigma: np.ndarray
    uses_closure: List[bool]
    far: np.ndarray
    ratios: np.ndarray
    constants: Dict[str, float] = field(default_factory=dict)

    @property
    def max_far_ratio(self) -> float:
        return float(self.ratios[self.far].max()) if self.far.any() else 0.0


def sigma_assign(centers: Any, bicriteria: Any, closure: Any, points: Any = None,
                 alpha: float = ALPHA, beta0: float = BETA0) -> AssignmentReport:
    """
    Apply the mirror-point assignment rule.

    Args:
        centers: O, coordinates
        bicriteria: B, coordinates
        closure: cl(B), coordinates (B plus snapped midpoints)
        points: points whose ratios are reported (none when omitted)
        alpha: mirror-ball radius as a fraction of |o - b|
        beta0: far/near threshold

    Returns:
        AssignmentReport.
    """
    o, b, cl = _as_points(centers), _as_points(bicriteria), _as_points(closure)
    if len(b) == 0 or len(cl) == 0:
        raise MetricError("sigma_assign needs nonempty B and cl(B)")
    nearest_b = projection_assign(o, b)
    nearest_cl = projection_assign(o, cl)
    sigma = np.empty_like(o)
    uses_closure = []
    for i, center in enumerate(o):
        anchor = b[nearest_b[i]]
        scale = float(np.linalg.norm(center - anchor))
        mirror = 2.0 * center - anchor
        crowded = scale > 0 and bool(np.any(np.linalg.norm(b - mirror, axis=1) <= alpha * scale))
        sigma[i] = cl[nearest_cl[i]] if crowded else anchor
        uses_closure.append(crowded)

    pts = _as_points(points) if points is not None else np.zeros((0, o.shape[1]))
    if len(pts):
        to_o = cdist(pts, o).min(axis=1)
        to_b = cdist(pts, b).min(axis=1)
        to_sigma = cdist(pts, sigma).min(axis=1)
        denominator = 2.0 * to_o + to_b
        ratios = np.divide(to_sigma, denominator, out=np.zeros(len(pts)), where=denominator > 0)
        far = to_o >= beta0 * to_b
    else:
        ratios = np.zeros(0)
        far = np.zeros(0, dtype=bool)
    return AssignmentReport(sigma, uses_closure, far, ratios,
                            {"alpha": alpha, "beta0": beta0, "eps0": EPS0})
