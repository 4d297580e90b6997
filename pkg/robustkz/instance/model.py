"""
Robust (k,z)-clustering instances in the weight-vector formulation.

An instance holds clients P, facilities F, a metric over both, the number
of centers k, the exponent z and a list of groups. Each group is a sparse
weight vector w: P -> R>=0 and the objective of a center set X is
max_w sum_p w[p] * dist(p, X)^z.
"""

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import sparse

from robustkz.errors import InstanceValidationError, MetricError
from robustkz.metric.space import LqSpace, MetricSpace

logger = logging.getLogger(__name__)

Group = Dict[int, float]
WeightVector = Union[Mapping[int, float], np.ndarray]


@dataclass(frozen=True)
class Solution:
    """A center set together with its evaluated cost."""

    centers: Tuple[int, ...]
    cost: float
    group_costs: Tuple[float, ...]
    certified: bool = True
    counters: Dict[str, int] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.group_costs and not math.isclose(self.cost, max(self.group_costs), rel_tol=1e-12,
                                                 abs_tol=0.0):
            raise ValueError("solution cost must equal the maximum group cost")


class Instance:
    """Immutable Robust (k,z)-clustering instance."""

    def __init__(self, space: MetricSpace, points: Any, facilities: Any, k: int, z: int,
                 groups: Sequence[Mapping[int, float]], facilities_alias: bool = False,
                 aspect_warning_exponent: float = 4.0):
        """
        Build and validate an instance.

        Args:
            space: metric over points and facilities
            points: client points in the space's canonical form
            facilities: candidate centers in the space's canonical form
            k: number of centers to open
            z: positive integer exponent on distances
            groups: sparse weight vectors, point index -> weight
            facilities_alias: facilities were declared identical to the points
            aspect_warning_exponent: warn when an aspect ratio exceeds n^this
        """
        self.space = space
        try:
            self.points = space.coerce(points)
            self.facilities = space.coerce(facilities)
        except MetricError as e:
            raise InstanceValidationError(str(e)) from e
        self.points.setflags(write=False)
        self.facilities.setflags(write=False)
        self.k = k
        self.z = z
        self.facilities_alias = facilities_alias
        self.groups: Tuple[Group, ...] = tuple(self._canonical_group(g) for g in groups)
        self._validate()

        limit = float(max(self.n, 2)) ** aspect_warning_exponent
        if self.weight_aspect_ratio > limit:
            logger.warning("Weight aspect ratio %.3g exceeds n^%g", self.weight_aspect_ratio,
                           aspect_warning_exponent)
        if self.distance_aspect_ratio > limit:
            logger.warning("Distance aspect ratio %.3g exceeds n^%g", self.distance_aspect_ratio,
                           aspect_warning_exponent)

    @staticmethod
    def _canonical_group(group: Mapping[int, float]) -> Group:
        out: Group = {}
        for key in sorted(int(i) for i in group):
            out[key] = float(group[key] if key in group else group[str(key)])
        return out

    def _validate(self) -> None:
        if isinstance(self.k, bool) or not isinstance(self.k, (int, np.integer)) or self.k < 1:
            raise InstanceValidationError(f"k must be a positive integer, got {self.k!r}")
        if isinstance(self.z, bool) or not isinstance(self.z, (int, np.integer)) or self.z < 1:
            raise InstanceValidationError(f"z must be a positive integer, got {self.z!r}")
        if self.n == 0:
            raise InstanceValidationError("instance needs at least one point")
        if self.k > self.f:
            raise InstanceValidationError(f"k={self.k} exceeds the number of facilities {self.f}")
        if not self.groups:
            raise InstanceValidationError("instance needs at least one group")
        for gi, group in enumerate(self.groups):
            if not group:
                raise InstanceValidationError(f"group {gi} is empty")
            for p, w in group.items():
                if not 0 <= p < self.n:
                    raise InstanceValidationError(f"group {gi} references point {p} out of range")
                if not math.isfinite(w) or w < 0:
                    raise InstanceValidationError(f"group {gi} has invalid weight {w} at point {p}")
            if not any(w > 0 for w in group.values()):
                raise InstanceValidationError(f"group {gi} has no strictly positive weight")

    # Construction helpers

    @classmethod
    def from_subsets(cls, space: MetricSpace, points: Any, facilities: Any, k: int, z: int,
                     subsets: Sequence[Sequence[int]],
                     point_weights: Optional[Sequence[float]] = None, **kwargs) -> "Instance":
        """Build groups w_S with w_S[p] = w(p) on S and 0 elsewhere."""
        n = len(space.coerce(points))
        weights = list(point_weights) if point_weights is not None else [1.0] * n
        if len(weights) != n:
            raise InstanceValidationError("point_weights must have one entry per point")
        groups = [{int(p): float(weights[int(p)]) for p in subset} for subset in subsets]
        return cls(space, points, facilities, k, z, groups, **kwargs)

    @classmethod
    def kcenter(cls, space: MetricSpace, points: Any, k: int, facilities: Any = None,
                **kwargs) -> "Instance":
        """k-Center as a special case: one singleton group per point, z = 1."""
        n = len(space.coerce(points))
        alias = facilities is None
        groups = [{p: 1.0} for p in range(n)]
        return cls(space, points, points if alias else facilities, k, 1, groups,
                   facilities_alias=alias, **kwargs)

    # Sizes and derived matrices

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def f(self) -> int:
        return len(self.facilities)

    @property
    def m(self) -> int:
        return len(self.groups)

    @cached_property
    def distances(self) -> np.ndarray:
        """n x |F| point-to-facility distances."""
        d = self.space.pairwise(self.points, self.facilities)
        d.setflags(write=False)
        return d

    @cached_property
    def cost_matrix(self) -> np.ndarray:
        """n x |F| matrix of dist(p, f)^z."""
        c = self.distances ** self.z
        c.setflags(write=False)
        return c

    @cached_property
    def weights(self) -> sparse.csr_matrix:
        """m x n sparse weight matrix, one row per group."""
        rows, cols, vals = [], [], []
        for gi, group in enumerate(self.groups):
            for p, w in group.items():
                if w > 0:
                    rows.append(gi)
                    cols.append(p)
                    vals.append(w)
        return sparse.csr_matrix((vals, (rows, cols)), shape=(self.m, self.n), dtype=np.float64)

    @cached_property
    def active_points(self) -> np.ndarray:
        """Indices of points with positive weight in at least one group."""
        return np.unique(self.weights.indices)

    @cached_property
    def weight_aspect_ratio(self) -> float:
        vals = self.weights.data
        return float(vals.max() / vals.min()) if len(vals) else 1.0

    @cached_property
    def distance_aspect_ratio(self) -> float:
        d = self.distances
        positive = d[d > 0]
        return float(positive.max() / positive.min()) if len(positive) else 1.0

    # Costs

    def _check_centers(self, centers: Sequence[int]) -> np.ndarray:
        idx = np.asarray(list(centers), dtype=np.int64)
        if idx.size == 0:
            raise ValueError("center set must be nonempty")
        if idx.min() < 0 or idx.max() >= self.f:
            raise ValueError(f"facility index out of range [0, {self.f})")
        return idx

    def service_costs(self, centers: Sequence[int]) -> np.ndarray:
        """Vector dist(p, X)^z over all points."""
        return self.cost_matrix[:, self._check_centers(centers)].min(axis=1)

    def group_cost(self, weights: WeightVector, centers: Sequence[int]) -> float:
        """sum_p w[p] * dist(p, X)^z, skipping zero-weight points."""
        idx = self._check_centers(centers)
        if isinstance(weights, np.ndarray):
            support = np.flatnonzero(weights)
            w = weights[support]
        else:
            support = np.array([p for p, v in weights.items() if v != 0], dtype=np.int64)
            w = np.array([weights[p] for p in support.tolist()], dtype=np.float64)
        if support.size == 0:
            return 0.0
        service = self.cost_matrix[np.ix_(support, idx)].min(axis=1)
        return float(np.dot(w, service))

    def solution_cost(self, centers: Sequence[int]) -> Tuple[float, np.ndarray]:
        """(max group cost, per-group cost vector) of a center set."""
        per_group = np.asarray(self.weights @ self.service_costs(centers)).ravel()
        return float(per_group.max()), per_group

    def evaluate(self, centers: Sequence[int], certified: bool = True,
                 counters: Optional[Dict[str, int]] = None) -> Solution:
        """Wrap a center set into a Solution with freshly computed costs."""
        ordered = tuple(sorted(int(c) for c in set(centers)))
        cost, per_group = self.solution_cost(ordered)
        return Solution(ordered, cost, tuple(float(c) for c in per_group), certified,
                        dict(counters or {}))

    # Derived instances

    def with_points(self, point_indices: Sequence[int], groups: Sequence[Mapping[int, float]]
                    ) -> "Instance":
        """Same facilities, k, z and metric over a subset of the points."""
        idx = np.asarray(list(point_indices), dtype=np.int64)
        return Instance(self.space, self.points[idx], self.facilities, self.k, self.z, groups)

    def with_facilities(self, facilities: Any) -> "Instance":
        return Instance(self.space, self.points, facilities, self.k, self.z, self.groups)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Instance):
            return NotImplemented
        return (
            type(self.space) is type(other.space)
            and _space_params(self.space) == _space_params(other.space)
            and np.array_equal(self.points, other.points)
            and np.array_equal(self.facilities, other.facilities)
            and self.k == other.k
            and self.z == other.z
            and self.groups == other.groups
            and self.facilities_alias == other.facilities_alias
        )

    __hash__ = None

    def __repr__(self) -> str:
        return (f"Instance(kind={self.space.kind}, n={self.n}, f={self.f}, m={self.m}, "
                f"k={self.k}, z={self.z})")


def _space_params(space: MetricSpace) -> tuple:
    if isinstance(space, LqSpace):
        return ("lq", space.q, space.doubling_dimension)
    return ("matrix", space.matrix.tobytes(), space.matrix.shape, space.doubling_dimension)


def group_cost(instance: Instance, weights: WeightVector, centers: Sequence[int]) -> float:
    """Cost of one group under a center set."""
    return instance.group_cost(weights, centers)


def solution_cost(instance: Instance, centers: Sequence[int]) -> Tuple[float, np.ndarray]:
    """Max over groups of group_cost, plus the per-group vector."""
    return instance.solution_cost(centers)
