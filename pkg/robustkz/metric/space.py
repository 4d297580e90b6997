"""
Metric spaces over finite point universes.

Two kinds are supported: l_q norms on coordinate vectors and explicit
symmetric distance matrices whose points are row indices.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, NamedTuple, Optional

import numpy as np
from scipy.spatial.distance import cdist

from robustkz.errors import InstanceValidationError, MetricError

logger = logging.getLogger(__name__)


class MetricSpace(ABC):
    """Distance function over a point universe."""

    kind: str = ""

    def __init__(self, doubling_dimension: Optional[int] = None):
        if doubling_dimension is not None and doubling_dimension < 1:
            raise MetricError("doubling dimension must be a positive integer")
        self.doubling_dimension = doubling_dimension

    @abstractmethod
    def coerce(self, points: Any) -> np.ndarray:
        """Validate a collection of points and return it in canonical array form."""

    @abstractmethod
    def pairwise(self, a: Any, b: Any) -> np.ndarray:
        """Distance matrix between two point collections."""

    def distance(self, a: Any, b: Any) -> float:
        """Distance between two single points."""
        return float(self.pairwise(self.coerce([a]), self.coerce([b]))[0, 0])

    @property
    def is_euclidean(self) -> bool:
        return False


class LqSpace(MetricSpace):
    """l_q norm on R^d, q >= 1."""

    kind = "lq"

    def __init__(self, q: float = 2.0, dim: Optional[int] = None,
                 doubling_dimension: Optional[int] = None):
        super().__init__(doubling_dimension)
        if not q >= 1:
            raise MetricError(f"l_q exponent must be >= 1, got {q}")
        self.q = float(q)
        self.dim = dim

    @property
    def is_euclidean(self) -> bool:
        return self.q == 2.0

    def coerce(self, points: Any) -> np.ndarray:
        arr = np.asarray(points, dtype=np.float64)
        if arr.ndim == 1:
            # a flat list of scalars is a set of points on the line
            arr = arr.reshape(-1, 1)
        if arr.ndim != 2:
            raise MetricError(f"expected a 2-d array of coordinates, got shape {arr.shape}")
        if self.dim is not None and arr.shape[0] and arr.shape[1] != self.dim:
            raise MetricError(f"dimension mismatch: expected {self.dim}, got {arr.shape[1]}")
        if not np.all(np.isfinite(arr)):
            raise MetricError("coordinates must be finite")
        return arr

    def pairwise(self, a: Any, b: Any) -> np.ndarray:
        a = self.coerce(a)
        b = self.coerce(b)
        if a.shape[1] != b.shape[1]:
            raise MetricError(f"dimension mismatch: {a.shape[1]} vs {b.shape[1]}")
        if a.shape[0] == 0 or b.shape[0] == 0:
            return np.zeros((a.shape[0], b.shape[0]))
        if self.q == 2.0:
            return cdist(a, b, "euclidean")
        if self.q == 1.0:
            return cdist(a, b, "cityblock")
        return cdist(a, b, "minkowski", p=self.q)


class MatrixSpace(MetricSpace):
    """Explicit distance matrix; points are integer row indices."""

    kind = "matrix"

    def __init__(self, matrix: Any, validation_limit: int = 500,
                 doubling_dimension: Optional[int] = None):
        super().__init__(doubling_dimension)
        self.matrix = np.array(matrix, dtype=np.float64)
        self.matrix.setflags(write=False)
        self._validate(validation_limit)

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def _validate(self, limit: int) -> None:
        d = self.matrix
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise InstanceValidationError(f"distance matrix must be square, got shape {d.shape}")
        if not np.all(np.isfinite(d)):
            raise InstanceValidationError("distance matrix entries must be finite")
        if not np.array_equal(d, d.T):
            raise InstanceValidationError("distance matrix must be symmetric")
        if np.any(np.diag(d) != 0):
            raise InstanceValidationError("distance matrix must be zero on the diagonal")
        if np.any(d < 0):
            raise InstanceValidationError("distance matrix entries must be nonnegative")
        n = d.shape[0]
        if n > limit:
            logger.info("Skipping triangle-inequality check for %d points (limit %d)", n, limit)
            return
        slack = 1e-9 * (float(d.max()) if n else 0.0)
        for via in range(n):
            detour = d[:, via:via + 1] + d[via:via + 1, :]
            if np.any(d > detour + slack):
                i, j = np.argwhere(d > detour + slack)[0]
                raise InstanceValidationError(
                    f"triangle inequality violated: d[{i},{j}] > d[{i},{via}] + d[{via},{j}]"
                )

    def coerce(self, points: Any) -> np.ndarray:
        arr = np.asarray(points)
        if arr.size == 0:
            return np.zeros(0, dtype=np.int64)
        if arr.ndim != 1 or not np.issubdtype(arr.dtype, np.integer):
            raise MetricError("matrix-space points must be a flat list of integer indices")
        if arr.min() < 0 or arr.max() >= self.size:
            raise MetricError(f"point index out of range [0, {self.size})")
        return arr.astype(np.int64)

    def pairwise(self, a: Any, b: Any) -> np.ndarray:
        a = self.coerce(a)
        b = self.coerce(b)
        return self.matrix[np.ix_(a, b)]


@dataclass(frozen=True, eq=False)
class Ball:
    """Closed ball around a point of some metric space."""

    center: Any
    radius: float

    def __post_init__(self):
        if not self.radius >= 0:
            raise MetricError(f"ball radius must be nonnegative, got {self.radius}")


class NearestPoint(NamedTuple):
    index: int
    point: Any
    distance: float


def distance(space: MetricSpace, a: Any, b: Any) -> float:
    """Evaluate the metric on two points of the space."""
    return space.distance(a, b)


def nearest(space: MetricSpace, x: Any, candidates: Any) -> NearestPoint:
    """Closest member of a nonempty set; ties go to the smallest index."""
    members = space.coerce(candidates)
    if len(members) == 0:
        raise MetricError("nearest() needs a nonempty candidate set")
    dists = space.pairwise(space.coerce([x]), members)[0]
    idx = int(np.argmin(dists))
    return NearestPoint(idx, members[idx], float(dists[idx]))
