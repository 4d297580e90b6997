"""
Seeded instance generators behind `robustkz gen`.

Every generator draws from one numpy Generator seeded by the caller, so a
fixed seed reproduces the same instance (and the same digest).
"""

import logging
from typing import List, Optional

import numpy as np
from scipy.spatial.distance import cdist

from robustkz.config import settings
from robustkz.instance.model import Instance
from robustkz.metric.space import LqSpace, MatrixSpace

logger = logging.getLogger(__name__)


def random_groups(rng: np.random.Generator, n: int, m: int, weighted: bool = False
                  ) -> List[dict]:
    """m groups, each point joining each group with probability 1/2 (never empty)."""
    weights = rng.uniform(1.0, 4.0, size=n) if weighted else np.ones(n)
    groups = []
    for _ in range(m):
        members = np.flatnonzero(rng.uniform(size=n) < 0.5)
        if len(members) == 0:
            members = np.array([int(rng.integers(0, n))])
        groups.append({int(p): float(weights[p]) for p in members})
    return groups


def _finish(rng: np.random.Generator, space, points: np.ndarray, facilities: Optional[np.ndarray],
            k: int, z: int, m: int, weighted: bool) -> Instance:
    groups = random_groups(rng, len(points), m, weighted)
    alias = facilities is None
    return Instance(space, points, points if alias else facilities, k, z, groups,
                    facilities_alias=alias,
                    aspect_warning_exponent=settings.aspect_warning_exponent)


def gen_uniform(n: int, dim: int, k: int, z: int, m: int = 2, facilities: int = 0,
                seed: int = 0, q: float = 2.0, weighted: bool = False) -> Instance:
    """Points (and optional separate facilities) uniform in the unit cube."""
    rng = np.random.default_rng(seed)
    points = rng.uniform(0.0, 1.0, size=(n, dim))
    fac = rng.uniform(0.0, 1.0, size=(facilities, dim)) if facilities else None
    return _finish(rng, LqSpace(q=q, dim=dim), points, fac, k, z, m, weighted)


def gen_gaussian(n: int, dim: int, k: int, z: int, clusters: int = 3, std: float = 0.1,
                 m: int = 2, facilities: int = 0, seed: int = 0, q: float = 2.0,
                 weighted: bool = False) -> Instance:
    """Gaussian mixture around cluster centers in [0, 10]^dim; std = 0 co-locates clusters."""
    if std < 0:
        raise ValueError(f"std must be nonnegative, got {std}")
    rng = np.random.default_rng(seed)
    means = rng.uniform(0.0, 10.0, size=(clusters, dim))
    labels = rng.integers(0, clusters, size=n)
    points = means[labels] + std * rng.normal(size=(n, dim))
    fac = None
    if facilities:
        fac = means[rng.integers(0, clusters, size=facilities)] + std * rng.normal(
            size=(facilities, dim))
    return _finish(rng, LqSpace(q=q, dim=dim), points, fac, k, z, m, weighted)


def gen_line(n: int, k: int, z: int, m: int = 2, facilities: int = 0, seed: int = 0,
             length: float = 100.0, weighted: bool = False) -> Instance:
    """Points on [0, length] of the real line."""
    rng = np.random.default_rng(seed)
    points = rng.uniform(0.0, length, size=(n, 1))
    fac = rng.uniform(0.0, length, size=(facilities, 1)) if facilities else None
    return _finish(rng, LqSpace(q=2.0, dim=1), points, fac, k, z, m, weighted)


def gen_matrix(n: int, k: int, z: int, m: int = 2, seed: int = 0, dim: int = 2,
               weighted: bool = False) -> Instance:
    """Explicit distance matrix of random planar points; every point is also a facility."""
    rng = np.random.default_rng(seed)
    coords = rng.uniform(0.0, 1.0, size=(n, dim))
    matrix = cdist(coords, coords)
    # cdist is symmetric up to rounding; enforce it exactly
    matrix = np.minimum(matrix, matrix.T)
    np.fill_diagonal(matrix, 0.0)
    space = MatrixSpace(matrix, validation_limit=settings.matrix_validation_limit)
    points = np.arange(n)
    return _finish(rng, space, points, None, k, z, m, weighted)
