import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from robustkz.instance.model import Instance
from robustkz.metric.space import LqSpace

settings.register_profile(
    "robustkz",
    deadline=None,
    max_examples=50,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("robustkz")


def random_instance(seed: int, n: int = 12, f: int = 6, k: int = 2, z: int = 1, m: int = 2,
                    dim: int = 2, separate_facilities: bool = True) -> Instance:
    """Small random l2 instance with m subset groups."""
    rng = np.random.default_rng(seed)
    points = rng.uniform(0.0, 1.0, size=(n, dim))
    facilities = rng.uniform(0.0, 1.0, size=(f, dim)) if separate_facilities else points
    groups = []
    for _ in range(m):
        members = np.flatnonzero(rng.uniform(size=n) < 0.6)
        if len(members) == 0:
            members = np.array([0])
        groups.append({int(p): float(rng.uniform(0.5, 2.0)) for p in members})
    return Instance(LqSpace(q=2.0, dim=dim), points, facilities, k, z, groups,
                    facilities_alias=not separate_facilities)


@pytest.fixture
def line_instance():
    """P = F = {0, 2} on the line, k = 1, one unit group."""
    return Instance(LqSpace(q=2.0, dim=1), [0.0, 2.0], [0.0, 2.0], 1, 1, [{0: 1.0, 1: 1.0}],
                    facilities_alias=True)


@pytest.fixture
def small_instance():
    return random_instance(seed=7)


@pytest.fixture
def tight_instance():
    """P = {0.5}, F = {-1, 0, 1}, k = 1: the closure of B = {-1, 1} contains the optimum."""
    return Instance(LqSpace(q=2.0, dim=1), [0.5], [-1.0, 0.0, 1.0], 1, 1, [{0: 1.0}])
