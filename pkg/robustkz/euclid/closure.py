"""
Midpoint closure of a center set over a discrete Euclidean facility set:
cl(B) = B together with the facility nearest to (b + b') / 2 for every
unordered pair b, b' of B (b = b' included).
"""

import logging
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from robustkz.errors import NonEuclideanError
from robustkz.metric.space import LqSpace, MetricSpace

logger = logging.getLogger(__name__)

Origin = Tuple[str, int, int]


def require_euclidean(space: MetricSpace) -> None:
    if not space.is_euclidean:
        raise NonEuclideanError(
            f"needs coordinates under the l2 norm, got metric kind {space.kind!r}"
            + (f" with q={space.q}" if isinstance(space, LqSpace) else "")
        )


@dataclass(frozen=True)
class ClosureSet:
    """
    members: facility indices of cl(B), ascending
    origin: member -> ("center", b, b) or ("midpoint", b, b'), first producer wins
    """

    members: Tuple[int, ...]
    origin: Dict[int, Origin]

    def __len__(self) -> int:
        return len(self.members)


def midpoint_closure(facilities: np.ndarray, centers: Sequence[int],
                     space: Optional[MetricSpace] = None) -> ClosureSet:
    """
    Args:
        facilities: facility coordinates, one row per facility
        centers: indices of B within facilities
        space: metric of the coordinates (l2 when omitted)

    Returns:
        ClosureSet with at most |B| + |B|(|B|+1)/2 members.
    """
    space = space or LqSpace(2.0)
    require_euclidean(space)
    coords = space.coerce(facilities)
    b = sorted(set(int(c) for c in centers))
    if not b:
        raise ValueError("midpoint closure of an empty set")

    origin: Dict[int, Origin] = {c: ("center", c, c) for c in b}
    pairs = [(b[i], b[j]) for i in range(len(b)) for j in range(i, len(b))]
    mids = np.array([(coords[u] + coords[v]) / 2.0 for u, v in pairs])
    # argmin keeps the lowest facility index among equally near ones
    snapped = np.argmin(space.pairwise(mids, coords), axis=1)
    for (u, v), f in zip(pairs, snapped.tolist()):
        origin.setdefault(int(f), ("midpoint", u, v))
    members = tuple(sorted(origin))
    logger.debug("Midpoint closure: |B|=%d -> |cl(B)|=%d", len(b), len(members))
    return ClosureSet(members, dict(sorted(origin.items())))
