"""
Exhaustive search over fixed-size subsets of candidate facilities.

Shared by the exact oracle, leader search and the Euclidean FPT solver.
Subsets are produced in lexicographic order, evaluated in numpy batches and
pruned with a running max over blocks of groups: a subset is dropped as soon
as one block of groups already costs more than the incumbent. Work is split
by leading index; since pruning only ever drops strictly worse subsets, the
winner (lowest cost, then lexicographically smallest index set) does not
depend on the number of workers.
"""

import itertools
import logging
import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from robustkz.errors import BudgetExceededError
from robustkz.instance.model import Instance

logger = logging.getLogger(__name__)

BATCH_SIZE = 2048
GROUP_BLOCK = 256


@dataclass(frozen=True)
class SearchResult:
    """Best subset found by an exhaustive search."""

    centers: Tuple[int, ...]
    cost: float
    subsets_enumerated: int
    truncated: bool


class _Incumbent:
    """Best (cost, centers) seen so far, shared by the workers."""

    def __init__(self):
        self.cost = math.inf
        self.centers: Optional[Tuple[int, ...]] = None
        self._lock = threading.Lock()

    def offer(self, cost: float, centers: Tuple[int, ...]) -> None:
        with self._lock:
            if cost < self.cost or (cost == self.cost and (self.centers is None
                                                          or centers < self.centers)):
                self.cost = cost
                self.centers = centers


class SubsetSearch:
    """Find the cheapest size-s subset of a candidate facility list."""

    def __init__(self, instance: Instance, candidates: Sequence[int], size: int):
        """
        Args:
            instance: instance whose robust cost is minimized
            candidates: facility indices to choose from (deduplicated, sorted)
            size: number of facilities per subset
        """
        self.candidates = np.array(sorted(set(int(c) for c in candidates)), dtype=np.int64)
        if size < 1 or size > len(self.candidates):
            raise ValueError(f"subset size {size} must lie in [1, {len(self.candidates)}]")
        self.size = size
        rows = instance.active_points
        self._cost = np.ascontiguousarray(instance.cost_matrix[np.ix_(rows, self.candidates)])
        weights = instance.weights[:, rows].tocsr()
        self._blocks = [weights[i:i + GROUP_BLOCK] for i in range(0, weights.shape[0], GROUP_BLOCK)]

    @property
    def total(self) -> int:
        return math.comb(len(self.candidates), self.size)

    def _partition_sizes(self) -> List[int]:
        c, s = len(self.candidates), self.size
        return [math.comb(c - lead - 1, s - 1) for lead in range(c - s + 1)]

    def _subsets(self, lead: int, limit: int) -> Iterator[np.ndarray]:
        c = len(self.candidates)
        rest = itertools.combinations(range(lead + 1, c), self.size - 1)
        tails = itertools.islice(rest, limit)
        while True:
            chunk = list(itertools.islice(tails, BATCH_SIZE))
            if not chunk:
                return
            batch = np.empty((len(chunk), self.size), dtype=np.int64)
            batch[:, 0] = lead
            if self.size > 1:
                batch[:, 1:] = np.array(chunk, dtype=np.int64)
            yield batch

    def _batch_costs(self, batch: np.ndarray, bound: float) -> Tuple[np.ndarray, np.ndarray]:
        """Return (surviving row positions, their costs); rows above bound are dropped."""
        service = self._cost[:, batch].min(axis=2)
        alive = np.arange(len(batch))
        running = np.zeros(len(batch))
        for block in self._blocks:
            block_max = np.asarray(block @ service).max(axis=0)
            running = np.maximum(running, block_max)
            keep = running <= bound
            if not keep.all():
                alive, running, service = alive[keep], running[keep], service[:, keep]
                if len(alive) == 0:
                    break
        return alive, running

    def _run_partition(self, lead: int, limit: int, incumbent: _Incumbent) -> None:
        for batch in self._subsets(lead, limit):
            alive, costs = self._batch_costs(batch, incumbent.cost)
            if len(alive) == 0:
                continue
            best = costs.min()
            # rows are lexicographic, so the first minimum is the tie-break winner
            pos = int(np.flatnonzero(costs == best)[0])
            picked = tuple(int(self.candidates[j]) for j in batch[alive[pos]])
            incumbent.offer(float(best), picked)

    def run(self, budget: Optional[int] = None, threads: int = 1,
            truncate: bool = False) -> SearchResult:
        """
        Search all subsets, or the first `budget` of them when truncating.

        Args:
            budget: maximum number of subsets to evaluate (None = unlimited)
            threads: worker count; the result does not depend on it
            truncate: on budget overflow evaluate a prefix instead of raising

        Returns:
            SearchResult with the best subset and enumeration counters.
        """
        total = self.total
        truncated = budget is not None and total > budget
        if truncated and not truncate:
            raise BudgetExceededError("subset enumeration", total, budget)

        # Assign each leading index its share of the (possibly truncated) prefix
        remaining = budget if truncated else total
        work = []
        for lead, size in enumerate(self._partition_sizes()):
            if remaining <= 0:
                break
            take = min(size, remaining)
            work.append((lead, take))
            remaining -= take
        enumerated = sum(take for _, take in work)

        incumbent = _Incumbent()
        if threads <= 1 or len(work) == 1:
            for lead, take in work:
                self._run_partition(lead, take, incumbent)
        else:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                futures = [pool.submit(self._run_partition, lead, take, incumbent)
                           for lead, take in work]
                for future in futures:
                    future.result()

        if truncated:
            logger.warning("Subset budget %d hit: evaluated %d of %d subsets", budget,
                           enumerated, total)
        logger.debug("Enumerated %d subsets of size %d over %d candidates", enumerated,
                     self.size, len(self.candidates))
        return SearchResult(incumbent.centers or (), incumbent.cost, enumerated, truncated)

    def all_costs(self) -> Dict[Tuple[int, ...], float]:
        """Cost of every subset, without pruning."""
        out: Dict[Tuple[int, ...], float] = {}
        for lead, size in enumerate(self._partition_sizes()):
            for batch in self._subsets(lead, size):
                _, costs = self._batch_costs(batch, math.inf)
                for row, cost in zip(batch, costs):
                    out[tuple(int(self.candidates[j]) for j in row)] = float(cost)
        return out
