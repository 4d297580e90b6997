"""
k-partite graphs for the Multi-Colored Independent Set reduction.

Graphs are networkx graphs whose nodes carry a "part" attribute. Normalized
graphs have parts of equal size, nodes numbered consecutively part by part,
and in every part at least one node adjacent to all nodes of the other
parts. Padding always adds such universal nodes; a universal node never
belongs to a multi-colored independent set when k >= 2, so padding does not
change the answer.
"""

import itertools
import json
import logging
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import networkx as nx
import numpy as np

from robustkz.errors import InstanceValidationError

logger = logging.getLogger(__name__)

PART = "part"


class PartiteGraph:
    """A normalized k-partite graph."""

    def __init__(self, graph: nx.Graph):
        self.graph = graph
        self.k = 1 + max(data[PART] for _, data in graph.nodes(data=True))
        self.parts: List[List[int]] = [[] for _ in range(self.k)]
        for node, data in sorted(graph.nodes(data=True)):
            self.parts[data[PART]].append(node)
        self._validate()

    def _validate(self) -> None:
        if any(not part for part in self.parts):
            raise InstanceValidationError("every part needs at least one node")
        if sorted(self.graph.nodes) != list(range(self.graph.number_of_nodes())):
            raise InstanceValidationError("nodes must be numbered 0..n-1")
        for u, v in self.graph.edges:
            if self.part_of(u) == self.part_of(v):
                raise InstanceValidationError(f"edge ({u}, {v}) lies inside part {self.part_of(u)}")

    def part_of(self, node: int) -> int:
        return self.graph.nodes[node][PART]

    @property
    def part_size(self) -> int:
        return len(self.parts[0])

    @property
    def n(self) -> int:
        return self.graph.number_of_nodes()

    def edges(self) -> List[Tuple[int, int]]:
        """Edges as (u, v) with u < v, sorted."""
        return sorted((min(u, v), max(u, v)) for u, v in self.graph.edges)

    def is_universal(self, node: int) -> bool:
        outside = self.n - len(self.parts[self.part_of(node)])
        return self.graph.degree[node] == outside

    def is_normalized(self) -> bool:
        sizes = {len(p) for p in self.parts}
        return len(sizes) == 1 and all(any(self.is_universal(v) for v in p) for p in self.parts)

    def to_dict(self) -> Dict:
        return {"k": self.k, "parts": self.parts, "edges": [list(e) for e in self.edges()]}


def _relabel(graph: nx.Graph) -> nx.Graph:
    order = sorted(graph.nodes, key=lambda v: (graph.nodes[v][PART], v))
    return nx.relabel_nodes(graph, {old: new for new, old in enumerate(order)})


def _add_universal(graph: nx.Graph, part: int) -> None:
    node = max(graph.nodes, default=-1) + 1
    others = [v for v, d in graph.nodes(data=True) if d[PART] != part]
    graph.add_node(node, **{PART: part})
    graph.add_edges_from((node, v) for v in others)


def normalize_partite_graph(graph: nx.Graph) -> PartiteGraph:
    """
    Add universal padding nodes until every part has one and all parts have
    the same size, then renumber nodes part by part.
    """
    g = nx.Graph()
    for node, data in graph.nodes(data=True):
        g.add_node(node, **{PART: int(data[PART])})
    g.add_edges_from(graph.edges)
    k = 1 + max(d[PART] for _, d in g.nodes(data=True))
    added = 0
    for part in range(k):
        members = [v for v, d in g.nodes(data=True) if d[PART] == part]
        outside = g.number_of_nodes() - len(members)
        if not any(g.degree[v] == outside for v in members):
            _add_universal(g, part)
            added += 1
    largest = max(sum(1 for _, d in g.nodes(data=True) if d[PART] == p) for p in range(k))
    for part in range(k):
        while sum(1 for _, d in g.nodes(data=True) if d[PART] == part) < largest:
            _add_universal(g, part)
            added += 1
    if added:
        logger.info("Normalization added %d universal padding nodes", added)
    return PartiteGraph(_relabel(g))


def random_partite_graph(k: int, part_size: int, p: float, seed: int = 0,
                         plant_independent_set: bool = True) -> PartiteGraph:
    """
    Random k-partite graph with one universal node per part.

    Each part has part_size nodes, the last of which is universal. Other
    cross-part pairs are joined with probability p. When planting, one
    non-universal node per part is chosen and the edges among the chosen
    nodes are removed, forcing a multi-colored independent set.
    """
    if k < 2 or part_size < 2:
        raise ValueError("random partite graphs need k >= 2 and part_size >= 2")
    if not 0 <= p <= 1:
        raise ValueError(f"edge probability must lie in [0, 1], got {p}")
    rng = np.random.default_rng(seed)
    g = nx.Graph()
    nodes = [(i, r) for i in range(k) for r in range(part_size)]
    for index, (i, _) in enumerate(nodes):
        g.add_node(index, **{PART: i})
    for a, b in itertools.combinations(range(len(nodes)), 2):
        (i, r), (j, s) = nodes[a], nodes[b]
        if i == j:
            continue
        universal = r == part_size - 1 or s == part_size - 1
        if universal or rng.uniform() < p:
            g.add_edge(a, b)
    if plant_independent_set:
        chosen = [i * part_size + int(rng.integers(0, part_size - 1)) for i in range(k)]
        g.remove_edges_from(itertools.combinations(chosen, 2))
    return PartiteGraph(g)


def complete_partite_graph(k: int, part_size: int) -> PartiteGraph:
    """Complete k-partite graph: no multi-colored independent set for k >= 2."""
    g = nx.complete_multipartite_graph(*([part_size] * k))
    for node, data in g.nodes(data=True):
        data[PART] = data.pop("subset")
    return PartiteGraph(g)


def load_partite_graph(path: Union[str, Path]) -> PartiteGraph:
    """
    Read {"parts": [[node, ...], ...], "edges": [[u, v], ...]} and normalize.
    """
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    return partite_graph_from_dict(doc)


def partite_graph_from_dict(doc: Dict) -> PartiteGraph:
    g = nx.Graph()
    for part, members in enumerate(doc["parts"]):
        for node in members:
            if node in g:
                raise InstanceValidationError(f"node {node} appears in two parts")
            g.add_node(node, **{PART: part})
    for u, v in doc.get("edges", []):
        if u not in g or v not in g:
            raise InstanceValidationError(f"edge ({u}, {v}) references an unknown node")
        g.add_edge(u, v)
    return normalize_partite_graph(g)


def find_multicolored_independent_set(graph: PartiteGraph) -> Optional[Tuple[int, ...]]:
    """Exhaustive search over V_1 x ... x V_k; the first independent transversal or None."""
    adjacency = nx.to_numpy_array(graph.graph, nodelist=range(graph.n)) > 0
    for choice in itertools.product(*graph.parts):
        picked = list(choice)
        if not adjacency[np.ix_(picked, picked)].any():
            return tuple(picked)
    return None


def has_multicolored_independent_set(graph: PartiteGraph) -> bool:
    return find_multicolored_independent_set(graph) is not None
