"""
Multi-Colored Independent Set -> discrete k-Center gadget and its gap check.

Coordinates live in {0,1}^(k t) split into k blocks of t bits. Vertex v of
part i becomes the point whose i-th block is its code word b(v); edge (u, v)
between parts i and j becomes the point whose i-th and j-th blocks are the
complements of b(u) and b(v). Under l_q, distance^q equals Hamming distance.
"""

import logging
import math
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field

from robustkz.errors import InstanceValidationError
from robustkz.hardness.codes import CodeBook, hamming_matrix
from robustkz.hardness.graphs import PartiteGraph, find_multicolored_independent_set
from robustkz.instance.model import Instance
from robustkz.metric.space import LqSpace
from robustkz.reports import CheckReport
from robustkz.solvers.oracle import exact_solve

logger = logging.getLogger(__name__)

REL_TOL = 1e-9


def implied_ratio(eta: float, q: int) -> float:
    """((3/2 - 3 eta) / (1 + 2 eta))^(1/q), the hardness factor the gap implies."""
    return math.pow((1.5 - 3 * eta) / (1 + 2 * eta), 1.0 / q)


def gadget_points(graph: PartiteGraph, code: CodeBook) -> np.ndarray:
    """Vertex points in node order, then edge points in sorted edge order."""
    if graph.n > code.s:
        raise InstanceValidationError(
            f"graph has {graph.n} nodes but the code only {code.s} words"
        )
    k, t = graph.k, code.t
    words = code.words.astype(np.float64)
    rows = []
    for v in range(graph.n):
        point = np.zeros(k * t)
        i = graph.part_of(v)
        point[i * t:(i + 1) * t] = words[v]
        rows.append(point)
    for u, v in graph.edges():
        point = np.zeros(k * t)
        for node in (u, v):
            i = graph.part_of(node)
            point[i * t:(i + 1) * t] = 1.0 - words[node]
        rows.append(point)
    return np.array(rows)


def mcis_to_kcenter(graph: PartiteGraph, code: CodeBook, q: int = 2) -> Instance:
    """
    Discrete k-Center instance under l_q in dimension k t, with F = P, one
    singleton group per point and z = 1.
    """
    if q < 1:
        raise ValueError(f"q must be a positive integer, got {q}")
    points = gadget_points(graph, code)
    logger.info("Gadget: %d vertex points, %d edge points in dimension %d", graph.n,
                len(points) - graph.n, points.shape[1])
    return Instance.kcenter(LqSpace(q=float(q), dim=points.shape[1]), points, graph.k)


def check_gadget_distances(graph: PartiteGraph, code: CodeBook) -> CheckReport:
    """
    Exhaustively check the Hamming distances between vertex points and the
    other points against the intervals used by the reduction.
    """
    t, eta = code.t, code.eta
    points = gadget_points(graph, code)
    hamming = hamming_matrix(points.astype(np.uint8))
    edges = graph.edges()
    report = CheckReport(kind="gadget-distances", params={"t": t, "eta": eta, "n": graph.n})

    def within(value: float, low: float, high: float) -> bool:
        return low * (1 - REL_TOL) <= value <= high * (1 + REL_TOL)

    for v in range(graph.n):
        gv = graph.part_of(v)
        for w in range(v + 1, graph.n):
            if graph.part_of(w) == gv:
                ok = within(hamming[v, w], (0.5 - eta) * t, (0.5 + eta) * t)
                label = "same-part vertices"
            else:
                ok = within(hamming[v, w], (1 - 2 * eta) * t, (1 + 2 * eta) * t)
                label = "vertices of different parts"
            report.record(ok, f"{label} at unexpected distance", u=v, v=w, d=hamming[v, w])
        for e, (a, b) in enumerate(edges):
            d = hamming[v, graph.n + e]
            involved = {graph.part_of(a): a, graph.part_of(b): b}
            if gv not in involved:
                ok, label = d >= (1.5 - 3 * eta) * t * (1 - REL_TOL), "uninvolved part"
            elif involved[gv] == v:
                ok, label = d >= (1.5 - eta) * t * (1 - REL_TOL), "edge endpoint"
            else:
                ok = within(d, (1 - 2 * eta) * t, (1 + 2 * eta) * t)
                label = "involved part"
            report.record(ok, f"vertex-edge distance wrong ({label})", vertex=v, edge=[a, b], d=d)
    return report


def vertex_centered(instance: Instance, graph: PartiteGraph) -> Instance:
    """The gadget instance with facilities restricted to the vertex points."""
    return instance.with_facilities(instance.points[:graph.n])


class GapReport(BaseModel):
    """Outcome of comparing the k-Center optimum with the reduction's thresholds."""

    has_mcis: bool
    witness: Optional[List[int]] = None
    kcenter_opt: float
    opt_power: float
    yes_bound: float
    no_bound: float
    gap_respected: bool
    inapproximability_ratio: float
    q: int
    t: int
    eta: float


def verify_gap(instance: Instance, graph: PartiteGraph, code: CodeBook, q: int = 2,
               budget: Optional[int] = None, threads: Optional[int] = None) -> GapReport:
    """
    Decide MCIS exhaustively, solve k-Center with the oracle and check
    has_mcis => OPT^q <= (1 + 2 eta) t and not has_mcis => OPT^q >= (3/2 - 3 eta) t.

    The oracle only opens vertex points. With F = P an edge point can serve
    as a center and cover a NO instance within t.
    """
    if graph.k < 3:
        raise ValueError("the gap argument needs k >= 3")
    witness = find_multicolored_independent_set(graph)
    opt = exact_solve(vertex_centered(instance, graph), budget=budget, threads=threads).cost
    power = opt ** q
    yes_bound = (1 + 2 * code.eta) * code.t
    no_bound = (1.5 - 3 * code.eta) * code.t
    if witness is not None:
        respected = power <= yes_bound * (1 + REL_TOL)
    else:
        respected = power >= no_bound * (1 - REL_TOL)
    ratio = implied_ratio(code.eta, q)
    logger.info("Gap check: MCIS=%s, OPT^q=%.6g, bounds (%.6g, %.6g)", witness is not None,
                power, yes_bound, no_bound)
    return GapReport(has_mcis=witness is not None,
                     witness=list(witness) if witness is not None else None,
                     kcenter_opt=opt, opt_power=power, yes_bound=yes_bound, no_bound=no_bound,
                     gap_respected=respected, inapproximability_ratio=ratio, q=q, t=code.t,
                     eta=code.eta)


class GadgetSidecar(BaseModel):
    """Graph, code and thresholds written next to a generated gadget instance."""

    graph: Dict
    code: Dict
    bounds: Dict[str, float] = Field(default_factory=dict)


def gadget_sidecar(graph: PartiteGraph, code: CodeBook, q: int) -> GadgetSidecar:
    return GadgetSidecar(
        graph=graph.to_dict(),
        code={"mode": code.mode, "t": code.t, "eta": code.eta, "s": code.s,
              "words": code.words.tolist()},
        bounds={"yes": (1 + 2 * code.eta) * code.t, "no": (1.5 - 3 * code.eta) * code.t,
                "ratio": implied_ratio(code.eta, q)},
    )


def complement_code_instance(code: CodeBook, k: int = 1) -> Instance:
    """Code words as points and their complements as facilities, under l_1."""
    words = code.words.astype(np.float64)
    groups = [{p: 1.0} for p in range(code.s)]
    return Instance(LqSpace(q=1.0, dim=code.t), words, 1.0 - words, k, 1, groups)


def complement_chain(code: CodeBook, seed: int = 0) -> Tuple[List[int], np.ndarray, np.ndarray]:
    """
    A chain p_1, x_1, p_2, x_2, ... with p_{i+1} the complement of x_i and
    every x_i a complement not used before, following a seeded permutation.

    Returns:
        (word order, chain points, chain centers)
    """
    order = np.random.default_rng(seed).permutation(code.s).tolist()
    words = code.words.astype(np.float64)
    points = words[order]
    centers = 1.0 - words[order[1:]]
    return order, points, centers


def check_complement_chain(code: CodeBook, seed: int = 0) -> CheckReport:
    """
    Along the chain every center x_i is within (1/2 + eta) t of all earlier
    points p_1..p_i and at distance >= (1 - 2 eta) t from the next point
    p_{i+1}, which it was the complement of.
    """
    t, eta = code.t, code.eta
    order, points, centers = complement_chain(code, seed)
    report = CheckReport(kind="complement-chain", params={"seed": seed, "t": t, "eta": eta,
                                                          "order": order})
    for i, x in enumerate(centers):
        near = np.abs(points[:i + 1] - x).sum(axis=1)
        report.record(bool(np.all(near <= (0.5 + eta) * t * (1 + REL_TOL))),
                      "center too far from an earlier point", step=i, max_distance=near.max())
        far = float(np.abs(points[i + 1] - x).sum())
        report.record(far >= (1 - 2 * eta) * t * (1 - REL_TOL),
                      "center too close to the next point", step=i, distance=far)
    report.metrics = {"steps": len(centers)}
    return report
