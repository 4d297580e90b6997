"""
Randomized checks of the Euclidean assignment lemmas and the closed-form
constant behind the FPT approximation ratio.

Samples are drawn in fixed-size chunks, each with its own child seed from
numpy.random.SeedSequence, so reports do not depend on the worker count.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial.distance import cdist

from robustkz.config import settings
from robustkz.euclid.assignment import (
    ALPHA,
    BETA0,
    GAMMA_BOUND,
    projection_assign,
    sigma_assign,
)
from robustkz.euclid.closure import midpoint_closure
from robustkz.reports import CheckReport

logger = logging.getLogger(__name__)

CHUNK = 1000
POINTS_PER_CONFIGURATION = 16
PROJECTION_SLACK = 1e-12
CLAIM_EPS0 = Fraction(2, 1000)
CLAIM_BETA0 = Fraction(5, 100)
CLAIM_BOUND = Fraction(19982, 10000)


def _unit(rng: np.random.Generator, dim: int, count: int = 1) -> np.ndarray:
    v = rng.normal(size=(count, dim))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def _chunks(samples: int) -> List[int]:
    full, rest = divmod(samples, CHUNK)
    return [CHUNK] * full + ([rest] if rest else [])


def _run_chunks(worker, samples: int, seed: int, threads: Optional[int]) -> list:
    sizes = _chunks(samples)
    seeds = np.random.SeedSequence(seed).spawn(len(sizes))
    jobs = list(zip(sizes, seeds, range(len(sizes))))
    threads = settings.threads if threads is None else threads
    if threads <= 1:
        return [worker(*job) for job in jobs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda job: worker(*job), jobs))


def random_configuration(rng: np.random.Generator, dim: int, crowded: bool
                         ) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    One normalized configuration: o at the origin, b = pi_B(o) at distance 1,
    further members of B at distance >= 1 from o (one of them inside the
    mirror ball when crowded), and F = {o} + B + a few extra facilities.

    Returns:
        (o, B, F) with o as a 1 x d array.
    """
    o = np.zeros((1, dim))
    b = _unit(rng, dim)
    members = [b[0]]
    if crowded:
        mirror = -b[0]
        while True:
            candidate = mirror + ALPHA * rng.uniform() ** (1.0 / dim) * _unit(rng, dim)[0]
            if np.linalg.norm(candidate) >= 1.0:
                members.append(candidate)
                break
    for _ in range(int(rng.integers(0, 3))):
        members.append(rng.uniform(1.0, 3.0) * _unit(rng, dim)[0])
    bic = np.array(members)
    extras = int(rng.integers(0, 4))
    extra = rng.uniform(0.0, 2.0, size=(extras, 1)) * _unit(rng, dim, extras)
    facilities = np.vstack([o, bic, extra])
    return o, bic, facilities


def _sample_points(rng: np.random.Generator, anchors: np.ndarray, count: int) -> np.ndarray:
    """Points around randomly chosen anchors at log-uniform radii."""
    dim = anchors.shape[1]
    around = anchors[rng.integers(0, len(anchors), size=count)]
    radii = np.exp(rng.uniform(math.log(1e-3), math.log(10.0), size=(count, 1)))
    return around + radii * _unit(rng, dim, count)


def check_assignment_lemma(samples: int = 100_000, dims: Sequence[int] = tuple(range(2, 11)),
                           seed: int = 0, threads: Optional[int] = None,
                           alpha: float = ALPHA, beta0: float = BETA0,
                           bound: float = GAMMA_BOUND) -> CheckReport:
    """
    Sample (o, B, F, p) configurations and assert that every far point p has
    d(p, sigma(O)) / (2 d(p, O) + d(p, B)) <= bound.

    Args:
        samples: number of (configuration, point) pairs
        dims: dimensions cycled through
        seed: root seed
        threads: worker count (default from settings)
        alpha: mirror-ball radius factor
        beta0: far/near threshold
        bound: asserted ratio bound

    Returns:
        CheckReport of kind "assignment-lemma" with the max observed ratio.
    """
    dims = [int(d) for d in dims]

    def worker(size: int, child: np.random.SeedSequence, index: int) -> CheckReport:
        rng = np.random.default_rng(child)
        part = CheckReport(kind="assignment-lemma")
        worst = 0.0
        far_total = 0
        drawn = 0
        configuration = 0
        while drawn < size:
            count = min(POINTS_PER_CONFIGURATION, size - drawn)
            dim = dims[(index * CHUNK + configuration) % len(dims)]
            o, bic, facilities = random_configuration(rng, dim, crowded=configuration % 2 == 0)
            closure = facilities[list(midpoint_closure(facilities, range(1, 1 + len(bic))).members)]
            anchors = np.vstack([o, bic, 2.0 * o - bic[:1]])
            pts = _sample_points(rng, anchors, count)
            report = sigma_assign(o, bic, closure, pts, alpha=alpha, beta0=beta0)
            for j in np.flatnonzero(report.far):
                ratio = float(report.ratios[j])
                worst = max(worst, ratio)
                part.record(ratio <= bound + 1e-9, "far-point ratio above bound", seed=seed,
                            chunk=index, configuration=configuration, ratio=ratio,
                            o=o[0], bicriteria=bic, point=pts[j], sigma=report.sigma[0])
            far_total += int(report.far.sum())
            drawn += count
            configuration += 1
        part.metrics = {"max_ratio": worst, "far_points": far_total}
        logger.debug("Assignment chunk %d: max ratio %.6f", index, worst)
        return part

    report = CheckReport(kind="assignment-lemma", params={
        "samples": samples, "dims": dims, "seed": seed, "alpha": alpha, "beta0": beta0,
        "bound": bound,
    })
    worst = 0.0
    far_total = 0
    for part in _run_chunks(worker, samples, seed, threads):
        report.merge(part)
        worst = max(worst, part.metrics["max_ratio"])
        far_total += part.metrics["far_points"]
    report.metrics = {"max_ratio": worst, "far_points": far_total}
    logger.info("Assignment lemma: %d far points, max ratio %.6f", far_total, worst)
    return report


def check_projection_lemma(samples: int = 1000, dims: Sequence[int] = (1, 2, 3),
                           seed: int = 0, threads: Optional[int] = None) -> CheckReport:
    """
    Assert d(p, pi_B(x)) <= 2 d(p, x) + d(p, B) for random p, every x of a
    random center set X and a random B.
    """
    dims = [int(d) for d in dims]

    def worker(size: int, child: np.random.SeedSequence, index: int) -> CheckReport:
        rng = np.random.default_rng(child)
        part = CheckReport(kind="projection-lemma")
        worst = 0.0
        for s in range(size):
            dim = dims[(index * CHUNK + s) % len(dims)]
            x = rng.normal(size=(int(rng.integers(1, 5)), dim))
            b = rng.normal(size=(int(rng.integers(1, 5)), dim))
            p = rng.normal(size=(1, dim)) * 2.0
            image = b[projection_assign(x, b)]
            lhs = cdist(p, image)[0]
            rhs = 2.0 * cdist(p, x)[0] + cdist(p, b).min()
            worst = max(worst, float(np.max(lhs / np.maximum(rhs, 1e-300))))
            part.record(bool(np.all(lhs <= rhs + PROJECTION_SLACK)),
                        "projection bound violated", seed=seed, chunk=index, sample=s)
        part.metrics = {"max_ratio": worst}
        return part

    report = CheckReport(kind="projection-lemma",
                         params={"samples": samples, "dims": dims, "seed": seed})
    worst = 0.0
    for part in _run_chunks(worker, samples, seed, threads):
        report.merge(part)
        worst = max(worst, part.metrics["max_ratio"])
    report.metrics = {"max_ratio": worst}
    return report


def claim_value(z: int, eps0: Fraction = CLAIM_EPS0, beta0: Fraction = CLAIM_BETA0) -> Fraction:
    """2 (1 - eps0)^z + eps0 (1 + 2 beta0^z z), exactly."""
    return 2 * (1 - eps0) ** z + eps0 * (1 + 2 * beta0 ** z * z)


def check_claim(zs: Iterable[int] = range(1, 11)) -> CheckReport:
    """Assert claim_value(z) <= 1.9982 for every z."""
    zs = [int(z) for z in zs]
    report = CheckReport(kind="claim", params={"z": zs, "eps0": float(CLAIM_EPS0),
                                               "beta0": float(CLAIM_BETA0)})
    values = {}
    for z in zs:
        value = claim_value(z)
        values[str(z)] = float(value)
        report.record(value <= CLAIM_BOUND, "claim value above 1.9982", z=z, value=float(value))
    report.metrics = {"values": values, "bound": float(CLAIM_BOUND)}
    return report
