"""
Benchmark table: every solver on seeded random instances against the oracle.
"""

import csv
import logging
import math
import time
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from robustkz.cli.generators import gen_uniform
from robustkz.euclid.fpt import fpt_solve
from robustkz.solvers.epas import choose_bicriteria, epas_solve
from robustkz.solvers.oracle import exact_solve

logger = logging.getLogger(__name__)

COLUMNS = ["seed", "n", "k", "z", "eps", "algo", "cost", "opt", "ratio",
           "tuples_enumerated", "wall_ms"]
ALGOS = ("exact", "bicriteria", "epas", "fpt-euclid")


def _ratio(cost: float, opt: float) -> float:
    if opt == 0:
        return 1.0 if cost == 0 else math.inf
    return cost / opt


def bench_rows(seeds: Sequence[int], n: int, dim: int, k: int, z: int, m: int,
               eps_values: Sequence[float], algos: Sequence[str] = ALGOS,
               threads: Optional[int] = None, timings: bool = False,
               budget: Optional[int] = None) -> List[Dict]:
    """One row per (seed, algo[, eps]); eps is left empty for algorithms without one."""
    unknown = set(algos) - set(ALGOS)
    if unknown:
        raise ValueError(f"unknown algorithms {sorted(unknown)}, expected a subset of {ALGOS}")
    rows = []
    for seed in seeds:
        instance = gen_uniform(n, dim, k, z, m=m, seed=seed)
        opt = exact_solve(instance, budget=budget, threads=threads).cost
        bic = None
        for algo in algos:
            runs = [(eps, algo) for eps in eps_values] if algo == "epas" else [(None, algo)]
            for eps, name in runs:
                started = time.perf_counter()
                if name == "exact":
                    solution = exact_solve(instance, budget=budget, threads=threads)
                else:
                    bic = bic or choose_bicriteria(instance, budget=budget, threads=threads)
                    if name == "bicriteria":
                        solution = instance.evaluate(bic.centers)
                    elif name == "epas":
                        solution = epas_solve(instance, eps, bicriteria=bic, threads=threads)
                    else:
                        solution = fpt_solve(instance, bic, budget=budget, threads=threads)
                elapsed = (time.perf_counter() - started) * 1000.0
                rows.append({
                    "seed": seed, "n": n, "k": k, "z": z,
                    "eps": "" if eps is None else eps,
                    "algo": name, "cost": solution.cost, "opt": opt,
                    "ratio": _ratio(solution.cost, opt),
                    "tuples_enumerated": solution.counters.get("subsets_enumerated", 0),
                    "wall_ms": round(elapsed, 3) if timings else "",
                })
        logger.info("Bench seed %d done (OPT %.6g)", seed, opt)
    return rows


def write_csv(rows: Sequence[Dict], path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.DictWriter(handle, fieldnames=COLUMNS)
        writer.writeheader()
        writer.writerows(rows)
    return path
