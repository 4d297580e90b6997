"""
robustkz command line.

JSON results go to stdout or --out, logs go to stderr. Exit codes: 0 ok,
1 usage or invalid input, 2 budget exceeded, 3 check failed.
"""

import logging
import sys
import time
from pathlib import Path
from typing import Any, Dict, List, Optional

import typer

from robustkz.cli.bench import ALGOS, bench_rows, write_csv
from robustkz.cli.generators import gen_gaussian, gen_line, gen_matrix, gen_uniform
from robustkz.cli.results import run_result
from robustkz.config import settings
from robustkz.coreset import build_coreset, check_coreset_guarantee, coreset_to_dict
from robustkz.errors import BudgetExceededError, RobustKZError
from robustkz.euclid import (
    check_assignment_lemma,
    check_claim,
    check_projection_lemma,
    fpt_solve,
    ratio_bound,
)
from robustkz.hardness import (
    build_code,
    check_complement_chain,
    complete_partite_graph,
    load_partite_graph,
    mcis_to_kcenter,
    random_partite_graph,
    verify_gap,
)
from robustkz.hardness.gadget import gadget_sidecar
from robustkz.hardness.graphs import PartiteGraph
from robustkz.instance.io import canonical_json, instance_to_dict, load_instance
from robustkz.instance.model import Instance
from robustkz.metric.nets import check_eps_nets
from robustkz.reports import CheckReport
from robustkz.solvers.bicriteria import AlphaMode
from robustkz.solvers.epas import certified_epas_ratio, choose_bicriteria, epas_solve
from robustkz.solvers.oracle import exact_solve

logger = logging.getLogger(__name__)

EXIT_USAGE = 1
EXIT_BUDGET = 2
EXIT_CHECK_FAILED = 3

# Base of the usage errors raised by whichever click build typer runs on
ClickException = next(cls for cls in typer.BadParameter.__mro__
                      if cls.__name__ == "ClickException")

app = typer.Typer(
    name="robustkz",
    help="Robust (k,z)-clustering: exact, coreset, leader-guessing and Euclidean FPT solvers",
    add_completion=False,
)
gen_app = typer.Typer(help="Generate seeded instances")
coreset_app = typer.Typer(help="Coreset construction")
check_app = typer.Typer(help="Property checks (exit code 3 on any failed assertion)")
app.add_typer(gen_app, name="gen")
app.add_typer(coreset_app, name="coreset")
app.add_typer(check_app, name="check")


def _emit(data: Any, out: Optional[Path]) -> None:
    text = canonical_json(data)
    if out is None:
        typer.echo(text, nl=False)
    else:
        out.write_text(text, encoding="utf-8")
        logger.info("Wrote %s", out)


def _int_list(text: str) -> List[int]:
    return [int(part) for part in text.split(",") if part.strip()]


def _float_list(text: str) -> List[float]:
    return [float(part) for part in text.split(",") if part.strip()]


def _threads(threads: Optional[int]) -> int:
    return settings.threads if threads is None else threads


def _finish_check(report: CheckReport, out: Optional[Path]) -> None:
    _emit(report, out)
    logger.info("Check %s: %d assertions, %d failed", report.kind, report.assertions,
                report.failure_count)
    if not report.passed:
        raise typer.Exit(EXIT_CHECK_FAILED)


@app.callback()
def configure(
    log_level: Optional[str] = typer.Option(
        None, "--log-level", help="Logging level (default from ROBUSTKZ_LOG_LEVEL)"
    ),
):
    """Configure logging for every subcommand."""
    logging.basicConfig(
        level=(log_level or settings.log_level).upper(),
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        force=True,
    )


# Generators

OUT_OPTION = typer.Option(None, "--out", "-o", help="Output file (default: stdout)")


@gen_app.command("uniform")
def gen_uniform_cmd(
    n: int = typer.Option(20, "--n", help="Number of points"),
    dim: int = typer.Option(2, "--dim", help="Dimension"),
    k: int = typer.Option(2, "--k", help="Number of centers"),
    z: int = typer.Option(1, "--z", help="Distance exponent"),
    m: int = typer.Option(2, "--groups", "-m", help="Number of groups"),
    facilities: int = typer.Option(0, "--facilities", help="Separate facilities (0: F = P)"),
    q: float = typer.Option(2.0, "--q", help="l_q exponent"),
    weighted: bool = typer.Option(False, "--weighted", help="Random point weights in [1, 4)"),
    seed: int = typer.Option(0, "--seed", help="Random seed"),
    out: Optional[Path] = OUT_OPTION,
):
    """Points uniform in the unit cube."""
    _emit(instance_to_dict(gen_uniform(n, dim, k, z, m=m, facilities=facilities, seed=seed,
                                       q=q, weighted=weighted)), out)


@gen_app.command("gaussian")
def gen_gaussian_cmd(
    n: int = typer.Option(20, "--n", help="Number of points"),
    dim: int = typer.Option(2, "--dim", help="Dimension"),
    k: int = typer.Option(2, "--k", help="Number of centers"),
    z: int = typer.Option(1, "--z", help="Distance exponent"),
    clusters: int = typer.Option(3, "--clusters", help="Mixture components"),
    std: float = typer.Option(0.1, "--std", help="Component standard deviation"),
    m: int = typer.Option(2, "--groups", "-m", help="Number of groups"),
    facilities: int = typer.Option(0, "--facilities", help="Separate facilities (0: F = P)"),
    q: float = typer.Option(2.0, "--q", help="l_q exponent"),
    weighted: bool = typer.Option(False, "--weighted", help="Random point weights in [1, 4)"),
    seed: int = typer.Option(0, "--seed", help="Random seed"),
    out: Optional[Path] = OUT_OPTION,
):
    """Gaussian mixture in [0, 10]^dim."""
    _emit(instance_to_dict(gen_gaussian(n, dim, k, z, clusters=clusters, std=std, m=m,
                                        facilities=facilities, seed=seed, q=q,
                                        weighted=weighted)), out)


@gen_app.command("line")
def gen_line_cmd(
    n: int = typer.Option(20, "--n", help="Number of points"),
    k: int = typer.Option(2, "--k", help="Number of centers"),
    z: int = typer.Option(1, "--z", help="Distance exponent"),
    m: int = typer.Option(2, "--groups", "-m", help="Number of groups"),
    facilities: int = typer.Option(0, "--facilities", help="Separate facilities (0: F = P)"),
    length: float = typer.Option(100.0, "--length", help="Segment length"),
    seed: int = typer.Option(0, "--seed", help="Random seed"),
    out: Optional[Path] = OUT_OPTION,
):
    """Points on a segment of the real line."""
    _emit(instance_to_dict(gen_line(n, k, z, m=m, facilities=facilities, seed=seed,
                                    length=length)), out)


@gen_app.command("matrix")
def gen_matrix_cmd(
    n: int = typer.Option(20, "--n", help="Number of points"),
    k: int = typer.Option(2, "--k", help="Number of centers"),
    z: int = typer.Option(1, "--z", help="Distance exponent"),
    m: int = typer.Option(2, "--groups", "-m", help="Number of groups"),
    seed: int = typer.Option(0, "--seed", help="Random seed"),
    out: Optional[Path] = OUT_OPTION,
):
    """Explicit distance matrix."""
    _emit(instance_to_dict(gen_matrix(n, k, z, m=m, seed=seed)), out)


def _partite_graph(k: int, part_size: int, edges: str, seed: int) -> PartiteGraph:
    if edges == "complete":
        return complete_partite_graph(k, part_size)
    if edges.startswith("random:"):
        return random_partite_graph(k, part_size, float(edges.split(":", 1)[1]), seed=seed)
    return load_partite_graph(edges)


@gen_app.command("gadget")
def gen_gadget_cmd(
    k: int = typer.Option(3, "--k", help="Number of parts"),
    part_size: int = typer.Option(3, "--part-size", help="Nodes per part"),
    edges: str = typer.Option("random:0.5", "--edges",
                              help="Edge source: random:<p>, complete, or a graph JSON file"),
    code: str = typer.Option("hadamard", "--code", help="hadamard or random-linear"),
    eta: float = typer.Option(0.0, "--eta", help="Code balance parameter"),
    q: int = typer.Option(2, "--q", help="l_q exponent of the gadget metric"),
    seed: int = typer.Option(0, "--seed", help="Random seed"),
    out: Optional[Path] = OUT_OPTION,
    sidecar: Optional[Path] = typer.Option(
        None, "--sidecar", help="Sidecar file (default: <out>.sidecar.json when --out is set)"
    ),
):
    """Multi-colored independent set gadget with a {graph, code, bounds} sidecar."""
    graph = _partite_graph(k, part_size, edges, seed)
    book = build_code(graph.n, eta=eta, mode=code, seed=seed)
    instance = mcis_to_kcenter(graph, book, q=q)
    _emit(instance_to_dict(instance), out)
    if sidecar is None and out is not None:
        sidecar = out.with_suffix(".sidecar.json")
    if sidecar is not None:
        sidecar.write_text(canonical_json(gadget_sidecar(graph, book, q)), encoding="utf-8")
        logger.info("Wrote sidecar %s", sidecar)


# Solvers


@app.command()
def solve(
    instance_path: Path = typer.Argument(..., help="Instance JSON file"),
    algo: str = typer.Option("exact", "--algo", help="exact, bicriteria, epas or fpt-euclid"),
    eps: float = typer.Option(0.5, "--eps", help="Accuracy for epas"),
    bicriteria: str = typer.Option("auto", "--bicriteria", help="auto, exact or greedy"),
    beta: float = typer.Option(2.0, "--beta", help="Greedy bicriteria size factor"),
    assume_alpha: Optional[float] = typer.Option(
        None, "--assume-alpha", help="Configured alpha when the oracle is unaffordable"
    ),
    budget: Optional[int] = typer.Option(None, "--budget", help="Enumeration budget"),
    threads: Optional[int] = typer.Option(None, "--threads", help="Worker threads"),
    timings: bool = typer.Option(False, "--timings", help="Record wall-clock time"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Seed echoed into the result"),
    out: Optional[Path] = OUT_OPTION,
):
    """Solve an instance and emit a RunResult."""
    instance = load_instance(instance_path, validation_limit=settings.matrix_validation_limit)
    workers = _threads(threads)
    alpha = settings.assume_alpha if assume_alpha is None else assume_alpha
    bic_options = {"mode": bicriteria, "beta": beta, "assume_alpha": alpha, "budget": budget}
    params: Dict[str, Any] = {"algo": algo}
    started = time.perf_counter()
    if algo == "exact":
        solution = exact_solve(instance, budget=budget, threads=workers)
        bound = 1.0
    elif algo == "bicriteria":
        bic = choose_bicriteria(instance, threads=workers, **bic_options)
        solution = instance.evaluate(bic.centers, certified=bic.alpha_certified)
        bound = None if bic.alpha_mode is AlphaMode.UNKNOWN else bic.alpha
        params.update(bicriteria=bicriteria, beta=beta, alpha_mode=bic.alpha_mode.value)
    elif algo == "epas":
        bic = choose_bicriteria(instance, threads=workers, **bic_options)
        solution = epas_solve(instance, eps, bicriteria=bic, threads=workers,
                              search_budget=budget)
        bound = certified_epas_ratio(eps)
        params.update(eps=eps, bicriteria=bicriteria, alpha_mode=bic.alpha_mode.value)
    elif algo == "fpt-euclid":
        bic = choose_bicriteria(instance, threads=workers, **bic_options)
        solution = fpt_solve(instance, bic, budget=budget, threads=workers)
        bound = ratio_bound(instance.z)
        params.update(bicriteria=bicriteria, alpha_mode=bic.alpha_mode.value)
    else:
        raise typer.BadParameter(f"unknown algorithm {algo!r}", param_hint="--algo")
    wall_ms = (time.perf_counter() - started) * 1000.0 if timings else None
    _emit(run_result(instance, solution, algo, bound, params, wall_ms=wall_ms, seed=seed), out)


@coreset_app.command("build")
def coreset_build(
    instance_path: Path = typer.Argument(..., help="Instance JSON file"),
    eps: float = typer.Option(0.4, "--eps", help="Coreset accuracy in (0, 1)"),
    bicriteria: str = typer.Option("auto", "--bicriteria", help="auto, exact or greedy"),
    beta: float = typer.Option(2.0, "--beta", help="Greedy bicriteria size factor"),
    assume_alpha: Optional[float] = typer.Option(None, "--assume-alpha", help="Configured alpha"),
    budget: Optional[int] = typer.Option(None, "--budget", help="Oracle budget"),
    threads: Optional[int] = typer.Option(None, "--threads", help="Worker threads"),
    out: Optional[Path] = OUT_OPTION,
):
    """Build a coreset and write it in instance form plus rep and params."""
    instance = load_instance(instance_path, validation_limit=settings.matrix_validation_limit)
    bic = choose_bicriteria(instance, mode=bicriteria, beta=beta,
                            assume_alpha=settings.assume_alpha if assume_alpha is None
                            else assume_alpha, budget=budget, threads=_threads(threads))
    coreset = build_coreset(instance, bic, eps)
    _emit(coreset_to_dict(coreset, instance), out)


# Checks


@check_app.command("coreset")
def check_coreset_cmd(
    instance_path: Optional[Path] = typer.Argument(
        None, help="Instance JSON file (default: a seeded uniform instance)"
    ),
    eps: float = typer.Option(0.4, "--eps", help="Coreset accuracy"),
    bicriteria: str = typer.Option("exact", "--bicriteria", help="auto, exact or greedy"),
    budget: Optional[int] = typer.Option(None, "--budget", help="Oracle budget"),
    threads: Optional[int] = typer.Option(None, "--threads", help="Worker threads"),
    seed: int = typer.Option(0, "--seed", help="Seed of the generated instance"),
    out: Optional[Path] = OUT_OPTION,
):
    """Exhaustive coreset guarantee over every k-subset."""
    if instance_path is None:
        instance: Instance = gen_uniform(30, 2, 2, 1, m=2, facilities=10, seed=seed)
    else:
        instance = load_instance(instance_path, validation_limit=settings.matrix_validation_limit)
    bic = choose_bicriteria(instance, mode=bicriteria, budget=budget, threads=_threads(threads))
    report = check_coreset_guarantee(instance, build_coreset(instance, bic, eps), budget=budget)
    _finish_check(report, out)


@check_app.command("projection-lemma")
def check_projection_cmd(
    samples: int = typer.Option(1000, "--samples", help="Configurations per run"),
    dims: str = typer.Option("1,2,3,5,10", "--dims", help="Comma-separated dimensions"),
    seed: int = typer.Option(0, "--seed", help="Root seed"),
    threads: Optional[int] = typer.Option(None, "--threads", help="Worker threads"),
    out: Optional[Path] = OUT_OPTION,
):
    """d(x, sigma(X)) <= 2 d(x, X) + d(x, B) on random configurations."""
    _finish_check(check_projection_lemma(samples=samples, dims=_int_list(dims), seed=seed,
                                         threads=_threads(threads)), out)


@check_app.command("assignment-lemma")
def check_assignment_cmd(
    samples: int = typer.Option(100_000, "--samples", help="Sampled far points"),
    dims: str = typer.Option("2,3,4,5,6,7,8,9,10", "--dims", help="Comma-separated dimensions"),
    seed: int = typer.Option(0, "--seed", help="Root seed"),
    threads: Optional[int] = typer.Option(None, "--threads", help="Worker threads"),
    out: Optional[Path] = OUT_OPTION,
):
    """Max displacement ratio of far points stays below the assignment bound."""
    _finish_check(check_assignment_lemma(samples=samples, dims=_int_list(dims), seed=seed,
                                         threads=_threads(threads)), out)


@check_app.command("eps-net")
def check_eps_net_cmd(
    calls: int = typer.Option(200, "--calls", help="Random ball decompositions"),
    seed: int = typer.Option(0, "--seed", help="Random seed"),
    out: Optional[Path] = OUT_OPTION,
):
    """Density and separation of ball_decompose output."""
    _finish_check(check_eps_nets(calls=calls, seed=seed), out)


@check_app.command("claim")
def check_claim_cmd(
    zmax: int = typer.Option(10, "--zmax", help="Largest z evaluated"),
    out: Optional[Path] = OUT_OPTION,
):
    """Exact rational evaluation of the near/far constant for z = 1..zmax."""
    _finish_check(check_claim(range(1, zmax + 1)), out)


@check_app.command("gadget-gap")
def check_gadget_gap_cmd(
    k: int = typer.Option(3, "--k", help="Number of parts"),
    part_size: int = typer.Option(3, "--part-size", help="Nodes per part"),
    edges: str = typer.Option("complete", "--edges",
                              help="Edge source: random:<p>, complete, or a graph JSON file"),
    code: str = typer.Option("hadamard", "--code", help="hadamard or random-linear"),
    eta: float = typer.Option(0.0, "--eta", help="Code balance parameter"),
    q: int = typer.Option(2, "--q", help="l_q exponent"),
    seed: int = typer.Option(0, "--seed", help="Random seed"),
    budget: Optional[int] = typer.Option(None, "--budget", help="Oracle budget"),
    threads: Optional[int] = typer.Option(None, "--threads", help="Worker threads"),
    out: Optional[Path] = OUT_OPTION,
):
    """Compare the gadget's k-Center optimum with the YES and NO thresholds."""
    graph = _partite_graph(k, part_size, edges, seed)
    book = build_code(graph.n, eta=eta, mode=code, seed=seed)
    report = verify_gap(mcis_to_kcenter(graph, book, q=q), graph, book, q=q, budget=budget,
                        threads=_threads(threads))
    _emit(report, out)
    if not report.gap_respected:
        raise typer.Exit(EXIT_CHECK_FAILED)


@check_app.command("complement-chain")
def check_complement_chain_cmd(
    s: int = typer.Option(16, "--s", help="Number of code words"),
    code: str = typer.Option("hadamard", "--code", help="hadamard or random-linear"),
    eta: float = typer.Option(0.0, "--eta", help="Code balance parameter"),
    seed: int = typer.Option(0, "--seed", help="Random seed"),
    out: Optional[Path] = OUT_OPTION,
):
    """Distances along a chain of words and their complements."""
    _finish_check(check_complement_chain(build_code(s, eta=eta, mode=code, seed=seed), seed),
                  out)


# Benchmark


@app.command()
def bench(
    seeds: str = typer.Option("0,1,2", "--seeds", help="Comma-separated instance seeds"),
    n: int = typer.Option(20, "--n", help="Points per instance"),
    dim: int = typer.Option(2, "--dim", help="Dimension"),
    k: int = typer.Option(2, "--k", help="Number of centers"),
    z: int = typer.Option(1, "--z", help="Distance exponent"),
    m: int = typer.Option(2, "--groups", "-m", help="Number of groups"),
    eps: str = typer.Option("0.3,0.5", "--eps", help="Comma-separated eps values for epas"),
    algos: str = typer.Option(",".join(ALGOS), "--algos", help="Comma-separated algorithms"),
    budget: Optional[int] = typer.Option(None, "--budget", help="Oracle budget"),
    threads: Optional[int] = typer.Option(None, "--threads", help="Worker threads"),
    timings: bool = typer.Option(False, "--timings", help="Record wall-clock time"),
    out: Optional[Path] = typer.Option(None, "--out", "-o",
                                       help="CSV file (default: <results_dir>/bench.csv)"),
):
    """Benchmark every solver against the oracle and write a CSV table."""
    rows = bench_rows(_int_list(seeds), n, dim, k, z, m, _float_list(eps),
                      algos=[a.strip() for a in algos.split(",") if a.strip()],
                      threads=_threads(threads), timings=timings, budget=budget)
    path = write_csv(rows, out or Path(settings.results_dir) / "bench.csv")
    typer.echo(f"Wrote {len(rows)} rows to {path}", err=True)


def main(argv: Optional[List[str]] = None) -> int:
    """Run the CLI and translate errors into exit codes."""
    command = typer.main.get_command(app)
    try:
        result = command.main(args=argv, prog_name="robustkz", standalone_mode=False)
    except ClickException as e:
        e.show()
        return EXIT_USAGE
    except typer.Abort:
        typer.echo("Aborted", err=True)
        return EXIT_USAGE
    except BudgetExceededError as e:
        typer.echo(f"Error: {e}", err=True)
        return EXIT_BUDGET
    except (RobustKZError, ValueError, OSError) as e:
        typer.echo(f"Error: {e}", err=True)
        return EXIT_USAGE
    return result if isinstance(result, int) else 0


if __name__ == "__main__":
    sys.exit(main())
