import csv
import json

import pytest
import typer
from typer.testing import CliRunner

from robustkz.cli import app, commands, main
from robustkz.instance import instance_digest, load_instance
from robustkz.reports import CheckReport
from robustkz.solvers import exact_solve

runner = CliRunner()


def invoke(*args):
    result = runner.invoke(app, ["--log-level", "WARNING", *args])
    assert result.exit_code == 0, result.output
    return result


@pytest.fixture
def instance_file(tmp_path):
    path = tmp_path / "inst.json"
    invoke("gen", "uniform", "--n", "16", "--k", "2", "--facilities", "7", "--seed", "3",
           "--out", str(path))
    return path


class TestGen:

    @pytest.mark.parametrize("kind", ["uniform", "gaussian", "line", "matrix"])
    def test_fixed_seed_is_reproducible(self, tmp_path, kind):
        first, second = tmp_path / "a.json", tmp_path / "b.json"
        invoke("gen", kind, "--seed", "11", "--out", str(first))
        invoke("gen", kind, "--seed", "11", "--out", str(second))
        assert first.read_bytes() == second.read_bytes()
        assert instance_digest(load_instance(first)) == instance_digest(load_instance(second))

    def test_zero_variance_gaussian_colocates_clusters(self, tmp_path):
        path = tmp_path / "g.json"
        invoke("gen", "gaussian", "--n", "30", "--clusters", "3", "--std", "0", "--out", str(path))
        points = {tuple(p) for p in json.loads(path.read_text())["points"]}
        assert len(points) <= 3

    def test_gadget_writes_sidecar(self, tmp_path):
        path = tmp_path / "gadget.json"
        invoke("gen", "gadget", "--k", "3", "--part-size", "2", "--edges", "complete",
               "--out", str(path))
        sidecar = json.loads((tmp_path / "gadget.sidecar.json").read_text())
        assert set(sidecar) == {"graph", "code", "bounds"}
        inst = load_instance(path)
        assert inst.k == 3
        assert inst.n == 6 + len(sidecar["graph"]["edges"])


class TestSolve:

    def test_exact_matches_oracle(self, instance_file, tmp_path):
        out = tmp_path / "r.json"
        invoke("solve", str(instance_file), "--algo", "exact", "--out", str(out))
        result = json.loads(out.read_text())
        opt = exact_solve(load_instance(instance_file))
        assert result["solution"]["centers"] == list(opt.centers)
        assert result["solution"]["cost"] == opt.cost
        assert result["certification"] == {"ratio_bound": 1.0, "certified": True}
        assert result["instance_digest"] == instance_digest(load_instance(instance_file))
        assert "wall_ms" not in result

    def test_epas_not_below_exact(self, instance_file, tmp_path):
        out = tmp_path / "r.json"
        invoke("solve", str(instance_file), "--algo", "epas", "--eps", "0.5", "--out", str(out))
        result = json.loads(out.read_text())
        opt = exact_solve(load_instance(instance_file)).cost
        assert opt <= result["solution"]["cost"] <= 1.5 * opt * (1 + 1e-9)
        assert result["counters"]["coreset_points"] <= 16

    @pytest.mark.parametrize("algo", ["exact", "bicriteria", "epas", "fpt-euclid"])
    def test_identical_across_runs_and_threads(self, instance_file, tmp_path, algo):
        outputs = []
        for threads in ("1", "4", "1"):
            out = tmp_path / f"{algo}-{threads}-{len(outputs)}.json"
            invoke("solve", str(instance_file), "--algo", algo, "--threads", threads,
                   "--out", str(out))
            outputs.append(out.read_bytes())
        assert outputs[0] == outputs[1] == outputs[2]

    def test_cost_recomputed_from_centers(self, instance_file, tmp_path):
        out = tmp_path / "r.json"
        invoke("solve", str(instance_file), "--algo", "bicriteria", "--out", str(out))
        result = json.loads(out.read_text())
        cost, _ = load_instance(instance_file).solution_cost(result["solution"]["centers"])
        assert result["solution"]["cost"] == cost

    def test_timings_opt_in(self, instance_file, tmp_path):
        out = tmp_path / "r.json"
        invoke("solve", str(instance_file), "--timings", "--out", str(out))
        assert json.loads(out.read_text())["wall_ms"] >= 0


class TestCoresetAndChecks:

    def test_coreset_build(self, instance_file, tmp_path):
        out = tmp_path / "c.json"
        invoke("coreset", "build", str(instance_file), "--eps", "0.4", "--out", str(out))
        doc = json.loads(out.read_text())
        assert {"rep", "params", "source_points", "size"} <= set(doc)
        assert doc["params"]["eps"] == 0.4

    def test_check_coreset(self, instance_file, tmp_path):
        out = tmp_path / "check.json"
        invoke("check", "coreset", str(instance_file), "--out", str(out))
        assert json.loads(out.read_text())["passed"]

    @pytest.mark.parametrize("args", [
        ["projection-lemma", "--samples", "1000"],
        ["assignment-lemma", "--samples", "2000"],
        ["eps-net", "--calls", "50"],
        ["claim"],
        ["complement-chain", "--s", "7"],
    ])
    def test_checks_pass(self, tmp_path, args):
        out = tmp_path / "check.json"
        invoke("check", *args, "--out", str(out))
        assert json.loads(out.read_text())["passed"]

    def test_gadget_gap_on_complete_graph(self, tmp_path):
        out = tmp_path / "gap.json"
        invoke("check", "gadget-gap", "--edges", "complete", "--part-size", "2", "--out", str(out))
        report = json.loads(out.read_text())
        assert report["gap_respected"]
        assert not report["has_mcis"]


class TestBench:

    def test_csv_rows(self, tmp_path):
        out = tmp_path / "bench.csv"
        invoke("bench", "--seeds", "0,1", "--n", "10", "--algos", "exact,epas",
               "--eps", "0.5", "--out", str(out))
        with out.open() as handle:
            rows = list(csv.DictReader(handle))
        assert len(rows) == 4
        assert list(rows[0]) == ["seed", "n", "k", "z", "eps", "algo", "cost", "opt", "ratio",
                                 "tuples_enumerated", "wall_ms"]
        exact = [r for r in rows if r["algo"] == "exact"]
        assert all(float(r["ratio"]) == 1.0 for r in exact)
        assert all(r["wall_ms"] == "" for r in rows)


class TestExitCodes:

    def test_ok(self, capsys):
        assert main(["--log-level", "WARNING", "check", "claim"]) == 0
        assert json.loads(capsys.readouterr().out)["passed"]

    def test_usage_error(self, capsys):
        assert main(["solve", "--no-such-flag"]) == 1
        assert "--no-such-flag" in capsys.readouterr().err

    def test_usage_errors_share_the_caught_base(self):
        assert issubclass(typer.BadParameter, commands.ClickException)
        command = typer.main.get_command(commands.app)
        with pytest.raises(commands.ClickException):
            command.main(args=["solve", "--no-such-flag"], prog_name="robustkz",
                         standalone_mode=False)

    def test_unknown_algorithm(self, instance_file):
        assert main(["solve", str(instance_file), "--algo", "kmeans"]) == 1

    def test_budget_exceeded(self, instance_file, capsys):
        assert main(["solve", str(instance_file), "--algo", "exact", "--budget", "1"]) == 2
        assert "budget" in capsys.readouterr().err

    def test_non_euclidean_instance(self, tmp_path):
        path = tmp_path / "l1.json"
        invoke("gen", "uniform", "--q", "1", "--out", str(path))
        assert main(["solve", str(path), "--algo", "fpt-euclid"]) == 1

    def test_failed_check(self, monkeypatch):
        failing = CheckReport(kind="claim")
        failing.record(False, "forced failure")
        monkeypatch.setattr(commands, "check_claim", lambda zs: failing)
        assert main(["check", "claim"]) == 3
