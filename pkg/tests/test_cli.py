import csv
import json
import subprocess
import sys
from importlib import resources

import pytest
from jsonschema import validate

from drsom.cli import main
from drsom.report import TRACE_FIELDS


def _schema(name):
    return json.loads(resources.files("drsom").joinpath(f"schemas/{name}").read_text())


@pytest.fixture
def lp_file(tmp_path):
    path = tmp_path / "lp.json"
    assert main(["gen", "lp", "--n", "60", "--m", "20", "--r", "0.3", "--seed", "7", "--out", str(path)]) == 0
    return path


def test_gen_prints_digest(tmp_path, capsys):
    out = tmp_path / "snl.json"
    assert main(["gen", "snl", "--n", "20", "--m", "4", "--rd", "0.5", "--nf", "0.05", "--seed", "1", "--out", str(out)]) == 0
    dig, path = capsys.readouterr().out.split()
    assert len(dig) == 64 and path == str(out)
    validate(json.loads(out.read_text()), _schema("instance.schema.json"))


def test_gen_rejects_bad_density(tmp_path, capsys):
    code = main(["gen", "lp", "--n", "30", "--m", "10", "--r", "1.5", "--out", str(tmp_path / "x.json")])
    assert code != 0
    assert "sparsity" in capsys.readouterr().err


def test_solve_converges_with_trace_and_summary(tmp_path, lp_file, capsys):
    trace, out = tmp_path / "t.csv", tmp_path / "s.json"
    code = main(["solve", "--instance", str(lp_file), "--mode", "tr", "--model", "hvp", "--tol", "1e-5", "--trace", str(trace), "--out", str(out)])
    assert code == 0
    summary = json.loads(out.read_text())
    validate(summary, _schema("summary.schema.json"))
    assert summary["status"] == "converged"
    with open(trace) as fh:
        rows = list(csv.reader(fh))
    assert tuple(rows[0]) == TRACE_FIELDS
    assert len(rows) - 1 == summary["iterations"]


def test_solve_max_iter_exits_nonzero(lp_file, capsys):
    assert main(["solve", "--instance", str(lp_file), "--max-iter", "1"]) == 1
    assert json.loads(capsys.readouterr().out)["status"] == "max_iter"


def test_solve_is_deterministic(tmp_path, lp_file, capsys):
    results = []
    for i in range(2):
        trace = tmp_path / f"t{i}.csv"
        main(["solve", "--instance", str(lp_file), "--model", "interp", "--seed", "3", "--trace", str(trace)])
        summary = json.loads(capsys.readouterr().out)
        summary.pop("wall_seconds")
        results.append((summary, trace.read_text()))
    assert results[0] == results[1]


def test_config_file_and_flag_precedence(tmp_path, lp_file, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"solver": "gd", "max_iter": 3}))
    main(["solve", "--instance", str(lp_file), "--config", str(cfg)])
    s = json.loads(capsys.readouterr().out)
    assert s["solver"] == "gd" and s["iterations"] == 3
    main(["solve", "--instance", str(lp_file), "--config", str(cfg), "--max-iter", "5"])
    assert json.loads(capsys.readouterr().out)["iterations"] == 5


@pytest.mark.parametrize("solver", ["gd", "cg", "lbfgs"])
def test_solve_baselines(lp_file, solver, capsys):
    assert main(["solve", "--instance", str(lp_file), "--solver", solver, "--tol", "1e-4"]) == 0
    assert json.loads(capsys.readouterr().out)["solver"] == solver


def test_solve_missing_instance(tmp_path, capsys):
    assert main(["solve", "--instance", str(tmp_path / "missing.json")]) == 2


def test_bench_rows_per_cell_and_schema(tmp_path, capsys):
    prefix = tmp_path / "b"
    code = main([
        "bench", "--family", "lp", "--grid", "n=40,m=15,r=0.3", "--grid", "n=50,m=20,r=0.3",
        "--solvers", "drsom,gd", "--seeds", "1,2,3", "--tol", "1e-4", "--out", str(prefix),
    ])
    assert code == 0
    doc = json.loads((tmp_path / "b.json").read_text())
    validate(doc, _schema("bench.schema.json"))
    assert len(doc["runs"]) == 2 * 2 * 3
    for cell in {r["cell"] for r in doc["runs"]}:
        for label in {r["label"] for r in doc["runs"]}:
            assert sum(r["cell"] == cell and r["label"] == label for r in doc["runs"]) == 3
    assert len(doc["aggregates"]) == 4
    with open(tmp_path / "b.csv") as fh:
        assert len(list(csv.DictReader(fh))) == 12


def test_bench_empty_solver_list(tmp_path, capsys):
    code = main(["bench", "--family", "lp", "--grid", "n=40,m=15,r=0.3", "--solvers", "", "--out", str(tmp_path / "b")])
    assert code == 2
    assert "solver list is empty" in capsys.readouterr().err


def test_bench_spec_file(tmp_path, capsys):
    spec = {
        "family": "classic",
        "grid": [{"name": "rosenbrock", "n": 2}],
        "solvers": [{"solver": "drsom", "options": {"mode": "trust_radius", "model": {"tag": "hvp_exact"}}}, {"solver": "lbfgs"}],
        "seeds": [0],
        "tol_g": 1e-6,
    }
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(spec))
    assert main(["bench", "--spec", str(path), "--out", str(tmp_path / "c")]) == 0
    doc = json.loads((tmp_path / "c.json").read_text())
    assert all(r["status"] == "converged" for r in doc["runs"])


def test_console_entry_point(tmp_path):
    out = tmp_path / "r.json"
    proc = subprocess.run(
        [sys.executable, "-m", "drsom.cli", "gen", "classic", "--name", "rosenbrock", "--n", "2", "--out", str(out)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    proc = subprocess.run(
        [sys.executable, "-m", "drsom.cli", "solve", "--instance", str(out), "--mode", "tr", "--model", "hvp"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["status"] == "converged"
