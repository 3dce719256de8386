# test_cli.py
import json

import pytest
import yaml

from src.cli import main
from src.harness import load_records


@pytest.fixture(autouse=True)
def _no_tracking(monkeypatch):
    monkeypatch.delenv("WANDB_API_KEY", raising=False)


def test_bounds_tau_prints_the_power(capsys):
    assert main(["bounds", "--tau", "r=0.5", "d=2", "D=10"]) == 0
    assert capsys.readouterr().out.strip() == "0.00390625"


def test_bounds_k_xi(capsys):
    assert main(["bounds", "--kxi", "xi=0.9", "tau=0.3", "rho=1"]) == 0
    assert capsys.readouterr().out.strip() == "8"


def test_bounds_json_output(capsys):
    assert main(["bounds", "--tau", "r=0.5", "d=2", "D=10", "--format", "json"]) == 0
    row = json.loads(capsys.readouterr().out)
    assert row["bound"] == "tau"
    assert row["value"] == pytest.approx(0.00390625)


def test_bounds_missing_argument_is_a_config_error():
    assert main(["bounds", "--tau", "r=0.5"]) == 1
    assert main(["bounds"]) == 1


def test_unknown_subcommand_exits_with_config_code():
    assert main(["optimise"]) == 1


def test_missing_experiment_config_exits_with_config_code(tmp_path):
    assert main(["experiment", "--config", str(tmp_path / "missing.cfg")]) == 1


def test_suite_manifest_as_json(capsys):
    assert main(["suite", "--dim", "10", "--format", "json"]) == 0
    rows = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    assert len(rows) == 18
    assert all(row["D"] == 10 for row in rows)
    assert {"Branin", "Hartmann 6", "Zettl"} <= {row["name"] for row in rows}
    assert all(row["lipschitz"] is None for row in rows)


def test_suite_manifest_with_lipschitz_estimates(capsys):
    assert main(["suite", "--dim", "10", "--lipschitz-points", "10"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0].split()[-1] == "lipschitz"


def test_run_a_single_problem(capsys):
    code = main(["run", "--problem", "Branin", "--dim", "10", "--algorithm", "LA-REGO", "--format", "json",
                 "--seed", "3"])
    assert code == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["problem"] == "Branin"
    assert summary["D"] == 10
    assert summary["f_opt"] >= summary["f_star"] - 1e-9
    assert summary["total_evals"] > 0


def test_run_unknown_problem_is_a_config_error():
    assert main(["run", "--problem", "Ackley", "--dim", "10"]) == 1


def test_experiment_then_profile(tmp_path, capsys):
    config = tmp_path / "experiment.yaml"
    config.write_text(yaml.safe_dump({
        "problems": ["Branin", "Six-hump camel"],
        "dims": [10],
        "algorithms": [{"name": "LA-REGO"}, {"name": "LN-REGO"}],
        "seeds": 1,
        "max_evals": 3000,
    }))
    records = tmp_path / "records.jsonl"
    assert main(["experiment", "--config", str(config), "--out", str(records), "--quiet", "--jobs", "1"]) == 0
    assert len(load_records(str(records))) == 4
    capsys.readouterr()

    csv_path, svg_path = tmp_path / "profile.csv", tmp_path / "profile.svg"
    code = main(["profile", "--records", str(records), "--out", str(csv_path), "--svg", str(svg_path),
                 "--points", "5"])
    if not any(r.solved for r in load_records(str(records))):
        assert code == 2
        return
    assert code == 0
    assert csv_path.read_text().startswith("alpha,")
    assert svg_path.exists()
    assert "solved" in capsys.readouterr().out


def test_verify_small_grid(tmp_path, capsys):
    grid = tmp_path / "grid.yaml"
    grid.write_text(yaml.safe_dump({"points": [[4, 3, 0.5]]}))
    assert main(["verify", "--grid", str(grid), "--trials", "2000", "--jobs", "1", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("D,d,r,tau")
    assert "consistent" in lines[1]


def test_verify_grid_without_points_is_a_config_error(tmp_path):
    grid = tmp_path / "grid.yaml"
    grid.write_text(yaml.safe_dump({"D": [3]}))
    assert main(["verify", "--grid", str(grid)]) == 1
