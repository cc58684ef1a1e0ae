"""
Desk-scale end-to-end runs through the CLI; several minutes to hours each

Run with: pytest -m slow
"""

import json

import pandas as pd
import pytest

from main import main

pytestmark = pytest.mark.slow


@pytest.fixture(autouse=True)
def isolated_env(tmp_path, monkeypatch):
    monkeypatch.setenv("GSMODAC_LOG_DIR", str(tmp_path / "logs"))


def cli(capsys, *argv):
    code = main(["--quiet", "--seed", "1", *argv])
    captured = capsys.readouterr()
    assert code == 0, captured.err
    return json.loads(captured.out)


def mean_hv(results_csv, method):
    df = pd.read_csv(results_csv)
    return df[df["method"] == method].groupby("instance")["hv"].mean().mean()


def test_policy_beats_static_nsga2_on_bi_fjsp(tmp_path, capsys):
    data = tmp_path / "fjsp"
    experiment = ["--instances", str(data), "--population", "50", "--generations", "50"]
    cli(capsys, "generate", "--problem", "fjsp", "--size", "5j5m", "--count", "40", "--out", str(data))
    cli(capsys, "bootstrap", *experiment)
    trained = cli(capsys, "train", *experiment, "--total-steps", "50000", "--run-dir", str(tmp_path / "run"))
    out = tmp_path / "eval"
    cli(capsys, "evaluate", *experiment, "--checkpoint", trained["checkpoint"], "static", "--runs", "5", "--out", str(out))
    label = "epoch_00100"
    assert mean_hv(out / "results.csv", label) >= mean_hv(out / "results.csv", "static")


def test_tuned_mopso_matches_vanilla_on_bi_cvrp(tmp_path, capsys):
    data = tmp_path / "cvrp"
    experiment = [
        "--instances", str(data),
        "--problem", "cvrp",
        "--algorithm", "mopso",
        "--population", "50",
        "--generations", "50",
    ]
    cli(capsys, "generate", "--problem", "cvrp", "--size", "20", "--count", "20", "--out", str(data))
    cli(capsys, "bootstrap", *experiment)
    trained = cli(capsys, "train", *experiment, "--total-steps", "10000", "--run-dir", str(tmp_path / "run"))
    out = tmp_path / "eval"
    cli(capsys, "evaluate", *experiment, "--checkpoint", trained["checkpoint"], "static", "--runs", "5", "--out", str(out))
    assert mean_hv(out / "results.csv", "epoch_00020") >= mean_hv(out / "results.csv", "static")


def test_ablation_variants_train_and_evaluate_together(tmp_path, capsys):
    data = tmp_path / "fjsp"
    experiment = ["--instances", str(data), "--population", "20", "--generations", "10"]
    cli(capsys, "generate", "--problem", "fjsp", "--size", "5j5m", "--count", "8", "--out", str(data))
    cli(capsys, "bootstrap", *experiment)
    checkpoints = []
    for name, flags in (("full", []), ("no_budget", ["--no-budget-feature"]), ("one_layer", ["--gcn-layers", "1"])):
        trained = cli(capsys, "train", *experiment, *flags, "--total-steps", "1000", "--run-dir", str(tmp_path / name))
        checkpoints.append(trained["checkpoint"])
    summary = cli(capsys, "evaluate", *experiment, "--checkpoint", *checkpoints, "static", "--runs", "2", "--out", str(tmp_path / "eval"))
    assert len(summary) == 4
    df = pd.read_csv(tmp_path / "eval" / "results.csv")
    assert df["method"].nunique() == 4
