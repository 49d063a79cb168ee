import csv

import pytest

from pycirl import __version__
from pycirl.common import load_environment_document
from pycirl.harness import cli_main, main

TINY = """\
[environment]
kind = "gridworld"
width = 3
height = 3
reward_map = "two_goals"

[expert]
n_demos = 4

[learner]
n_repeats = 1

[strategy]
names = ["r_cirl", "batch"]
"""


@pytest.fixture
def tiny_config(tmp_path):
    path = tmp_path / "tiny.toml"
    path.write_text(TINY)
    return path


def test_validate(config_directory, capsys):
    assert main(["validate", str(config_directory / "grid1.toml"), "--quiet"]) == 0
    out = capsys.readouterr().out
    assert "ok" in out
    assert "25 demos" in out


def test_validate_missing_key(tmp_path, capsys):
    path = tmp_path / "broken.toml"
    path.write_text('[environment]\nreward_map = "single_goal"\n')

    assert main(["validate", str(path), "--quiet"]) == 1
    assert "'kind'" in capsys.readouterr().err


def test_invalid_toml(tmp_path, capsys):
    path = tmp_path / "broken.toml"
    path.write_text("[environment\n")

    assert main(["validate", str(path), "--quiet"]) == 1
    assert str(path) in capsys.readouterr().err


def test_missing_file(tmp_path):
    assert main(["validate", str(tmp_path / "missing.toml"), "--quiet"]) == 2


def test_run_is_reproducible(tiny_config, tmp_path, capsys):
    first, second = tmp_path / "first", tmp_path / "second"

    assert main(["run", str(tiny_config), "--out", str(first), "--seed", "3", "--quiet"]) == 0
    assert main(["run", str(tiny_config), "--out", str(second), "--seed", "3", "--quiet"]) == 0
    out = capsys.readouterr().out
    assert "r_cirl: final mismatch" in out

    assert (first / "aggregate.csv").read_bytes() == (second / "aggregate.csv").read_bytes()
    assert (first / "runs" / "batch" / "run_3.csv").is_file()


def test_repeats_override(tiny_config, tmp_path):
    assert main(["run", str(tiny_config), "--out", str(tmp_path), "--repeats", "2"]) == 0
    assert sorted(path.name for path in (tmp_path / "runs" / "r_cirl").iterdir()) == [
        "run_0.csv",
        "run_1.csv",
    ]


def test_export_curriculum(tiny_config, tmp_path):
    assert main(["export-curriculum", str(tiny_config), "--out", str(tmp_path), "--quiet"]) == 0

    for name in ("r_cirl", "p_cirl"):
        with open(tmp_path / f"curriculum_{name}.csv", newline="") as handle:
            rows = list(csv.DictReader(handle))
        assert [int(row["rank"]) for row in rows] == [0, 1, 2, 3]
        assert sorted(int(row["demo_index"]) for row in rows) == [0, 1, 2, 3]
        scores = [float(row["score"]) for row in rows]
        assert scores == sorted(scores, reverse=True)
        assert all(row["label"].startswith("(") for row in rows)


def test_demo_pool(tiny_config, tmp_path):
    assert main(["demo-pool", str(tiny_config), "--out", str(tmp_path), "--quiet"]) == 0

    mdp, pool, extra = load_environment_document(tmp_path / "demo_pool.json")
    assert mdp.n_states == 9
    assert len(pool) == 4
    assert extra["name"] == "two_goals-3x3"
    assert len(extra["labels"]) == 9
    assert extra["absorbing"] == []


def test_version(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["--version"])
    assert excinfo.value.code == 0
    assert __version__ in capsys.readouterr().out


def test_cli_main(config_directory, capsys):
    assert cli_main is main
    assert cli_main(["validate", str(config_directory / "hanoi.toml"), "--quiet"]) == 0
    assert "ok" in capsys.readouterr().out
