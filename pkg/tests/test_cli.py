import csv
import io
import json
import subprocess
import sys

import pytest

from loosetile.cli import EXIT_NONE, EXIT_OK, EXIT_USAGE, main, parse_n_range, parse_params
from loosetile.hypergraph import Hypergraph3


def run(capsys, *argv: str) -> tuple[int, str]:
    try:
        code = main(list(argv))
    except SystemExit as exc:
        code = exc.code
    return code, capsys.readouterr().out


@pytest.fixture(autouse=True)
def in_tmp(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)


def test_gen_barrier_and_sidecar(capsys, tmp_path):
    code, out = run(capsys, "gen", "space-barrier", "--n", "12")
    assert code == EXIT_OK
    assert json.loads(out)["m"] == 136
    H = Hypergraph3.load(tmp_path / "space-barrier-12.h3")
    assert H.m == 136 and H.min_codegree().value == 3
    side = json.loads((tmp_path / "space-barrier-12.json").read_text())
    assert side["designated_sets"]["X"] == [0, 1, 2]


def test_stats(capsys):
    run(capsys, "gen", "space-barrier", "--n", "12")
    code, out = run(capsys, "stats", "space-barrier-12.h3")
    data = json.loads(out)
    assert code == EXIT_OK and data["min_codegree"]["value"] == 3 and data["n"] == 12


def test_find_factor_none_exits_one(capsys):
    run(capsys, "gen", "space-barrier", "--n", "12")
    code, out = run(capsys, "find-factor", "space-barrier-12.h3")
    assert code == EXIT_NONE
    assert out.strip() == '{"exhaustive": true, "result": "none"}'


def test_find_factor_then_verify(capsys, tmp_path):
    run(capsys, "gen", "complete", "--n", "12", "--out", "k.h3")
    code, out = run(capsys, "find-factor", "k.h3")
    assert code == EXIT_OK
    (tmp_path / "t.json").write_text(out)
    code, out = run(capsys, "verify", "k.h3", "t.json", "--require-perfect")
    assert code == EXIT_OK and json.loads(out)["ok"] is True

    data = json.loads((tmp_path / "t.json").read_text())
    tiling = data.get("tiling", data)
    tiling["copies"] = tiling["copies"][:1]
    (tmp_path / "half.json").write_text(json.dumps(data))
    code, out = run(capsys, "verify", "k.h3", "half.json", "--require-perfect")
    assert code == EXIT_NONE and json.loads(out)["diagnostic"].startswith("uncovered vertex")


def test_experiment_csv(capsys):
    code, out = run(capsys, "experiment", "--family", "complete", "--n", "12..18", "--trials", "2", "--check", "factor")
    assert code == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == ["family", "n", "params", "trials", "successes", "mean_runtime_ms", "seed"]
    assert [r["n"] for r in rows] == ["12", "18"]
    assert all(r["successes"] == r["trials"] == "2" for r in rows)


def test_usage_errors(capsys):
    assert run(capsys, "bogus")[0] == EXIT_USAGE
    assert run(capsys, "stats", "missing.h3")[0] == EXIT_USAGE
    assert run(capsys, "gen", "space-barrier", "--n", "10")[0] == EXIT_USAGE


def test_range_and_param_parsing():
    assert parse_n_range("24..36") == [24, 30, 36]
    assert parse_n_range("12..20:4") == [12, 16, 20]
    assert parse_n_range("12,18") == [12, 18]
    assert parse_params(["p=0.3", "x_size=5"]) == {"p": 0.3, "x_size": 5}


def test_extremal_solve_is_deterministic(tmp_path):
    def solve() -> str:
        cmd = [sys.executable, "-m", "loosetile"]
        subprocess.run([*cmd, "gen", "covered-extremal", "--n", "24", "--out", "c.h3"], cwd=tmp_path, check=True, capture_output=True)
        return subprocess.run(
            [*cmd, "extremal-solve", "c.h3", "--eps", "0.01", "--seed", "3"], cwd=tmp_path, check=True, capture_output=True, text=True
        ).stdout

    first = solve()
    assert first == solve()
    data = json.loads(first)
    assert data["result"] == "some" and data["tiling"]["perfect"] is True


@pytest.mark.parametrize(
    "argv",
    [
        ("max-tiling", "k.h3"),
        ("lattice", "k.h3", "--arity", "3"),
        ("reach", "k.h3", "--x", "0", "--y", "1", "--cap", "20"),
        ("almost-match", "k.h3"),
    ],
)
def test_other_subcommands_emit_json(capsys, argv):
    run(capsys, "gen", "complete", "--n", "12", "--out", "k.h3")
    code, out = run(capsys, *argv)
    assert code == EXIT_OK
    json.loads(out)
