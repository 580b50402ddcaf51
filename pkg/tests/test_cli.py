"""CLI harness: subcommands, formats, exit codes."""

import json

import pytest

from cakegame.cli import main
from cakegame.valuations import load_density


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_stackelberg_subcommand(capsys, tmp_path):
    dens = tmp_path / "bench.density"
    code, _, _ = run_cli(capsys, "adversary", "--family", "center-heavy",
                         "--out", str(dens))
    assert code == 0
    code, out, _ = run_cli(capsys, "stackelberg", "--k", "2", "--va", "uniform",
                           "--vb", str(dens))
    assert code == 0
    doc = json.loads(out)
    assert doc["value"] == pytest.approx(0.625, abs=1e-9)


def test_adversary_round_trips(capsys, tmp_path):
    dens = tmp_path / "spiked.density"
    code, _, _ = run_cli(capsys, "adversary", "--family", "spiked", "--k", "2",
                         "--w", "0.02", "--z", "0.87", "--out", str(dens))
    assert code == 0
    d = load_density(dens)
    assert d.total_mass == pytest.approx(1.0, abs=1e-12)


def test_simulate_json(capsys, tmp_path):
    dens = tmp_path / "bench.density"
    run_cli(capsys, "adversary", "--family", "center-heavy", "--out", str(dens))
    code, out, _ = run_cli(capsys, "simulate", "--alice", "2cut-myopic",
                           "--bob", "myopic", "--vb", str(dens), "--T", "2000")
    assert code == 0
    doc = json.loads(out)
    assert "regret_alice" in doc and doc["regret_alice"] > 0


def test_simulate_csv_history(capsys, tmp_path):
    hist = tmp_path / "h.csv"
    code, out, _ = run_cli(capsys, "simulate", "--alice", "fixed", "--cuts",
                           "0.5,1.0", "--T", "5", "--out", str(hist),
                           "--format", "csv")
    assert code == 0
    lines = hist.read_text().splitlines()
    assert lines[0] == "round,cut1,cut2,choice,uA,uB"
    assert len(lines) == 6


def test_missing_density_exits_2(capsys):
    code, _, err = run_cli(capsys, "simulate", "--alice", "2cut-myopic",
                           "--vb", "/no/such/file.density", "--T", "10")
    assert code == 2
    assert "/no/such/file.density" in err


def test_contract_violation_exits_3(capsys):
    # pretend responder with an out-of-range spike width
    code, _, err = run_cli(capsys, "simulate", "--alice", "2cut-myopic",
                           "--bob", "pretend", "--bob-w", "0.5", "--T", "10")
    assert code == 3


def test_budget_exceeded_exits_4(capsys, tmp_path):
    dens = tmp_path / "bench.density"
    run_cli(capsys, "adversary", "--family", "center-heavy", "--out", str(dens))
    code, _, err = run_cli(capsys, "stackelberg", "--vb", str(dens), "--k", "8",
                           "--method", "bruteforce", "--h", "0.0001")
    assert code == 4


def test_sweep_with_fit(capsys, tmp_path):
    out = tmp_path / "sweep.csv"
    code, _, err = run_cli(capsys, "sweep", "--alice", "2cut-myopic",
                           "--bob", "myopic", "--vb", "random",
                           "--T-list", "1000,3000,10000", "--seeds", "2",
                           "--out", str(out))
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "T,seed,regret_alice,regret_bob"
    assert len([l for l in lines if l.startswith("fit,")]) == 1
    assert "fitted_exponent" in err


def test_sweep_too_few_points_no_fit(capsys, tmp_path):
    out = tmp_path / "sweep.csv"
    code, _, _ = run_cli(capsys, "sweep", "--alice", "2cut-myopic",
                         "--bob", "myopic", "--vb", "random",
                         "--T-list", "1000,2000", "--seeds", "1",
                         "--out", str(out))
    assert code == 0
    lines = out.read_text().splitlines()
    assert not any(l.startswith("fit,") for l in lines)
    assert len(lines) == 3


def test_rw_subcommand(capsys):
    code, out, _ = run_cli(capsys, "rw", "--k", "2", "--eps", "0.01",
                           "--fixture-seed", "7")
    assert code == 0
    doc = json.loads(out)
    assert doc["query_total"] <= 400
    assert "fixture_hidden_z" in doc


def test_config_file_defaults(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("T=7\ncuts=0.5,1.0\nalice=fixed\n")
    code, out, _ = run_cli(capsys, "simulate", "--config", str(cfg))
    assert code == 0
    assert json.loads(out)["T"] == 7


def test_config_flags_win(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("T=7\ncuts=0.5,1.0\nalice=fixed\n")
    code, out, _ = run_cli(capsys, "simulate", "--config", str(cfg), "--T", "9")
    assert code == 0
    assert json.loads(out)["T"] == 9


def test_determinism_same_seed(capsys):
    outs = []
    for _ in range(2):
        code, out, _ = run_cli(capsys, "simulate", "--alice", "2cut-myopic",
                               "--vb", "random", "--seed", "3", "--T", "500")
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]


def test_sweep_parallel_matches_serial(capsys, tmp_path):
    out1 = tmp_path / "serial.csv"
    out2 = tmp_path / "parallel.csv"
    args = ["sweep", "--alice", "2cut-myopic", "--bob", "myopic",
            "--vb", "random", "--T-list", "500,1000,2000", "--seeds", "2"]
    code1, _, _ = run_cli(capsys, *args, "--out", str(out1))
    code2, _, _ = run_cli(capsys, *args, "--jobs", "2", "--out", str(out2))
    assert code1 == 0 and code2 == 0
    assert out1.read_text() == out2.read_text()
