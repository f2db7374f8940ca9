import csv

import numpy as np
import pytest

from altlms.cli import (EXIT_CONFIG, EXIT_IO, EXIT_UNSTABLE, EXIT_USAGE, emit_csv,
                        emit_sweep_csv, main, to_db)
from altlms.config import format_config, parse_config
from altlms.exceptions import ConfigError
from altlms.harness import LearningCurve, SweepPoint, preset_fig2, preset_fig3

BASE = """
m = 16
k_initial = 2
iterations = 50
trials = 3
snr_db = 40   # comment
[algorithm]
kind = sa-alt-lms
penalty = l0
beta = 10
mu = 0.015
eta = 0.012
tau = 0.02
lam = 0.02
"""


def test_parse_basic():
    s = parse_config(BASE)
    assert s.snr_db == 40 and s.m == 16
    assert s.roster[0].penalty.beta == 10 and s.roster[0].label == "SA-ALT-LMS (l0)"


def test_preset_alias():
    assert parse_config("preset = fig2") == preset_fig2()
    assert parse_config("preset = fig3\ntrials = 7").trials == 7


@pytest.mark.parametrize("text,line,key", [
    (BASE.replace("k_initial = 2", "k_initial = 20"), 3, "k_initial"),
    (BASE + "colour = red\n", 15, "colour"),
    (BASE.replace("m = 16", "m = sixteen"), 2, "m"),
    (BASE + "mu = 0.1\n", 15, "mu"),
    (BASE.replace("beta = 10", "beta = -1"), 10, "beta"),
    ("[roster]\n", 1, None),
    ("m 16\n", 1, None),
])
def test_parse_errors_name_line_and_key(text, line, key):
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    assert info.value.line == line and info.value.key == key
    assert f"line {line}" in str(info.value)


def test_k_error_mentions_invariant():
    with pytest.raises(ConfigError, match="k <= m"):
        parse_config(BASE.replace("k_initial = 2", "k_initial = 20"))


@pytest.mark.parametrize("scenario", [preset_fig2(), preset_fig3(0.0123), parse_config(BASE)])
def test_format_round_trip(scenario):
    assert parse_config(format_config(scenario)) == scenario


def test_db_floor():
    assert to_db(0.0) == -120.0
    assert to_db(np.inf) == np.inf
    assert to_db(1e-3) == pytest.approx(-30.0)


def test_curve_csv_shape(tmp_path):
    curves = [LearningCurve(f"a{i}", np.full(1000, 0.1 * (i + 1)), 0, 1) for i in range(3)]
    emit_csv(curves, tmp_path / "c.csv")
    rows = list(csv.reader(open(tmp_path / "c.csv")))
    assert len(rows) == 1001 and all(len(r) == 4 for r in rows)
    assert rows[0] == ["iteration", "a0", "a1", "a2"]
    assert rows[1] == ["0", "-10.000000", "-6.989700", "-5.228787"]


def test_sweep_csv_flags(tmp_path):
    pts = [SweepPoint(0.01, {"A": 1e-3}, {"A": False}, {"A": 2e-3}, {"A": False}),
           SweepPoint(3.0, {"A": None}, {"A": True}, {"A": None}, {"A": True})]
    emit_sweep_csv(pts, ["A"], tmp_path / "s.csv")
    rows = list(csv.reader(open(tmp_path / "s.csv")))
    assert rows[0] == ["step_size", "A_simulated_mse_db", "A_analytical_mse_db", "stability_flag"]
    assert rows[1][-1] == "stable" and rows[2][-1] == "diverged;unstable"
    assert rows[2][1:3] == ["", ""]


def test_simulate_is_deterministic_across_workers(tmp_path):
    outs = []
    for workers in (1, 4):
        out = tmp_path / f"w{workers}.csv"
        assert main(["simulate", "--preset", "fig2", "--seed", "42", "--trials", "6",
                     "--iterations", "1100", "--workers", str(workers), "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    meta = (tmp_path / "w1.csv.meta").read_text()
    assert parse_config(meta) == preset_fig2().replace(base_seed=42, trials=6, iterations=1100)
    assert "M_w^n := K_w^n" in meta and "toolkit_version" in meta


def test_sweep_and_analyze_commands(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["sweep", "--preset", "fig3", "--trials", "2", "--iterations", "100",
                 "--grid", "0.01:0.02:2", "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 3
    out = tmp_path / "a.csv"
    assert main(["analyze", "--preset", "fig3", "--trials", "2", "--iterations", "50",
                 "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 51


@pytest.mark.parametrize("argv,text", [
    (["cost", "LMS", "16"], "adds=32 mults=32 divs=0"),
    (["cost", "SA-ALT-LMS", "l1", "16"], "adds=144 mults=240 divs=64"),
    (["cost", "SA-LMS", "l1", "1"], "adds=6 mults=10 divs=4"),
])
def test_cost_command(argv, text, capsys):
    assert main(argv) == 0
    assert capsys.readouterr().out.strip() == text


@pytest.mark.parametrize("argv", [["cost", "RLS", "4"], ["cost", "SA-LMS", "l7", "4"],
                                  ["cost", "SA-LMS", "4"], ["simulate"], []])
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == EXIT_USAGE


def test_exit_codes(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("m = 16\nbogus = 1\n")
    assert main(["simulate", "--config", str(bad), "--out", str(tmp_path / "x.csv")]) == EXIT_CONFIG
    unstable = tmp_path / "u.cfg"
    unstable.write_text(BASE.replace("mu = 0.015", "mu = 3.0"))
    assert main(["analyze", "--config", str(unstable), "--out", str(tmp_path / "u.csv")]) == EXIT_UNSTABLE
    assert main(["analyze", "--config", str(tmp_path / "missing.cfg"),
                 "--out", str(tmp_path / "m.csv")]) == EXIT_IO
    assert main(["analyze", "--preset", "fig3", "--trials", "1", "--iterations", "5",
                 "--out", str(tmp_path / "no" / "dir.csv")]) == EXIT_IO
