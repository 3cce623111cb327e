import csv
import hashlib
import io
import os
from pathlib import Path

import pytest

from gausscorr import cli
from gausscorr.cli import ConfigError, HEADER, RECIPES, format_rows, load_config, main

GOLDEN = Path(__file__).parent / "golden"

SMALL = """
[system]
omega1 = 1
omega2 = 2

[bath]
temperatures = 0, 2
lambdas = 0.1

[initial]
r = 3
n1 = 3
n2 = 1

[grid]
t_min = 0
t_max = 10
n_points = 11
"""


def test_load_custom_config():
    cfg = load_config(SMALL)
    assert cfg.recipe == "custom"
    assert cfg.sweep.temperatures == (0.0, 2.0)
    assert cfg.sweep.grid.n_points == 11 and cfg.sweep.dps is None
    assert cfg.fmt == "csv" and cfg.precision == 12


def test_recipe_overlay():
    cfg = load_config("[grid]\nn_points = 5\n", "fig2")
    assert cfg.sweep.grid.n_points == 5
    assert cfg.sweep.grid.spacing == "log" and cfg.sweep.dps == 50
    assert cfg.sweep.temperatures == RECIPES["fig2"].temperatures


def test_recipe_named_in_config():
    assert load_config("[output]\nrecipe = fig1\n").sweep == RECIPES["fig1"]


@pytest.mark.parametrize("text,recipe", [
    (None, None),
    (SMALL, "fig9"),
    ("[system]\nomega1 = 1\n", None),
    (SMALL.replace("omega2 = 2", "omega2 = -2"), None),
    (SMALL.replace("lambdas = 0.1", "lambdas = 0"), None),
    (SMALL.replace("n_points = 11", "n_points = many"), None),
    (SMALL + "[output]\nformat = xml\n", None),
    (SMALL + "[output]\nprecision = 40\n", None),
    ("not an ini file", None),
])
def test_bad_configs(text, recipe):
    with pytest.raises(ConfigError):
        load_config(text, recipe)


def test_csv_round_trip():
    cfg = load_config(SMALL)
    from gausscorr import run_sweep
    res = run_sweep(cfg.sweep)
    text = format_rows(res)
    assert "\r" not in text
    rows = list(csv.reader(io.StringIO(text)))
    assert tuple(rows[0]) == HEADER
    assert len(rows) == 1 + len(res.rows)
    for line, row in zip(rows[1:], res.rows):
        assert float(line[0]) == row.t
        assert float(line[3]) == pytest.approx(row.report.log_negativity, rel=1e-11, abs=1e-300)
        assert line[8] in ("true", "false") and int(line[9]) in (0, 1, 2)


def test_tsv_and_precision():
    from gausscorr import run_sweep
    res = run_sweep(load_config(SMALL).sweep)
    text = format_rows(res, "tsv", 4)
    first = text.splitlines()[1].split("\t")
    assert len(first) == len(HEADER)
    assert first[3] == "6.586"


def test_main_writes_file(tmp_path, capsys):
    cfg = tmp_path / "run.ini"
    cfg.write_text(SMALL)
    out = tmp_path / "out.csv"
    assert main(["--config", str(cfg), "--out", str(out), "--summary"]) == 0
    assert out.read_text().startswith(",".join(HEADER))
    err = capsys.readouterr().err
    assert "death time lambda=0.1 T=0:" in err
    assert not [p for p in os.listdir(tmp_path) if p.startswith(".gausscorr-")]


def test_main_stdout(tmp_path, capsys):
    cfg = tmp_path / "run.ini"
    cfg.write_text(SMALL)
    assert main(["--config", str(cfg), "--format", "tsv"]) == 0
    assert capsys.readouterr().out.startswith("\t".join(HEADER))


def test_summary_for_separable_state(tmp_path, capsys):
    cfg = tmp_path / "run.ini"
    cfg.write_text(SMALL.replace("r = 3", "r = 0.1"))
    assert main(["--config", str(cfg), "--out", str(tmp_path / "o.csv"), "--summary"]) == 0
    assert "no sudden death: initially separable" in capsys.readouterr().err


def test_exit_codes(tmp_path, capsys):
    assert main(["--recipe", "nope"]) == 2
    assert main(["--config", str(tmp_path / "missing.ini")]) == 2
    assert main([]) == 2
    cfg = tmp_path / "run.ini"
    cfg.write_text(SMALL)
    assert main(["--config", str(cfg), "--out", str(tmp_path / "no" / "dir" / "x.csv")]) == 1
    assert "error" in capsys.readouterr().err


def test_failed_write_keeps_old_file(tmp_path, monkeypatch):
    out = tmp_path / "out.csv"
    out.write_text("previous\n")

    def boom(*args):
        raise OSError("disk full")

    monkeypatch.setattr(cli.os, "replace", boom)
    cfg = tmp_path / "run.ini"
    cfg.write_text(SMALL)
    assert main(["--config", str(cfg), "--out", str(out)]) == 1
    assert out.read_text() == "previous\n"
    assert not [p for p in os.listdir(tmp_path) if p.startswith(".gausscorr-")]


def test_threads_env_overrides(tmp_path, monkeypatch):
    seen = {}

    def fake_run(config, threads=1, summary=False):
        seen["threads"] = threads
        return 0

    monkeypatch.setattr(cli, "run", fake_run)
    monkeypatch.setenv(cli.THREADS_ENV, "3")
    assert main(["--recipe", "fig1", "--threads", "8"]) == 0
    assert seen["threads"] == 3
    monkeypatch.setenv(cli.THREADS_ENV, "zero")
    assert main(["--recipe", "fig1"]) == 2


def test_unphysical_rows_are_flagged(tmp_path, capsys, monkeypatch):
    from dataclasses import replace
    real_sweep = cli.run_sweep

    def tainted(spec, threads=1):
        res = real_sweep(spec, threads)
        res.rows[0] = replace(res.rows[0], report=replace(res.rows[0].report, physical=False))
        return res

    monkeypatch.setattr(cli, "run_sweep", tainted)
    out = tmp_path / "o.csv"
    assert cli.run(cli.RunConfig(load_config(SMALL).sweep, out=str(out))) == 0
    assert out.read_text().splitlines()[1].split(",")[8] == "false"
    assert "warning: 1 rows" in capsys.readouterr().err


def test_fig1_golden_file(tmp_path):
    out = tmp_path / "fig1.csv"
    assert main(["--recipe", "fig1", "--out", str(out)]) == 0
    expected = (GOLDEN / "fig1.csv.sha256").read_text().split()[0]
    assert hashlib.sha256(out.read_bytes()).hexdigest() == expected
    assert out.read_bytes() == (GOLDEN / "fig1.csv").read_bytes()


def test_fig4_csv_identity(tmp_path):
    cfg = tmp_path / "fig4.ini"
    cfg.write_text("[grid]\nn_points = 60\n")
    out = tmp_path / "fig4.csv"
    assert main(["--recipe", "fig4", "--config", str(cfg), "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 60 * 4
    for row in rows:
        mutual = float(row["mutual_info"])
        assert mutual == pytest.approx(float(row["classical"]) + float(row["discord"]), abs=1e-9)


def test_single_point_row_matches_library(tmp_path, capsys):
    from gausscorr import SqueezedThermalSpec, correlation_report, squeezed_thermal_covariance
    cfg = tmp_path / "one.ini"
    cfg.write_text(SMALL.replace("t_max = 10", "t_max = 0").replace("n_points = 11", "n_points = 1")
                   .replace("temperatures = 0, 2", "temperatures = 1"))
    assert main(["--config", str(cfg)]) == 0
    line = capsys.readouterr().out.splitlines()[1].split(",")
    rep = correlation_report(squeezed_thermal_covariance(SqueezedThermalSpec(3, 3, 1)), 0.0)
    assert float(line[3]) == float(format(rep.log_negativity, ".12g"))
    assert float(line[4]) == float(format(rep.discord, ".12g"))
