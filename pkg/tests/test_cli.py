from __future__ import annotations

import csv

import pytest

from pdarray.cli import main, read_config


def test_sweep_to_file(tmp_path, capsys):
    out = tmp_path / "fixed.csv"
    assert main(["sweep", "--sweep", "beta-fixed", "--G-max", "3", "--rho", "0.1,2", "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 2 * 3 * 4
    assert {r["normalization"] for r in rows} == {"array-sum"}


def test_sweep_to_stdout(capsys, monkeypatch):
    monkeypatch.delenv("PDARRAY_OUTPUT_DIR", raising=False)
    assert main(["sweep", "--sweep", "betamin", "--xi", "1", "--snr-db", "20"]) == 0
    assert capsys.readouterr().out.startswith("M,xi,gamma_star_db")


def test_env_output_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("PDARRAY_OUTPUT_DIR", str(tmp_path / "outdir"))
    assert main(["sweep", "--sweep", "beta-scaled", "--G-max", "2"]) == 0
    assert (tmp_path / "outdir" / "beta-scaled.csv").exists()
    assert main(["layout", "--G", "1", "--rho", "0.5"]) == 0
    assert (tmp_path / "outdir" / "layout_G1.csv").exists()


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    out = tmp_path / "cfg.csv"
    cfg.write_text(f"# scaled sweep\nsweep = beta-scaled\nG_max = 2\nrho0 = 3\nbeams = gaussian\nout = {out}\n")
    assert read_config(cfg)["rho0"] == 3.0
    assert main(["sweep", "--config", str(cfg), "--rho0", "2"]) == 0
    rows = list(csv.DictReader(out.open()))
    assert {r["rho0"] for r in rows} == {"2.0"}
    assert {r["beam"] for r in rows} == {"gaussian"}


@pytest.mark.parametrize(
    "argv",
    [
        ["sweep"],
        ["sweep", "--sweep", "nine"],
        ["sweep", "--sweep", "beta-fixed", "--rho", "x"],
        ["sweep", "--sweep", "beta-fixed", "--rho", "-1"],
        ["sweep", "--sweep", "beta-fixed", "--beams", "bessel"],
        ["verify", "--skip", "nope"],
        ["frobnicate"],
    ],
)
def test_usage_errors_exit_1(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == 1


def test_bad_config_lines(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("sweep = betamin\nwhat = 3\n")
    assert main(["sweep", "--config", str(cfg)]) == 1
    cfg.write_text("sweep betamin\n")
    assert main(["sweep", "--config", str(cfg)]) == 1
    assert main(["sweep", "--config", str(tmp_path / "missing.cfg")]) == 1


def test_plot_roundtrip_and_parse_error(tmp_path):
    csv_path = tmp_path / "b.csv"
    assert main(["sweep", "--sweep", "betamin", "--out", str(csv_path)]) == 0
    assert main(["plot", str(csv_path), str(tmp_path / "b.svg")]) == 0
    assert (tmp_path / "b.svg").read_text().startswith("<svg")
    empty = tmp_path / "e.csv"
    empty.write_text("")
    assert main(["plot", str(empty)]) == 1
    assert not (tmp_path / "e.svg").exists()


def test_profile_dump(tmp_path):
    out = tmp_path / "p.csv"
    assert main(["profile", "--G", "2", "--rho", "0.5", "--beam", "lg10", "--out", str(out)]) == 0
    assert len(list(csv.DictReader(out.open()))) == 19


def test_verify_exit_codes(tmp_path, capsys):
    report = tmp_path / "r.csv"
    assert main(["verify", "--skip", "asymptotic-slopes", "--skip", "capture", "--report", str(report)]) == 0
    assert "checks passed" in capsys.readouterr().out
    assert report.read_text().startswith("group,name,status")
    assert main(["verify", "--profile", "strict", "--skip", "capture", "--skip", "asymptotic-slopes"]) == 2
