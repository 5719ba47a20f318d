"""End-to-end command-line behavior: config handling, manifests,
reproducibility, and exit codes."""

import json

import pytest

from dfsmem import cli
from dfsmem import fitting as ft
from dfsmem import gate_opt as go


STORAGE_INI = """\
[storage]
state = 0L
times_s = 0, 400, 800
repetitions = 120
seed = 11

[noise]
gamma_leak_per_s = 8.262354e-5
"""


@pytest.fixture
def storage_cfg(tmp_path):
    path = tmp_path / "storage.ini"
    path.write_text(STORAGE_INI)
    return path


def test_simulate_storage_writes_csv_and_manifest(storage_cfg, tmp_path):
    out = tmp_path / "run.csv"
    rc = cli.main(["simulate-storage", "--config", str(storage_cfg),
                   "--out", str(out)])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0].split(",") == ["T_seconds", "repetitions", "successes",
                                   "leak_discarded_successes", "leak_count"]
    assert len(lines) == 4
    manifest = json.loads((tmp_path / "run.csv.manifest.json").read_text())
    assert manifest["command"] == "simulate-storage"
    assert manifest["seed"] == 11
    assert manifest["outputs"] == [str(out)]
    for ref in manifest["outputs"]:
        assert (tmp_path / ref).exists() or out.exists()
    assert len(manifest["config_digest"]) == 64


def test_simulate_storage_rerun_byte_identical(storage_cfg, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert cli.main(["simulate-storage", "--config", str(storage_cfg),
                     "--out", str(a)]) == 0
    assert cli.main(["simulate-storage", "--config", str(storage_cfg),
                     "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_simulate_storage_set_override(storage_cfg, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    cli.main(["simulate-storage", "--config", str(storage_cfg),
              "--out", str(a)])
    cli.main(["simulate-storage", "--config", str(storage_cfg),
              "--out", str(b), "--set", "storage.seed=99"])
    assert a.read_bytes() != b.read_bytes()
    ma = json.loads((tmp_path / "a.csv.manifest.json").read_text())
    mb = json.loads((tmp_path / "b.csv.manifest.json").read_text())
    assert ma["config_digest"] != mb["config_digest"]
    assert mb["seed"] == 99


def test_simulate_storage_config_errors(storage_cfg, tmp_path, capsys):
    out = tmp_path / "x.csv"
    # unknown field
    rc = cli.main(["simulate-storage", "--config", str(storage_cfg),
                   "--out", str(out), "--set", "storage.bogus=1"])
    assert rc == 2
    assert "bogus" in capsys.readouterr().err
    # unknown section
    rc = cli.main(["simulate-storage", "--config", str(storage_cfg),
                   "--out", str(out), "--set", "laser.power=1"])
    assert rc == 2
    # bad value
    rc = cli.main(["simulate-storage", "--config", str(storage_cfg),
                   "--out", str(out), "--set", "noise.gamma_leak_per_s=-1"])
    assert rc == 2
    # malformed --set
    rc = cli.main(["simulate-storage", "--config", str(storage_cfg),
                   "--out", str(out), "--set", "seed=99"])
    assert rc == 2
    # missing file
    rc = cli.main(["simulate-storage", "--config", str(tmp_path / "nope.ini"),
                   "--out", str(out)])
    assert rc == 2
    assert not out.exists()


def test_missing_required_section(tmp_path):
    cfg = tmp_path / "c.ini"
    cfg.write_text("[storage]\nstate = 0L\ntimes_s = 0\nrepetitions = 5\n")
    rc = cli.main(["simulate-storage", "--config", str(cfg),
                   "--out", str(tmp_path / "o.csv")])
    assert rc == 2  # no [noise] section


def test_fit_lifetime_on_dataset_csv(tmp_path, capsys):
    data = ft.DecayDataset.from_counts([0.0, 300.0, 900.0, 2700.0],
                                       [200] * 4, [196, 165, 130, 105])
    src = tmp_path / "d.csv"
    ft.write_dataset_csv(src, data)
    report_path = tmp_path / "fit.txt"
    band_path = tmp_path / "band.csv"
    rc = cli.main(["fit-lifetime", str(src), "--bootstrap", "150",
                   "--seed", "4", "--out", str(report_path),
                   "--band", str(band_path)])
    assert rc == 0
    parsed = ft.parse_fit_report(capsys.readouterr().out)
    assert parsed["n_bootstrap"] == 150
    assert parsed["tau_lo"] < parsed["tau_hat"] < parsed["tau_hi"]
    assert ft.parse_fit_report(report_path.read_text()) == parsed
    band_lines = band_path.read_text().splitlines()
    assert band_lines[0] == "T_seconds,F_lo,F_hi"
    manifest = json.loads((tmp_path / "fit.txt.manifest.json").read_text())
    assert set(manifest["outputs"]) == {str(report_path), str(band_path)}


def test_fit_lifetime_deterministic(tmp_path):
    data = ft.DecayDataset.from_counts([0.0, 500.0, 1500.0], [100] * 3,
                                       [97, 80, 62])
    src = tmp_path / "d.csv"
    ft.write_dataset_csv(src, data)
    outs = []
    for name in ("r1.txt", "r2.txt"):
        path = tmp_path / name
        assert cli.main(["fit-lifetime", str(src), "--bootstrap", "120",
                         "--seed", "8", "--out", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_fit_lifetime_storage_csv_use_modes(storage_cfg, tmp_path, capsys):
    run_csv = tmp_path / "run.csv"
    cli.main(["simulate-storage", "--config", str(storage_cfg),
              "--out", str(run_csv)])
    capsys.readouterr()
    rc = cli.main(["fit-lifetime", str(run_csv)])
    assert rc == 0
    raw = ft.parse_fit_report(capsys.readouterr().out)
    rc = cli.main(["fit-lifetime", str(run_csv), "--use", "discarded"])
    assert rc == 0
    disc = ft.parse_fit_report(capsys.readouterr().out)
    # post-selection removes the leakage decay channel
    assert disc["tau_hat"] > raw["tau_hat"]


def test_fit_lifetime_schema_and_flag_errors(tmp_path, capsys):
    empty = tmp_path / "empty.csv"
    empty.write_text("T_seconds,repetitions,successes\n")
    assert cli.main(["fit-lifetime", str(empty)]) == 2
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n1,2\n")
    assert cli.main(["fit-lifetime", str(bad)]) == 2
    data = tmp_path / "d.csv"
    data.write_text("T_seconds,repetitions,successes\n0,100,50\n"
                    "10,100,50\n20,100,50\n")
    # --use is only for storage CSVs
    assert cli.main(["fit-lifetime", str(data), "--use", "raw"]) == 2
    capsys.readouterr()
    # constant-F data is unidentifiable: report still written, exit 3
    report = tmp_path / "flat.txt"
    rc = cli.main(["fit-lifetime", str(data), "--out", str(report)])
    assert rc == 3
    assert ft.parse_fit_report(report.read_text())["flat"] == 1


def test_calibrate_gradient_report(capsys, tmp_path):
    out = tmp_path / "cal.txt"
    rc = cli.main(["calibrate-gradient", "--period-s", "2.64",
                   "--out", str(out)])
    assert rc == 0
    text = capsys.readouterr().out
    vals = dict(ln.split(None, 1) for ln in text.splitlines())
    assert float(vals["delta_b_gauss"]) == pytest.approx(2.70e-7, rel=0.01)
    assert float(vals["clock_delta_f_hz"]) == pytest.approx(1.0e-3, rel=0.05)
    assert out.read_text() == text
    assert (tmp_path / "cal.txt.manifest.json").exists()
    assert cli.main(["calibrate-gradient", "--period-s", "-2.0"]) == 2


def test_calibrate_gradient_linearity(capsys):
    def delta_b(period):
        assert cli.main(["calibrate-gradient", "--period-s", str(period)]) == 0
        txt = capsys.readouterr().out
        return float(dict(ln.split(None, 1)
                          for ln in txt.splitlines())["delta_b_gauss"])
    assert delta_b(5.28) == pytest.approx(delta_b(2.64) / 2, rel=1e-12)


def test_optimize_gate_evaluate_paths(tmp_path, capsys):
    phases = [str(p) for p in go.REFERENCE_PHASES_PI]
    rc = cli.main(["optimize-gate", "--phases-pi"] + phases)
    assert rc == 0
    vals = dict(ln.split(None, 1)
                for ln in capsys.readouterr().out.splitlines())
    want = go.closure_residual(go.reference_sequence(), go.DriveProfile(),
                               go.default_modes())
    assert float(vals["residual_total"]) == pytest.approx(want, rel=1e-12)
    assert vals["antisymmetric"] == "1"

    seq_file = tmp_path / "seq.txt"
    go.reference_sequence().save(seq_file)
    rc = cli.main(["optimize-gate", "--evaluate", str(seq_file)])
    assert rc == 0
    vals2 = dict(ln.split(None, 1)
                 for ln in capsys.readouterr().out.splitlines())
    assert vals2["residual_total"] == vals["residual_total"]
    # mutually exclusive score inputs
    rc = cli.main(["optimize-gate", "--evaluate", str(seq_file),
                   "--phases-pi", "0.1"])
    assert rc == 2


def test_optimize_gate_optimize_path(tmp_path, capsys):
    out = tmp_path / "opt_seq.txt"
    rc = cli.main(["optimize-gate", "--mode-freqs-mhz", "1.381",
                   "--segments", "2", "--restarts", "2",
                   "--out", str(out)])
    assert rc == 0
    vals = dict(ln.split(None, 1)
                for ln in capsys.readouterr().out.splitlines())
    assert float(vals["residual_total"]) < 1e-10
    assert vals["converged"] == "1"
    seq = go.PhaseSequence.load(out)
    assert seq.n_segments == 2 and seq.is_antisymmetric()
    manifest = json.loads((tmp_path / "opt_seq.txt.manifest.json").read_text())
    assert manifest["command"] == "optimize-gate"


def test_optimize_gate_nonattainment(tmp_path, capsys):
    out = tmp_path / "seq.txt"
    rc = cli.main(["optimize-gate", "--mode-freqs-mhz", "1.381",
                   "--segments", "2", "--restarts", "1",
                   "--target-residual", "1e-40", "--out", str(out)])
    assert rc == 3
    assert out.exists()  # best sequence still written
    vals = dict(ln.split(None, 1)
                for ln in capsys.readouterr().out.splitlines())
    assert vals["converged"] == "0"


def test_interpret_detections(tmp_path, capsys):
    pat = tmp_path / "p.txt"
    pat.write_text("DBDD\nBDDD\nDDBD\nDDDB\nDDDD\n# note\n\nDBBD\nDBDD\n")
    out = tmp_path / "counts.csv"
    rc = cli.main(["interpret-detections", str(pat), "--out", str(out)])
    assert rc == 0
    text = capsys.readouterr().out
    vals = dict(ln.split() for ln in text.splitlines())
    assert vals["ZeroF"] == "2"
    assert vals["OneF"] == "1"
    assert vals["ZeemanLeak"] == "2"
    assert vals["LeakToSOrHop"] == "1"
    assert vals["Discard"] == "1"
    assert vals["total"] == "7"
    rows = out.read_text().splitlines()
    assert rows[0] == "outcome,count"
    assert "ZeroF,2" in rows

    bad = tmp_path / "bad.txt"
    bad.write_text("DBDD\nDBXD\n")
    rc = cli.main(["interpret-detections", str(bad)])
    assert rc == 2


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["--version"])
    assert exc.value.code == 0
    assert "dfsmem" in capsys.readouterr().out
