import math
import subprocess
import sys

import pytest

from cathub.cli import main
from cathub.probabilities import demux_ratio
from cathub.hub import Outcome


def _rows(path):
    lines = path.read_text(encoding="utf-8").splitlines()
    header = lines[0].split(",")
    return header, [line.split(",") for line in lines[1:]]


def test_fidelity_sweep_row(tmp_path):
    out = tmp_path / "fid.csv"
    code = main(
        ["fidelity-sweep", "--N", "90", "--beta", "5", "--out", str(out)]
    )
    assert code == 0
    header, rows = _rows(out)
    assert header == ["parity", "N", "beta", "y_star", "fidelity", "evaluations"]
    assert len(rows) == 1
    assert rows[0][0] == "even"
    assert float(rows[0][4]) > 0.99


def test_fidelity_sweep_rejects_parity_mismatch(tmp_path):
    code = main(
        ["fidelity-sweep", "--N", "91", "--out", str(tmp_path / "x.csv")]
    )
    assert code == 1


def test_domain_error_exit_code(tmp_path):
    # odd target with zero amplitude has no valid cat target
    code = main(
        [
            "fidelity-sweep",
            "--parity",
            "odd",
            "--N",
            "1",
            "--beta",
            "0",
            "--out",
            str(tmp_path / "x.csv"),
        ]
    )
    assert code == 2


def test_unknown_subcommand_is_usage_error(capsys):
    assert main(["not-a-command"]) == 1
    assert "usage error" in capsys.readouterr().err


def test_missing_subcommand_is_usage_error(capsys):
    assert main([]) == 1


def test_byte_determinism(tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    args = ["meanphoton-sweep", "--N", "10,20", "--beta", "1:3:0.5"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_workers_do_not_change_output(tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    args = ["fidelity-sweep", "--N", "10", "--beta", "1:2:0.5"]
    assert main(args + ["--out", str(a), "--workers", "1"]) == 0
    assert main(args + ["--out", str(b), "--workers", "3"]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_prob_sweep_demux_cross_check(tmp_path):
    out = tmp_path / "p.csv"
    code = main(
        [
            "prob-sweep",
            "--t",
            "0.8",
            "--beta",
            "3",
            "--counts",
            "10,10;0,20",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    header, rows = _rows(out)
    assert header == ["t", "beta", "n1", "n2", "y2", "s_backsolved", "probability"]
    split = float(rows[0][6])
    lumped = float(rows[1][6])
    want = demux_ratio(Outcome((10, 10)), 0.8).to_float()
    assert split / lumped == pytest.approx(want, rel=1e-10)


def test_prob_sweep_flags_infeasible_rows(tmp_path):
    out = tmp_path / "p.csv"
    # such a dark tap cannot reach the required herald point
    code = main(
        [
            "prob-sweep",
            "--t",
            "0.7",
            "--beta",
            "3",
            "--counts",
            "10,10",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    _, rows = _rows(out)
    assert rows[0][5] == "nan"
    assert rows[0][6] == "nan"
    assert float(rows[0][4]) > 0.0  # the herald point itself is still reported


def test_prob_sweep_single_tap_rows(tmp_path):
    out = tmp_path / "p.csv"
    code = main(
        ["prob-sweep", "--t", "0.9", "--beta", "2.5", "--counts", "10", "--out", str(out)]
    )
    assert code == 0
    _, rows = _rows(out)
    assert rows[0][2] == "10"
    assert rows[0][3] == ""  # no second tap
    assert float(rows[0][6]) > 0.0


def test_meanphoton_sweep_columns(tmp_path):
    out = tmp_path / "m.csv"
    code = main(
        ["meanphoton-sweep", "--N", "90", "--beta", "6", "--out", str(out)]
    )
    assert code == 0
    header, rows = _rows(out)
    assert header == ["parity", "N", "beta", "y_star", "mean_n", "beta_sq"]
    assert float(rows[0][5]) == pytest.approx(36.0)
    assert 35.0 < float(rows[0][4]) < 36.5


def test_detector_report_lossless_limit(tmp_path, capsys):
    out = tmp_path / "d.csv"
    code = main(
        ["detector-report", "--eta", "1.0", "--k", "1", "--t", "0.9", "--N", "20",
         "--beta", "3", "--out", str(out)]
    )
    assert code == 0
    header, rows = _rows(out)
    assert header[:5] == ["k", "t", "eta", "mean_n", "reduction_factor"]
    assert float(rows[0][5]) == pytest.approx(1.0)  # first-order multiplier
    assert float(rows[0][6]) == pytest.approx(1.0, abs=1e-9)  # exact multiplier
    assert float(rows[0][7]) == 0.0  # penalty


def test_detector_report_reference_row(tmp_path):
    out = tmp_path / "d.csv"
    code = main(
        ["detector-report", "--k", "1", "--t", "0.9", "--N", "20", "--beta", "3",
         "--out", str(out)]
    )
    assert code == 0
    _, rows = _rows(out)
    assert float(rows[0][4]) == pytest.approx(8.21, rel=5e-3)
    assert float(rows[0][5]) == pytest.approx(0.8358, abs=1e-3)


def test_config_file_defaults_and_override(tmp_path):
    cfg = tmp_path / "sweep.cfg"
    cfg.write_text("N = 20\nbeta = 3 # with a comment\n", encoding="utf-8")
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    c = tmp_path / "c.csv"
    assert main(["fidelity-sweep", "--config", str(cfg), "--out", str(a)]) == 0
    assert main(["fidelity-sweep", "--N", "20", "--beta", "3", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    # explicit flag wins over the file value
    assert main(
        ["fidelity-sweep", "--config", str(cfg), "--beta", "2", "--out", str(c)]
    ) == 0
    _, rows = _rows(c)
    assert float(rows[0][2]) == 2.0


def test_config_file_must_be_key_value(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("just some words\n", encoding="utf-8")
    assert main(["fidelity-sweep", "--config", str(bad)]) == 1


def test_oracle_check_minimal_pass(capsys):
    code = main(["oracle-check", "--k", "1", "--N", "2", "--t", "0.9", "--s", "0.8"])
    assert code == 0
    assert "PASS" in capsys.readouterr().out


def test_oracle_check_impossible_tolerance(capsys):
    code = main(
        ["oracle-check", "--k", "1", "--N", "2", "--t", "0.9", "--s", "0.8",
         "--tolerance", "1e-15"]
    )
    assert code == 3
    assert "FAIL" in capsys.readouterr().out


def test_console_entry_point_help():
    proc = subprocess.run(
        [sys.executable, "-m", "cathub.cli", "--help"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "fidelity-sweep" in proc.stdout
