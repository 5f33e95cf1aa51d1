import json
import math
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from casimir_plates import cli

KEYS = {"command", "inputs", "outputs", "tolerances", "constants_version"}


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def usage(capsys, *argv):
    with pytest.raises(SystemExit) as info:
        cli.main(list(argv))
    capsys.readouterr()
    return info.value.code


def test_pressure_text(capsys):
    code, out, _ = run(capsys, "pressure", "--gap", "1e-6")
    assert code == 0
    assert "1.300126e-03 Pa" in out


def test_pressure_json(capsys):
    code, out, _ = run(capsys, "pressure", "--gap", "1e-6", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and set(doc) == KEYS
    assert doc["outputs"]["casimir_Pa"] == pytest.approx(1.3001e-3, rel=1e-4)
    assert doc["constants_version"] == "CODATA-2018"


def test_pressure_zero_temperature_gives_unit_ratio(capsys):
    code, out, _ = run(capsys, "--format", "json", "pressure", "--gap", "1e-6", "--temp", "0")
    doc = json.loads(out)
    assert doc["outputs"]["R"] == 1.0
    assert doc["outputs"]["lifshitz_Pa"] == doc["outputs"]["casimir_Pa"]


def test_pressure_finite_temperature(capsys):
    code, out, _ = run(capsys, "pressure", "--gap", "5e-6", "--temp", "100", "--format", "json")
    doc = json.loads(out)
    assert 0 < doc["outputs"]["R"] < 1
    from casimir_plates.lifshitz import ratio_from_SI

    assert doc["outputs"]["R"] == pytest.approx(ratio_from_SI(5e-6, 100.0), rel=1e-8)


@pytest.mark.parametrize(
    "argv",
    [
        ["pressure", "--gap", "-1"],
        ["pressure", "--gap", "0"],
        ["pressure", "--gap", "nan"],
        ["pressure", "--gap", "abc"],
        ["pressure"],
        ["pressure", "--gap", "1e-6", "--temp", "-3"],
        ["pressure", "--gap", "1e-6", "--format", "svg"],
        ["pressure", "--gap", "1e-6", "--rel-tol", "0"],
        ["green-check", "--samples", "0"],
        ["modes-check", "--samples", "-2"],
        ["green-check", "--format", "svg"],
        ["ratio-sweep", "--points", "1"],
        ["ratio-sweep", "--temp-min", "10", "--temp-max", "5"],
        ["ratio-sweep", "--scale", "log"],
        ["cutoff-scan", "--gap", "1e-6", "--lambdas", "-1e-9"],
        ["cutoff-scan"],
        ["frobnicate"],
        [],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    assert usage(capsys, *argv) == 2


def test_unwritable_output_exit_1(capsys, tmp_path):
    target = tmp_path / "missing" / "out.csv"
    code, _, err = run(capsys, "ratio-sweep", "--points", "3", "--out", str(target))
    assert code == 1 and "cannot write" in err


def test_convergence_failure_exit_1(capsys, monkeypatch):
    from casimir_plates.numerics import SeriesError, SeriesResult

    def boom(*args, **kwargs):
        raise SeriesError("forced", SeriesResult(math.nan, math.inf, 0))

    monkeypatch.setattr(cli.lf, "force_pspace", boom)
    code, _, err = run(capsys, "pressure", "--gap", "1e-6", "--temp", "300")
    assert code == 1 and "numerical failure" in err


def test_ratio_sweep_csv(capsys):
    code, out, _ = run(capsys, "ratio-sweep", "--format", "csv", "--gaps", "1e-6", "2e-6", "--points", "7")
    assert code == 0
    lines = out.split("\n")
    assert lines[0] == "# col: a_m, T_K, t, R"
    assert lines[1].startswith("# units:")
    assert "\r" not in out and out.endswith("\n")
    rows = [l.split(",") for l in lines[2:] if l]
    assert len(rows) == 14
    for gap in ("1e-06", "2e-06"):
        R = [float(r[3]) for r in rows if r[0] == gap]
        assert R[0] == 1.0
        assert all(0 < v <= 1 for v in R)
        assert all(b <= a for a, b in zip(R, R[1:]))
    # round-trip precision
    assert all(repr(float(r[2])) == r[2] for r in rows)


def test_ratio_sweep_trivial_first_row(capsys):
    code, out, _ = run(capsys, "ratio-sweep", "--format", "csv", "--points", "2",
                       "--temp-min", "0", "--temp-max", "0.001", "--gaps", "1e-6")
    first = out.split("\n")[2].split(",")
    assert code == 0 and float(first[3]) == 1.0


def test_ratio_sweep_horizontal_scaling(capsys):
    # (a, T) and (2a, T/2) grids give identical R columns
    _, out1, _ = run(capsys, "ratio-sweep", "--format", "json", "--gaps", "1e-6",
                     "--temp-min", "10", "--temp-max", "300", "--points", "9")
    _, out2, _ = run(capsys, "ratio-sweep", "--format", "json", "--gaps", "2e-6",
                     "--temp-min", "5", "--temp-max", "150", "--points", "9")
    r1 = [r["R"] for r in json.loads(out1)["outputs"]["rows"]]
    r2 = [r["R"] for r in json.loads(out2)["outputs"]["rows"]]
    assert r1 == pytest.approx(r2, rel=1e-10)


def test_ratio_sweep_log_scale(capsys):
    code, out, _ = run(capsys, "ratio-sweep", "--format", "json", "--scale", "log",
                       "--temp-min", "1", "--temp-max", "100", "--points", "3", "--gaps", "1e-6")
    temps = [r["T_K"] for r in json.loads(out)["outputs"]["rows"]]
    assert temps == pytest.approx([1.0, 10.0, 100.0])


def test_ratio_sweep_svg(capsys, tmp_path):
    path = tmp_path / "fig.svg"
    code, out, _ = run(capsys, "ratio-sweep", "--format", "svg", "--points", "11", "--out", str(path))
    assert code == 0 and out == ""
    root = ET.fromstring(path.read_text())
    assert root.tag.endswith("svg") and root.attrib["version"] == "1.1"
    polylines = [e for e in root.iter() if e.tag.endswith("polyline")]
    assert len(polylines) == len(cli.DEFAULT_GAPS)


def test_cutoff_scan(capsys):
    code, out, _ = run(capsys, "cutoff-scan", "--gap", "1e-6", "2e-6", "--format", "json",
                       "--lambda-ratios", "10", "1e-3", "1e-14")
    rows = json.loads(out)["outputs"]["rows"]
    assert code == 0 and len(rows) == 6
    by = {(r["a_m"], r["lambda_over_a"]): r for r in rows}
    r = by[(1e-6, 1e-3)]
    assert abs(r["residual_Pa"] / r["casimir_Pa"] - 1) <= 1e-4
    assert abs(by[(1e-6, 10.0)]["regulated_Pa"]) < 1e-12 * by[(1e-6, 10.0)]["casimir_Pa"]
    flagged = by[(1e-6, 1e-14)]
    assert flagged["flag"] == "below-guard" and flagged["regulated_Pa"] is None


def test_cutoff_scan_divergent_column_gap_independent(capsys):
    code, out, _ = run(capsys, "cutoff-scan", "--gap", "1e-6", "3e-6", "--format", "csv",
                       "--lambdas", "1e-9", "2e-9")
    rows = [l.split(",") for l in out.split("\n")[2:] if l]
    div = {}
    for r in rows:
        div.setdefault(r[1], set()).add(r[4])
    assert all(len(v) == 1 for v in div.values())


def test_cutoff_scan_svg(capsys):
    code, out, _ = run(capsys, "cutoff-scan", "--gap", "1e-6", "--format", "svg")
    assert code == 0 and out.startswith("<?xml")


def test_green_check_command(capsys):
    code, out, _ = run(capsys, "green-check", "--samples", "100", "--seed", "9")
    assert code == 0 and "all checks passed" in out


def test_check_reports_byte_identical(capsys):
    for cmd in ("green-check", "modes-check"):
        _, a, _ = run(capsys, cmd, "--samples", "60", "--seed", "11", "--format", "json")
        _, b, _ = run(capsys, cmd, "--samples", "60", "--seed", "11", "--format", "json")
        assert a == b
        assert set(json.loads(a)) == KEYS


def test_modes_check_failure_lists_offender(capsys):
    code, out, _ = run(capsys, "modes-check", "--samples", "20", "--inject-longitudinal")
    assert code == 1
    assert "FAIL" in out and "worst offender" in out


def test_failed_check_json_goes_to_stdout_and_summary_to_stderr(capsys):
    code, out, err = run(capsys, "modes-check", "--samples", "10", "--inject-longitudinal",
                         "--format", "json")
    assert code == 1
    assert json.loads(out)["outputs"]["passed"] is False
    assert "worst offender" in err


def test_global_flags_before_or_after_subcommand(capsys):
    _, a, _ = run(capsys, "--format", "csv", "pressure", "--gap", "1e-6")
    _, b, _ = run(capsys, "pressure", "--gap", "1e-6", "--format", "csv")
    assert a == b and a.startswith("# col:")


def test_json_schema_stable_across_commands(capsys):
    for argv in (["pressure", "--gap", "1e-6"],
                 ["ratio-sweep", "--points", "2"],
                 ["cutoff-scan", "--gap", "1e-6"],
                 ["green-check", "--samples", "3"],
                 ["modes-check", "--samples", "3"]):
        code, out, _ = run(capsys, *argv, "--format", "json")
        doc = json.loads(out)
        assert code == 0 and set(doc) == KEYS and doc["command"] == argv[0]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "casimir_plates", "pressure", "--gap", "1e-6"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "Pa" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "casimir_plates", "pressure", "--gap", "-1"],
                          capture_output=True, text=True)
    assert proc.returncode == 2 and "usage" in proc.stderr
