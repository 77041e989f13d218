import csv
import io
import subprocess
import sys

import pytest

from isospine import cli
from isospine.classgrp import class_number
from isospine.oracle import ConformanceReport


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def exit_code(capsys, *argv):
    with pytest.raises(SystemExit) as exc:
        cli.main(list(argv))
    capsys.readouterr()
    return exc.value.code


@pytest.mark.parametrize(
    "argv",
    [
        ["build", "--p", "4"],
        ["build", "--p", "3"],
        ["build", "--p", "29", "--ell", "5"],
        ["build", "--p", "29", "--field", "fq"],
        ["verify", "--ell", "7", "--max", "100"],
        ["verify", "--min", "100", "--max", "50"],
        ["verify", "--max", "50", "--jobs", "0"],
        ["survey", "centers", "--min", "90", "--max", "10"],
        ["survey", "radii", "--max", "50"],
        ["model", "--max", "50", "--sigma", "0"],
        ["model", "--max", "50", "--seed", "-1"],
        [],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    assert exit_code(capsys, *argv) == 2


def test_usage_error_names_the_argument(capsys):
    with pytest.raises(SystemExit):
        cli.main(["build", "--p", "4"])
    assert "--p" in capsys.readouterr().err


def test_build_text_and_dot(capsys):
    code, out, _ = run(capsys, "build", "--p", "29")
    assert code == 0 and "e 0 1 3" in out.splitlines()
    code, out, _ = run(capsys, "build", "--p", "29", "--field", "fp", "--format", "dot")
    assert code == 0 and out.startswith("graph")
    code, out, _ = run(capsys, "build", "--p", "241", "--field", "spine")
    assert code == 0 and sum(line.startswith("v ") for line in out.splitlines()) == class_number(-4 * 241) // 2


def test_build_writes_file(tmp_path, capsys):
    target = tmp_path / "g.txt"
    assert run(capsys, "build", "--p", "71", "--out", str(target))[0] == 0
    assert target.read_text().count("\nv ") == 7
    assert not (tmp_path / "g.txt.partial").exists()


def test_verify_reports_and_exit_code(capsys):
    code, out, _ = run(capsys, "verify", "--min", "60", "--max", "80")
    lines = out.splitlines()
    assert code == 0
    assert lines[-1] == "# 5 primes, 0 FAIL"
    assert any(line.startswith("p=71") and "INDETERMINATE-RESOLVED" in line for line in lines)


def test_verify_exits_1_on_failure(monkeypatch, capsys):
    def failing(p, ell, analysis=None):
        return ConformanceReport(p, ell, "FAIL", diff={"fold_count": {"predicted": 1, "computed": 2}})

    monkeypatch.setattr(cli, "verify", failing)
    code, out, _ = run(capsys, "verify", "--min", "17", "--max", "30", "--jobs", "1")
    assert code == 1
    assert "predicted 1 computed 2" in out
    assert out.splitlines()[-1] == "# 4 primes, 4 FAIL"


def read_csv(text):
    return list(csv.reader(io.StringIO(text)))


def test_survey_centers_schema_and_rows(capsys):
    code, out, _ = run(capsys, "survey", "centers", "--max", "60")
    rows = read_csv(out)
    assert code == 0
    assert rows[0] == cli.SURVEY_HEADER
    ps = [int(r[0]) for r in rows[1:]]
    assert ps == sorted(ps) and ps[0] == 5 and ps[-1] == 59
    row7 = rows[1 + ps.index(7)]
    assert row7[cli.SURVEY_HEADER.index("center_size")] == "1"
    assert row7[cli.SURVEY_HEADER.index("center_fp_count")] == "1"
    assert row7[cli.SURVEY_HEADER.index("verdict")] == ""
    row59 = rows[1 + ps.index(59)]
    assert row59[cli.SURVEY_HEADER.index("verdict")] == "PASS"


def test_survey_diameters_keeps_7_mod_8(capsys):
    code, out, _ = run(capsys, "survey", "diameters", "--max", "200")
    rows = read_csv(out)[1:]
    assert code == 0 and rows
    assert all(int(r[0]) % 8 == 7 for r in rows)
    col = cli.SURVEY_HEADER.index("mean_spine_component_diameter")
    assert all(r[col] for r in rows)


def test_survey_jobs_parity(tmp_path, capsys):
    one, two = tmp_path / "one.csv", tmp_path / "two.csv"
    run(capsys, "survey", "centers", "--max", "120", "--jobs", "1", "--out", str(one))
    run(capsys, "survey", "centers", "--max", "120", "--jobs", "2", "--out", str(two))
    assert one.read_bytes() == two.read_bytes()


def test_model_is_deterministic(tmp_path, capsys):
    a, b, c = (tmp_path / f"{x}.csv" for x in "abc")
    run(capsys, "model", "--max", "500", "--seed", "3", "--out", str(a))
    run(capsys, "model", "--max", "500", "--seed", "3", "--out", str(b))
    run(capsys, "model", "--max", "500", "--seed", "4", "--out", str(c))
    assert a.read_bytes() == b.read_bytes() != c.read_bytes()
    rows = read_csv(a.read_text())
    assert rows[0] == ["p", "sampled_center_size", "tree_margin_scaled"]
    for p, size, margin in rows[1:]:
        assert int(size) >= 1 and float(margin) >= 0


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "isospine.cli", "build", "--p", "4"], capture_output=True, text=True
    )
    assert proc.returncode == 2
