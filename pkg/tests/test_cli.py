import csv
import io
import json
import shutil
import subprocess
import sys

import pytest

from eqlab.cli import EXIT_CONSTRUCT, EXIT_FORMAT, EXIT_OK, EXIT_UNSOUND, main

from reference_tables import ELLIPTIC_POINTS


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def _checks(report):
    return {e["check"]: e for e in report["ledger"]}


def test_scan_csv(capsys):
    code, out, _ = run(capsys, "scan", "--m-max", "10")
    assert code == EXIT_OK
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["d", "k", "lambda", "s1", "s2", "omega", "rho", "a", "verdict"]
    assert len(rows) == 26


def test_scan_m1(capsys):
    code, out, _ = run(capsys, "scan", "--m-max", "1")
    assert code == EXIT_OK
    assert [r[0] for r in csv.reader(io.StringIO(out))][1:] == ["6", "7"]


def test_scan_json(capsys):
    code, out, _ = run(capsys, "scan", "--m-max", "3", "--format", "json")
    assert code == EXIT_OK
    assert {r["d"] for r in json.loads(out)} >= {6, 7, 23, 43}


def test_scan_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["scan", "--m-max", "0"])
    assert exc.value.code == 2


def test_families(capsys):
    code, out, _ = run(capsys, "families", "--i-max", "10")
    assert code == EXIT_OK
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0][:3] == ["family", "i", "d"]
    assert len(rows) == 31
    no = [(r[0], r[1]) for r in rows[1:] if r[-1] == "No"]
    assert no == [("1", "4"), ("2", "2"), ("2", "6"), ("2", "10")]


@pytest.mark.parametrize(
    "argv,n,rank",
    [
        (["--design", "pairs-6", "--augment-all-ones"], 16, 6),
        (["--design", "pairs-8"], 28, 7),
        (["--design", "qs-6-3-2", "--augment"], 16, 6),
        (["--design", "sts15", "--augment-all-ones"], 36, 15),
        (["--design", "icosahedron"], 6, 3),
        (["--design", "hexagon"], 3, 2),
    ],
)
def test_construct(capsys, argv, n, rank):
    code, out, err = run(capsys, "construct", *argv)
    assert code == EXIT_OK
    doc = json.loads(out)
    assert len(doc["vectors"]) == n
    assert f"rank {rank}" in err


def test_construct_negative_delta1(capsys, tmp_path):
    path = tmp_path / "neg.txt"
    path.write_text("7 3\n0 1 2\n0 1 3\n0 3 4\n")
    code, _, err = run(capsys, "construct", "--blocks", str(path))
    assert code == EXIT_CONSTRUCT
    assert "NegativeDelta1" in err


def test_construct_unknown_design(capsys):
    code, _, _ = run(capsys, "construct", "--design", "bogus")
    assert code == EXIT_UNSOUND


def _construct(capsys, tmp_path, name, *argv):
    path = tmp_path / f"{name}.json"
    assert run(capsys, "construct", *argv, "-o", str(path))[0] == EXIT_OK
    return path


def test_certify_276(capsys, tmp_path):
    path = _construct(capsys, tmp_path, "g", "--design", "golay-s4723", "--augment")
    code, out, _ = run(capsys, "certify", str(path))
    assert code == EXIT_OK
    rep = json.loads(out)
    checks = _checks(rep)
    assert rep["ok"]
    assert checks["incoherent_search"]["inc"] == 23
    assert checks["incoherent_design"]["status"] == "pass"
    assert checks["spherical_5_design"]["status"] == "pass"
    assert checks["bounds"]["absolute_saturated"] and checks["bounds"]["relative_saturated"]


def test_certify_16(capsys, tmp_path):
    path = _construct(capsys, tmp_path, "q", "--design", "qs-6-3-2", "--augment")
    code, out, _ = run(capsys, "certify", str(path))
    checks = _checks(json.loads(out))
    assert code == EXIT_OK
    assert checks["bounds"]["relative_saturated"] and not checks["bounds"]["absolute_saturated"]
    assert checks["incoherent_search"]["inc"] == 6
    assert checks["incoherent_design"]["status"] == "pass"


def test_certify_not_regular(capsys, tmp_path):
    path = _construct(capsys, tmp_path, "s", "--design", "sts15")
    code, out, _ = run(capsys, "certify", str(path))
    checks = _checks(json.loads(out))
    assert code == EXIT_OK
    assert checks["two_graph"]["regular"] is False
    assert checks["incoherent_design"]["status"] == "n/a"


def test_certify_exceptional(capsys, tmp_path):
    path = _construct(capsys, tmp_path, "i", "--design", "icosahedron")
    code, out, _ = run(capsys, "certify", str(path))
    assert code == EXIT_OK
    assert _checks(json.loads(out))["incoherent_design"]["status"] == "n/a"


def test_certify_bad_file(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{bad")
    assert run(capsys, "certify", str(bad))[0] == EXIT_FORMAT
    assert run(capsys, "certify", str(tmp_path / "missing.json"))[0] == EXIT_FORMAT


def test_elliptic(capsys):
    code, out, _ = run(capsys, "elliptic", "--bound", "1000")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "x,y"
    pts = [tuple(map(int, ln.split(","))) for ln in lines[1:]]
    assert pts == ELLIPTIC_POINTS


def test_descend_pairs(capsys):
    code, out, _ = run(capsys, "descend", "--from", "pairs-7")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert [s["size"] for s in doc["stages"]] == [28, 16, 10, 6]
    assert [s["inc"] for s in doc["stages"]][:2] == [7, 6]


def test_e8_report(capsys, tmp_path):
    rep_path = tmp_path / "e8.json"
    code, out, _ = run(capsys, "e8", "--no-second", "--report", str(rep_path))
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep_path.read_text() == out
    assert rep["heptad_census"] == [1, 28, 112, 112]
    assert rep["fixed_lines"] == 36 and rep["fixed_rank"] == 15
    assert rep["e8"]["census"] == [1, 56, 126, 56, 1] and rep["e8"]["rank"] == 8
    assert rep["projection_norms"] == ["2/5"]
    assert "second_involution" not in rep


@pytest.mark.parametrize(
    "argv",
    [
        ["scan", "--m-max", "10", "--format", "json"],
        ["families", "--i-max", "5"],
        ["construct", "--design", "pairs-7", "--augment"],
        ["elliptic", "--bound", "200"],
    ],
)
def test_byte_identical(capsys, argv):
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second


def test_output_file(capsys, tmp_path):
    out = tmp_path / "t3.csv"
    code, stdout, _ = run(capsys, "scan", "--m-max", "10", "-o", str(out))
    assert code == EXIT_OK and stdout == ""
    assert out.read_text().count("\n") == 26


def test_console_script():
    exe = shutil.which("eqlab")
    cmd = [exe] if exe else [sys.executable, "-m", "eqlab.cli"]
    res = subprocess.run(cmd + ["elliptic", "--bound", "30"], capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.splitlines()[-1] == "29,153"
