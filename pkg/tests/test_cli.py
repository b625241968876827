import json
import subprocess
import sys

import pytest

from isoscreen.cli import main
from isoscreen.records import fixture_path


@pytest.fixture
def one(tmp_path, fixtures):
    def write(label):
        p = tmp_path / f"{label.replace('/', '_')}.jsonl"
        p.write_text(fixtures[label].to_json() + "\n")
        return str(p)

    return write


def test_genus_level(capsys):
    assert main(["genus", "--level", "37"]) == 0
    assert capsys.readouterr().out.strip() == "40"


def test_genus_image(capsys, one):
    assert main(["genus", "--image", one("1225.b1"), "--level", "37", "--verbose"]) == 0
    sig = json.loads(capsys.readouterr().out)
    assert sig["genus"] == 4 and sig["index"] == 114


def test_screen_exit_codes(capsys, one, tmp_path):
    assert main(["screen", one("j=-9317")]) == 10
    report = json.loads(capsys.readouterr().out)
    assert report["M"] == [{"level": 37, "degree": 6, "multiplicity": 3}]
    out = tmp_path / "r.json"
    assert main(["screen", one("j=-121"), "--out", str(out), "--trace"]) == 0
    assert json.loads(out.read_text())["verdict"] == "empty"
    assert "D_prime" in json.loads(out.read_text())


def test_errors_exit_one(tmp_path, capsys):
    bad = tmp_path / "bad.jsonl"
    bad.write_text('{"label": "x", "j": "1728", "adelic_level": 2, "generators": []}\n')
    assert main(["screen", str(bad)]) == 1
    assert "CM" in capsys.readouterr().err
    assert main(["screen", str(tmp_path / "missing.jsonl")]) == 1
    assert main(["screen", str(fixture_path("witness_suite.jsonl"))]) == 1  # more than one record
    assert main(["genus"]) == 1
    assert main(["bogus"]) == 1
    nondet = tmp_path / "nd.jsonl"
    nondet.write_text('{"label": "x", "j": null, "adelic_level": 7, "generators": [[1, 1, 0, 1]]}\n')
    assert main(["screen", str(nondet)]) == 1


def test_orbits(capsys, one):
    assert main(["orbits", one("j=-9317"), "--mod", "37"]) == 0
    rows = [line.split("\t") for line in capsys.readouterr().out.strip().splitlines()]
    assert rows[0] == ["id", "representative", "size", "order", "degree"]
    assert sorted(int(r[4]) for r in rows[1:] if r[3] == "37") == [6, 6, 6, 666]
    assert main(["orbits", one("j=-9317"), "--mod", "5180"]) == 1


def test_batch_witness_suite(tmp_path):
    out = tmp_path / "out"
    assert main(["batch", str(fixture_path("witness_suite.jsonl")), "--jobs", "2", "--out", str(out)]) == 10
    summary = json.loads((out / "summary.json").read_text())
    got = {w["label"]: [(m["level"], m["degree"], m["multiplicity"]) for m in w["M"]] for w in summary["witnesses"]}
    assert got == {
        "j=-140625/8": [(21, 3, 2)],
        "1225.b1": [(37, 18, 1)],
        "j=-882216989/131072": [(17, 4, 2)],
        "j=-9317": [(37, 6, 3)],
        "j=16778985534208729/81000": [(24, 4, 2)],
        "j=351/4": [(28, 9, 2)],
    }
    assert len((out / "reports.jsonl").read_text().splitlines()) == 6


def test_batch_isolates_bad_lines(tmp_path, fixtures):
    src = tmp_path / "mixed.jsonl"
    src.write_text(
        fixtures["j=-121"].to_json() + "\n"
        + "{broken\n"
        + fixtures["j=-121"].to_json() + "\n"
        + fixtures["147.b1"].to_json() + "\n"
    )
    out = tmp_path / "o"
    assert main(["batch", str(src), "--out", str(out)]) == 1
    lines = [json.loads(x) for x in (out / "reports.jsonl").read_text().splitlines()]
    assert [x.get("verdict", "error") for x in lines] == ["empty", "error", "error", "empty"]
    assert "duplicate" in lines[2]["error"]
    summary = json.loads((out / "summary.json").read_text())
    assert summary["counts"]["errors"] == 2


def test_batch_bytes_independent_of_jobs(tmp_path):
    src = str(fixture_path())
    a, b = tmp_path / "a", tmp_path / "b"
    main(["batch", src, "--jobs", "1", "--out", str(a), "--trace"])
    main(["batch", src, "--jobs", "4", "--out", str(b), "--trace"])
    for name in ("reports.jsonl", "summary.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_console_script_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "isoscreen.cli", "genus", "--level", "13"], capture_output=True, text=True
    )
    assert proc.returncode == 0 and proc.stdout.strip() == "2"
