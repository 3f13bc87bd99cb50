import json
from pathlib import Path

import pytest

from esfpy import cli
from esfpy.cli import EXIT_ERROR, EXIT_OK, EXIT_REFUTED, build_parser, main

SMALL = ["--agents", "1,2,3", "--verify-max", "2", "--refute-max", "3"]


def run(capsys, *argv: str) -> tuple[int, str]:
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_enumerate_preorders(capsys):
    code, out = run(capsys, "enumerate", "preorders", "--worlds", "4", "--count-only")
    assert code == EXIT_OK
    assert out.splitlines()[-1] == "75"


def test_enumerate_listing(capsys):
    code, out = run(capsys, "enumerate", "preorders", "--worlds", "4", "--limit", "2")
    assert code == EXIT_OK
    assert out.splitlines()[1:] == ["75", "00 01 10 11", "11 > 00 01 10"]


def test_enumerate_counts(capsys):
    assert run(capsys, "--format", "json", "enumerate", "partitions", "--society", "1,2,3,4", "--count-only")[0] == 0
    code, out = run(capsys, "--format", "json", "enumerate", "formulas")
    assert json.loads(out)["results"][0]["count"] == 20_820_969
    code, out = run(capsys, "--format", "json", "enumerate", "profiles", "--society", "1,2", "--count-only")
    assert json.loads(out)["results"][0]["count"] == 5625


def test_check_exit_codes(capsys):
    code, out = run(capsys, *SMALL, "check", "--op", "proj", "--postulate", "ESF-D")
    assert code == EXIT_OK and "Satisfied" in out
    code, out = run(capsys, *SMALL, "check", "--op", "sum", "--postulate", "ESF-I")
    assert code == EXIT_REFUTED and "witness for I" in out


def test_check_writes_witness(capsys, tmp_path: Path):
    witness = tmp_path / "w.json"
    code, _ = run(capsys, *SMALL, "check", "--op", "max", "--postulate", "ESF8", "--witness", str(witness))
    assert code == EXIT_REFUTED
    record = json.loads(witness.read_text(encoding="utf-8"))
    assert record["postulate"] == "ESF8" and len(record["partition"]) == 2


def test_bad_input(capsys):
    assert run(capsys, *SMALL, "check", "--op", "sum", "--postulate", "ESF-X")[0] == EXIT_ERROR
    assert run(capsys, "--verify-max", "4", "--refute-max", "3", "check", "--op", "sum",
               "--postulate", "ESF8")[0] == EXIT_ERROR
    assert run(capsys, "--tiebreak", "11 > 10 01 00", "recover", "--op", "linproj",
               "--profile-text", "1: 11 > 10 > 01 > 00")[0] == EXIT_ERROR
    with pytest.raises(SystemExit):
        build_parser().parse_args(["check", "--op", "borda", "--postulate", "ESF8"])


def test_refused_scope(capsys):
    code, _ = run(capsys, *SMALL, "--cost-ceiling", "1000", "check", "--op", "sum", "--postulate", "ESF8")
    assert code == EXIT_ERROR


def test_json_report(capsys, tmp_path: Path):
    out = tmp_path / "reports" / "check.json"
    argv = [*SMALL, "--format", "json", "--out", str(out), "check", "--op", "qlinproj", "--postulate", "u"]
    assert main(argv) == EXIT_REFUTED
    first = json.loads(out.read_text(encoding="utf-8"))
    assert set(first) == {"config", "results", "defects", "timing", "header"}
    assert first["config"]["verify_max"] == 2 and first["config"]["tiebreak"] is None
    assert first["results"][0]["postulate"] == "u"
    assert main(argv) == EXIT_REFUTED
    second = json.loads(out.read_text(encoding="utf-8"))
    assert {k: first[k] for k in ("config", "results", "defects")} == {k: second[k] for k in
                                                                       ("config", "results", "defects")}


def test_recover(capsys):
    code, out = run(capsys, "recover", "--op", "sigmapproj", "--profile-text", "1: 11 > 10 01 00; 2: 00 > 11 10 01")
    assert code == EXIT_OK
    assert "recovered:  00 > 11 > 01 10" in out


def test_recover_from_file(capsys, tmp_path: Path):
    profile = tmp_path / "trip.txt"
    profile.write_text("# Anne\n1: 11 > 10 > 01 > 00\n# Bob\n2: 00 > 11 10 01\n", encoding="utf-8")
    code, out = run(capsys, "--tiebreak", "00 > 01 > 10 > 11", "recover", "--op", "linproj", "--profile", str(profile))
    assert code == EXIT_OK
    assert "assignment: 00 > 01 > 10 > 11" in out


def test_coalitions(capsys):
    code, out = run(capsys, *SMALL, "coalitions", "--op", "sigmapproj", "--society", "1,2")
    assert code == EXIT_OK
    assert "minimal decisive coalitions of {1,2}: {2}" in out and "dictator: 2" in out
    code, _ = run(capsys, *SMALL, "coalitions", "--op", "proj", "--society", "1,2", "--local", "{00,01}", "{01}",
                  "--coalition", "1")
    assert code == EXIT_REFUTED


def test_minimal_locally_decisive(capsys):
    code, out = run(capsys, *SMALL, "coalitions", "--op", "proj", "--society", "1,2", "--local", "{00,01}", "{01}")
    assert code == EXIT_OK
    assert "minimal locally decisive for {00,01} against {01} coalitions of {1,2}: {2}" in out
    assert "dictator" not in out


def test_counting_skips_the_scan(capsys, monkeypatch):
    def unreachable(*args, **kwargs):
        raise AssertionError("--counting ran the exhaustive scan")

    monkeypatch.setattr(cli, "run_exhaustive", unreachable)
    code, out = run(capsys, "impossibility", "formulas", "--counting")
    assert code == EXIT_OK
    assert "summation: 11 distributions reach every chain, at most 4 of 12 single tops" in out
    assert "scanned" not in out and "ruled out by placement" not in out


def test_csv_format(capsys):
    code, out = run(capsys, *SMALL, "--format", "csv", "check", "--op", "proj", "--postulate", "SD")
    assert code == EXIT_OK
    header, row = out.splitlines()
    assert header.startswith("kind,subject,operator,postulate,status")
    assert "Satisfied" in row
