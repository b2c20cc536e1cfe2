import io
import json

import jsonschema
import pytest

from dkbv.cli import EXIT_FAILED, EXIT_OK, EXIT_RESOURCE, EXIT_USAGE, main, report_schema
from dkbv.fixtures import fixture_text


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_outdoor_not_covered():
    code, out, _ = run("check", "ship-full", "--task", "coverage", "--table", "Rad",
                       "--attr", "RefuelArea", "--value", "outdoor")
    assert code == EXIT_FAILED
    assert "not covered" in out


def test_completeness_holds_with_ontology():
    code, out, _ = run("check", "ship-full", "--task", "completeness")
    assert code == EXIT_OK
    assert "1 of 1 verdicts hold" in out


def test_json_report_matches_schema():
    code, out, _ = run("check", "ship-full", "--format", "json")
    report = json.loads(out)
    jsonschema.validate(report, report_schema())
    assert code == (EXIT_OK if report["holds"] else EXIT_FAILED)
    tasks = {v["task"] for v in report["verdicts"]}
    assert {"unique-hit", "coverage", "completeness", "determinability"} <= tasks


def test_gap_witnesses_in_json(tmp_path):
    path = tmp_path / "tables.dkb"
    path.write_text(fixture_text("ship-tables-only"))
    code, out, _ = run("check", str(path), "--task", "completeness", "--format", "json",
                       "--max-witnesses", "2")
    report = json.loads(out)
    assert code == EXIT_FAILED
    gaps = report["verdicts"][0]["witnesses"]
    assert gaps and all(w["kind"] == "gap" for w in gaps)
    assert report["input"]["name"] == str(path)


def test_io_searches_the_entailed_value(tmp_path):
    text = fixture_text("ship-full") + "\n".join([
        "fact Ship(s)", "fact cerExp(s, 20001)", "fact length(s, 135)", "fact draft(s, 5)",
        "fact capacity(s, 500)", "fact cargo(s, 0)", ""])
    path = tmp_path / "s.dkb"
    path.write_text(text)
    code, out, _ = run("check", str(path), "--task", "io", "--object", "s", "--table", "Rad")
    assert code == EXIT_OK
    assert '"indoor"' in out and "entailed" in out


@pytest.mark.parametrize("argv", [
    ["check", "no-such-file"],
    ["check", "ship-full", "--task", "io"],
    ["check", "ship-full", "--task", "bogus"],
    ["check", "ship-full", "--table", "Nope"],
    ["check", "ship-full", "--task", "coverage", "--table", "Rad", "--attr", "RefuelArea",
     "--value", "x", "--no-ontology", "--attr", "Nope"],
    [],
])
def test_usage_errors(argv):
    code, _, _ = run(*argv)
    assert code == EXIT_USAGE


def test_parse_errors_exit_two(tmp_path):
    path = tmp_path / "bad.dkb"
    path.write_text("concept\n")
    code, _, err = run("parse", str(path))
    assert code == EXIT_USAGE and "line 1" in err


def test_closure_limit_exit_code():
    code, _, err = run("check", "ship-full", "--task", "completeness", "--closure-limit", "10")
    assert code == EXIT_RESOURCE and "limit" in err


def test_parse_encode_and_fixtures():
    code, out, _ = run("parse", "ship-full")
    assert code == EXIT_OK and "table Sc hit U" in out
    code, out, _ = run("encode", "ship-full")
    assert code == EXIT_OK and "featureaxiom length implies Sc.length" in out
    code, out, _ = run("encode", "ship-full", "--owl")
    assert code == EXIT_OK and out.startswith("Prefix(")
    code, out, _ = run("fixtures")
    assert "ship-full" in out.split()
