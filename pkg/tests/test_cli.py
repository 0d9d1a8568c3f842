import json

from pathlib import Path

import jsonschema
import pytest

import commands
import main

from inputs import load_schema

ROOT = Path(__file__).resolve().parent.parent
GOLDEN = Path(__file__).resolve().parent / "golden"
DATA = ROOT / "data"

def run(capsys, *argv):
	code = main.main(list(argv))
	captured = capsys.readouterr()
	return code, captured.out, captured.err

def run_json(capsys, *argv):
	code, out, err = run(capsys, *argv)
	assert code == 0, err
	return json.loads(out)

def assert_error(capsys, exit_code, *argv):
	code, out, err = run(capsys, *argv)
	assert code == exit_code
	assert out == ""
	payload = json.loads(err)
	jsonschema.validate(payload, load_schema("error"))
	assert payload["exit_code"] == exit_code
	return payload

@pytest.mark.parametrize("argv, golden, schema", [
	(["rho0", "--knot", "trefoil"], "rho0_trefoil.json", "rho0"),
	(["depth", "--word", "[x1,x2]", "--rank", "2", "--max-n", "4"], "depth_commutator.json", "depth"),
	(["eval", "--dsl", 'trivial(2) |> infect([x1,x2], knot:"unknot")'], "eval_unknot.json", "eval"),
])
def test_golden_outputs(capsys, argv, golden, schema):
	expected = (GOLDEN / golden).read_text()
	first = run(capsys, *argv)
	second = run(capsys, *argv)
	assert first == (0, expected, "")
	assert second == first
	jsonschema.validate(json.loads(first[1]), load_schema(schema))

def test_matrix_file_matches_registry(capsys):
	code, out, _ = run(capsys, "rho0", "--matrix-file", str(DATA / "trefoil.csv"))
	assert code == 0
	assert out == (GOLDEN / "rho0_trefoil.json").read_text()

def test_inline_matrix(capsys):
	payload = run_json(capsys, "rho0", "--matrix-json", '{"name": "fig", "matrix": [[1, 1], [0, -1]]}')
	assert payload == {"knot": "fig", "rho0": {"value": "0", "error_bound": "0"}}

def test_text_output(capsys):
	code, out, _ = run(capsys, "rho0", "--knot", "trefoil", "--format", "text")
	assert code == 0
	assert out == "knot: trefoil\nrho0:\n  -4/3 (+- 0)\n"

def test_text_output_lists_provenance(capsys):
	code, out, _ = run(capsys, "bing", "--knot", "trefoil", "--format", "text")
	assert code == 0
	assert "provenance:" in out
	assert "caller-asserted" in out

def test_sigfn_csv(capsys):
	code, out, _ = run(capsys, "sigfn", "--knot", "trefoil", "--format", "csv", "--samples", "4")
	assert code == 0
	assert out == "t,sigma\n0.000000,0\n0.250000,-2\n0.500000,-2\n0.750000,-2\n"

def test_sigfn_json(capsys):
	payload = run_json(capsys, "sigfn", "--knot", "twist(-2)")
	jsonschema.validate(payload, load_schema("sigfn"))
	assert payload["values"] == [-2, 0]
	assert len(payload["breakpoints"]) == 2

def test_knot_info(capsys):
	payload = run_json(capsys, "knot-info", "--knot", "figure8")
	jsonschema.validate(payload, load_schema("knot-info"))
	assert payload["alexander"] == [1, -3, 1]
	assert payload["arf"] == 1
	assert payload["genus"] == 1
	assert payload["circle_roots"] == []

def test_expression_file(capsys):
	payload = run_json(capsys, "eval", "--expr-file", str(DATA / "bing_trefoil.json"))
	jsonschema.validate(payload, load_schema("eval"))
	assert payload["slice_obstruction"] == {
		"verdict": "obstructed",
		"n": 1,
		"rho": {"value": "-4/3", "error_bound": "0"},
	}

def test_bing(capsys):
	payload = run_json(capsys, "bing", "--knot", "trefoil", "--pattern", "[[1,2],[3,4]]")
	jsonschema.validate(payload, load_schema("bing"))
	assert payload["components"] == 4
	assert payload["depth"] == 2
	assert payload["slice_obstruction"]["n"] == 2

def test_family(capsys):
	payload = run_json(capsys, "family", "--n", "1", "--count", "2")
	jsonschema.validate(payload, load_schema("family"))
	assert payload["eta"] == "x1^-1 x2^-1 x1 x2"
	assert [member["knot"] for member in payload["members"]] == ["twist(-2)", "twist(-3) # twist(-5)"]
	for member in payload["members"]:
		assert member["vanishing"]["consistent"]
		assert member["tags"]["solvable_degree"] == 1

def test_approx(capsys):
	payload = run_json(capsys, "approx", "--target", "0.5")
	jsonschema.validate(payload, load_schema("approx"))
	assert payload["round_trip"] is True
	assert payload["scale"] == 1

def test_approx_with_library_file(capsys):
	payload = run_json(capsys, "approx", "--target", "-1.25", "--library", str(DATA / "library.json"))
	jsonschema.validate(payload, load_schema("approx"))
	assert payload["round_trip"] is True

def test_independence_relation(capsys):
	payload = run_json(
		capsys,
		"independence", "--n", "0", "--bound", "3",
		"--knots", "trefoil # trefoil", "mirror(trefoil) # mirror(trefoil)",
	)
	jsonschema.validate(payload, load_schema("certificate"))
	assert payload["verdict"] == "RelationFound"
	assert payload["coefficients"] == [1, 1]

def test_audit_family_corpus(capsys):
	payload = run_json(capsys, "audit", "--max-n", "1", "--count", "2")
	jsonschema.validate(payload, load_schema("audit"))
	assert payload["audited"] == 8
	assert all(report["consistent"] for report in payload["reports"])

def test_audit_expression(capsys):
	payload = run_json(capsys, "audit", "--dsl", 'trivial(2) |> infect([x1,x2], knot:"trefoil # trefoil")')
	jsonschema.validate(payload, load_schema("audit"))
	assert payload["report"]["consistent"]

def test_errors(capsys):
	assert assert_error(capsys, 2, "rho0", "--knot", "granny")["error"] == "parse_error"
	assert_error(capsys, 2, "rho0")
	assert_error(capsys, 2, "depth", "--word", "x1 +")
	assert assert_error(capsys, 3, "rho0", "--knot", "trefoil", "--format", "csv")["error"] == "precondition"
	payload = assert_error(capsys, 3, "rho0", "--matrix-json", '{"matrix": [[1, 0], [0, 1]]}')
	assert payload["error"] == "invalid_seifert_matrix"
	assert_error(capsys, 3, "rho0", "--knot", "trefoil", "--max-n", "9")
	assert_error(capsys, 3, "family", "--knots", "trefoil")
	payload = assert_error(capsys, 4, "eval", "--max-n", "1", "--dsl", 'trivial(3) |> infect([[x1,x2],[x1,x3]], knot:"trefoil")')
	assert payload["error"] == "depth_overflow"

def test_bad_numbers_are_rejected_before_computing(capsys):
	assert_error(capsys, 3, "sigfn", "--knot", "twist(-2)", "--samples", "-5", "--format", "csv")
	assert_error(capsys, 3, "sigfn", "--knot", "twist(-2)", "--samples", "0")
	for tolerance in ("nan", "inf", "-0.5", "0"):
		assert_error(capsys, 3, "rho0", "--knot", "trefoil", "--tolerance", tolerance)
	assert_error(capsys, 3, "approx", "--target", "0.5", "--budget", "0")
	assert_error(capsys, 3, "approx", "--target", "0.5", "--epsilon", "-0.1")
	assert_error(capsys, 2, "approx", "--target", "nan")
	assert_error(capsys, 3, "independence", "--n", "0", "--bound", "0")
	assert_error(capsys, 3, "family", "--count", "0")

def test_unexpected_failure_is_reported_as_json(capsys, monkeypatch):
	def fail(self):
		raise ValueError("boom")
	monkeypatch.setattr(commands.Rho0Command, "perform", fail)
	payload = assert_error(capsys, 1, "rho0", "--knot", "trefoil")
	assert payload["message"] == "Internal error: boom"

def test_unknown_flag_is_rejected(capsys):
	with pytest.raises(SystemExit) as info:
		main.main(["rho0", "--knot", "trefoil", "--colour", "red"])
	assert info.value.code == 2
