"""Command-line interface: exit codes, output formats, diagnostics."""

import pytest

from dimcheck import corpus_path
from dimcheck.cli import main

LANDING_GEAR = str(corpus_path("landing_gear.dc"))
NOSEGEAR_OK = str(corpus_path("nosegear_inv6.dc"))
NOSEGEAR_RED = str(corpus_path("nosegear_red.dc"))
REACTOR = str(corpus_path("reactor.dc"))


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- convert --------------------------------------------------------------


def test_convert_pound_to_gram(capsys):
    code, out, err = run(capsys, "convert", "2", "pound", "gram")
    assert code == 0
    assert out == "907.18474 gram\n"
    assert err == ""


def test_convert_dimension_mismatch_is_usage_error(capsys):
    code, out, err = run(capsys, "convert", "2", "pound", "kelvin")
    assert code == 2
    assert out == ""
    assert "mismatch" in err.lower()


def test_convert_unknown_unit(capsys):
    code, _, err = run(capsys, "convert", "2", "cubit", "gram")
    assert code == 2 and "cubit" in err


def test_convert_bad_number(capsys):
    code, _, err = run(capsys, "convert", "1e", "pound", "gram")
    assert code == 2 and err


def test_convert_affine(capsys):
    code, out, _ = run(capsys, "convert", "32", "fahrenheit", "kelvin")
    assert code == 0
    assert out == "273.15 Kelvin\n"


def test_convert_precision_flag(capsys):
    code, out, _ = run(capsys, "convert", "1", "pound", "gram", "--precision", "5")
    assert code == 0
    assert out == "453.59 gram\n"


# -- check ----------------------------------------------------------------


def test_check_landing_gear_ok(capsys):
    code, out, err = run(capsys, "check", LANDING_GEAR)
    assert code == 0
    assert err == ""
    assert "0 errors" in out


def test_check_nosegear_ok(capsys):
    code, _, err = run(capsys, "check", NOSEGEAR_OK)
    assert code == 0 and err == ""


def test_check_nosegear_red_single_mismatch(capsys):
    code, out, err = run(capsys, "check", NOSEGEAR_RED)
    assert code == 1
    diags = [line for line in err.splitlines() if "DimensionMismatch" in line]
    assert len(diags) == 1
    # file:line:col: kind: message
    prefix = f"{NOSEGEAR_RED}:7:"
    assert diags[0].startswith(prefix)
    assert "L^1·T^-1" in diags[0] and "T^1" in diags[0]


def test_check_reactor_evaluates_closed_statements(capsys):
    code, out, err = run(capsys, "check", REACTOR)
    assert code == 0 and err == ""
    assert "278.15 celsius" in out
    assert "325 celsius" in out


def test_check_machine_format(capsys):
    code, out, _ = run(capsys, "check", NOSEGEAR_RED, "--format", "machine")
    assert code == 1
    lines = [line for line in out.splitlines() if "\t" in line]
    assert len(lines) == 4  # one verdict per item
    statuses = [line.split("\t")[0] for line in lines]
    assert statuses == ["OK", "OK", "ERROR", "OK"]


def test_check_missing_file(capsys):
    code, _, err = run(capsys, "check", "/nonexistent/x.dc")
    assert code == 2 and err


def test_check_parse_error_diagnostic(tmp_path, capsys):
    bad = tmp_path / "bad.dc"
    bad.write_text("check 3 +\n")
    code, _, err = run(capsys, "check", str(bad))
    assert code == 1
    assert err.startswith(f"{bad}:1:")
    assert "ParseError" in err


def test_check_lex_error_column(tmp_path, capsys):
    bad = tmp_path / "lex.dc"
    bad.write_text("check 1e\n")
    code, _, err = run(capsys, "check", str(bad))
    assert code == 1
    assert f"{bad}:1:7: LexError" in err


def test_check_failing_closed_assert(tmp_path, capsys):
    f = tmp_path / "a.dc"
    f.write_text("assert 1 gram > 1 kilogram\n")
    code, _, err = run(capsys, "check", str(f))
    assert code == 1
    assert "AssertFailed" in err


def test_check_passing_closed_assert(tmp_path, capsys):
    f = tmp_path / "a.dc"
    f.write_text("assert 1000 gram == 1 kilogram\nassert 5 minute > 200 second\n")
    code, _, err = run(capsys, "check", str(f))
    assert code == 0 and err == ""


def test_check_open_statements_stay_static(tmp_path, capsys):
    f = tmp_path / "open.dc"
    f.write_text("var x : second\nassert x > 1 second\n")
    code, _, err = run(capsys, "check", str(f))
    assert code == 0 and err == ""


# -- eval -----------------------------------------------------------------


def test_eval_expression(capsys):
    code, out, _ = run(capsys, "eval", "100 gram + 2 pound")
    assert code == 0
    assert out == "1007.18474 gram\n"


def test_eval_comparison_prints_boolean(capsys):
    code, out, _ = run(capsys, "eval", "1000 gram == 1 kilogram")
    assert code == 0 and out == "true\n"
    code, out, _ = run(capsys, "eval", "1 gram == 1 kilogram")
    assert code == 0 and out == "false\n"


def test_eval_into_unit(capsys):
    code, out, _ = run(capsys, "eval", "100 gram + 2 pound", "--in", "kilogram")
    assert code == 0
    assert out == "1.00718474 Kilogram\n"


def test_eval_mismatch_is_check_failure(capsys):
    code, _, err = run(capsys, "eval", "1 kph + 3 second")
    assert code == 1 and err


def test_eval_unbound_name_is_usage_error(capsys):
    code, _, err = run(capsys, "eval", "x + 1 second")
    assert code == 2
    assert "UnknownName" in err


# -- units ----------------------------------------------------------------


def test_units_plain_listing(capsys):
    code, out, _ = run(capsys, "units")
    assert code == 0
    assert "pound" in out and "celsius" in out and "canonical" in out


def test_units_machine_listing(capsys):
    code, out, _ = run(capsys, "units", "--format", "machine")
    assert code == 0
    rows = [line.split("\t") for line in out.splitlines()]
    assert all(len(r) == 6 for r in rows)
    names = [r[0] for r in rows]
    assert "Kilogram" in names and "fahrenheit" in names


REGISTRY_TEXT = (
    "base Kilogram Mass\n"
    "base Metre Length\n"
    "unit stone : Mass scale 635029318/100000000\n"
)


def test_units_registry_flag(tmp_path, capsys):
    f = tmp_path / "custom.reg"
    f.write_text(REGISTRY_TEXT)
    code, out, _ = run(capsys, "units", "--registry", str(f))
    assert code == 0
    assert "stone" in out and "pound" not in out


def test_registry_env_override(tmp_path, capsys, monkeypatch):
    f = tmp_path / "custom.reg"
    f.write_text(REGISTRY_TEXT)
    monkeypatch.setenv("DIMCHECK_REGISTRY", str(f))
    code, out, _ = run(capsys, "units")
    assert code == 0 and "stone" in out
    code, _, _ = run(capsys, "convert", "1", "stone", "kilogram")
    assert code == 0


def test_registry_flag_beats_env(tmp_path, capsys, monkeypatch):
    f = tmp_path / "flag.reg"
    f.write_text(REGISTRY_TEXT)
    monkeypatch.setenv("DIMCHECK_REGISTRY", "/nonexistent/env.reg")
    code, out, _ = run(capsys, "units", "--registry", str(f))
    assert code == 0 and "stone" in out


def test_missing_registry_file_is_io_error(capsys):
    code, _, err = run(capsys, "units", "--registry", "/nonexistent/r.reg")
    assert code == 2 and "registry" in err


# -- currency -------------------------------------------------------------


def test_currency_run_ok(tmp_path, capsys):
    f = tmp_path / "ok.scn"
    f.write_text("order c1 s1\nbill s1 REF\npay 1\nserve s1\n")
    code, out, err = run(capsys, "currency", "run", str(f))
    assert code == 0
    assert err == ""
    assert "0 guard failures" in out


def test_currency_run_guard_failure_exit_one(tmp_path, capsys):
    f = tmp_path / "bad.scn"
    f.write_text("order c1 s1\nserve s1\n")
    code, out, err = run(capsys, "currency", "run", str(f))
    assert code == 1
    assert "guard failed" in err


def test_currency_run_trace(tmp_path, capsys):
    f = tmp_path / "t.scn"
    f.write_text("order c1 s1\nbill s1 REF\n")
    code, out, _ = run(capsys, "currency", "run", str(f), "--trace")
    assert code == 0
    assert "b1 = 100 REF" in out


def test_currency_run_random(capsys):
    code, out, err = run(capsys, "currency", "run", "random", "--seed", "5")
    assert code == 0
    assert "seed=5" in out and "0 violations" in out
    assert err == ""


def test_currency_run_missing_file(capsys):
    code, _, err = run(capsys, "currency", "run", "/nonexistent/s.scn")
    assert code == 2 and err


def test_currency_run_malformed_line(tmp_path, capsys):
    f = tmp_path / "m.scn"
    f.write_text("order c1 s1\nwat\n")
    code, _, err = run(capsys, "currency", "run", str(f))
    assert code == 2
    assert "ScenarioError" in err


# -- selftest -------------------------------------------------------------


def test_selftest_small_run(capsys):
    code, out, _ = run(capsys, "selftest", "--iterations", "200", "--seed", "3")
    assert code == 0
    assert out.strip().splitlines()[-1].startswith("PASS:")
    assert "seed=3" in out


def test_selftest_rejects_zero_iterations(capsys):
    code, _, err = run(capsys, "selftest", "--iterations", "0")
    assert code == 2 and err


# -- argparse-level usage errors ------------------------------------------


def test_no_subcommand_is_usage_error(capsys):
    assert run(capsys, )[0] == 2


def test_unknown_subcommand_is_usage_error(capsys):
    assert run(capsys, "frobnicate")[0] == 2
