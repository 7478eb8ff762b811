"""Command-line interface: subcommands, flags, exit codes, JSON output."""

import json

from fgdict.cli import (
    EXIT_BUDGET, EXIT_DIAGNOSTICS, EXIT_OK, EXIT_USAGE,
    cli_dispatch,
)

EQ = "corpus/equality.fg"

BAD_FG4 = """
package main
type A struct {}
func (this A) m() A { return A{} }
func (this A) m() A { return this }
func main() { _ = A{} }
"""

LOOP = """
package main
type A struct {}
func (this A) loop() A { return this.loop() }
func main() { _ = A{}.loop() }
"""


def test_parse_echoes_canonical_form(capsys):
    assert cli_dispatch(["parse", EQ, "--ext"]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith("type Eq interface")
    assert "func main() {" in out


def test_check_ok(capsys):
    assert cli_dispatch(["check", EQ, "--ext"]) == EXIT_OK
    assert "bool" in capsys.readouterr().out


def test_check_reports_diagnostics(tmp_path, capsys):
    f = tmp_path / "bad.fg"
    f.write_text(BAD_FG4)
    assert cli_dispatch(["check", str(f)]) == EXIT_DIAGNOSTICS
    err = capsys.readouterr().err
    assert err.count("error:") == 1
    assert "fg4-dup-method" in err


def test_compile_writes_file(tmp_path, capsys):
    out = tmp_path / "eq.tl"
    assert cli_dispatch(["compile", EQ, "--ext", "-o", str(out)]) == EXIT_OK
    text = out.read_text()
    assert text.startswith("let")
    assert "eq_Pair" in text


def test_compile_is_byte_stable(tmp_path):
    a, b = tmp_path / "a.tl", tmp_path / "b.tl"
    cli_dispatch(["compile", EQ, "--ext", "-o", str(a), "--hoist-helpers"])
    cli_dispatch(["compile", EQ, "--ext", "-o", str(b), "--hoist-helpers"])
    assert a.read_bytes() == b.read_bytes()


def test_run_fg(capsys):
    assert cli_dispatch(["run-fg", EQ, "--ext"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "true"


def test_run_tl_reproduces_diff_value(tmp_path, capsys):
    out = tmp_path / "eq.tl"
    cli_dispatch(["compile", EQ, "--ext", "-o", str(out)])
    capsys.readouterr()
    assert cli_dispatch(["run-tl", str(out), "--ext"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "true"


def test_run_fg_trace(capsys):
    assert cli_dispatch(["run-fg", EQ, "--ext", "--trace"]) == EXIT_OK
    err = capsys.readouterr().err
    assert "[1]" in err and "fg-call" in err


def test_run_fg_budget(tmp_path):
    f = tmp_path / "loop.fg"
    f.write_text(LOOP)
    assert cli_dispatch(["run-fg", str(f), "--steps", "10"]) == EXIT_BUDGET


def test_diff_agree(capsys):
    assert cli_dispatch(["diff", EQ, "--ext"]) == EXIT_OK
    assert capsys.readouterr().out.startswith("agree: true")


def test_diff_json(capsys):
    assert cli_dispatch(["diff", EQ, "--ext", "--json"]) == EXIT_OK
    rec = json.loads(capsys.readouterr().out)
    assert rec["v"] == 1
    assert rec["verdict"] == "agree"


def test_diff_both_stuck_exits_zero(capsys):
    assert cli_dispatch(["diff", "corpus/stuck/assert01.fg"]) == EXIT_OK
    assert capsys.readouterr().out.startswith("both-stuck")


def test_diff_budget_exit_code(tmp_path):
    f = tmp_path / "loop.fg"
    f.write_text(LOOP)
    assert cli_dispatch(["diff", str(f), "--steps", "10"]) == EXIT_BUDGET


def test_fuzz_text_and_summary(capsys):
    assert cli_dispatch(["fuzz", "--count", "5", "--seed", "0"]) == EXIT_OK
    got = capsys.readouterr()
    assert got.out.count("seed ") == 5
    assert "5 programs" in got.err


def test_fuzz_json_stream(capsys):
    assert cli_dispatch(["fuzz", "--count", "3", "--seed", "2", "--json"]) == EXIT_OK
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 3
    for line in lines:
        rec = json.loads(line)
        assert rec["v"] == 1 and "verdict" in rec


def test_fuzz_is_deterministic(capsys):
    cli_dispatch(["fuzz", "--count", "10", "--seed", "4", "--json"])
    a = capsys.readouterr().out
    cli_dispatch(["fuzz", "--count", "10", "--seed", "4", "--json"])
    b = capsys.readouterr().out
    assert a == b


def test_usage_errors_exit_64(capsys):
    assert cli_dispatch([]) == EXIT_USAGE
    assert cli_dispatch(["frobnicate"]) == EXIT_USAGE
    assert cli_dispatch(["diff"]) == EXIT_USAGE


def test_missing_file_is_a_diagnostic(capsys):
    assert cli_dispatch(["parse", "no/such/file.fg"]) == EXIT_DIAGNOSTICS


def test_core_mode_rejects_ext_syntax(tmp_path, capsys):
    # equality.fg uses primitives, so core-mode parsing must fail cleanly.
    assert cli_dispatch(["parse", EQ]) == EXIT_DIAGNOSTICS
