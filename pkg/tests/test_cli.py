import io
import subprocess
import sys

from gtl.cli import main


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_run_success():
    code, out, _ = run("run", "fig2.gtl", "--mode", "shallow")
    assert code == 0 and out.strip() == "10"


def test_run_counters():
    code, out, _ = run("run", "doubly", "--mode", "deep", "--counters")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "6"
    assert "wrappers_allocated=2" in lines and "wrapped_calls=2" in lines


def test_runtime_error_exit_code():
    code, out, err = run("run", "fig1", "--config", "111", "--mode", "sb", "--dump-blame")
    assert code == 3
    assert err.startswith("error: shallow:")
    assert out.startswith('witness: "a"')
    assert "unfiltered: 2" in out


def test_static_error_exit_code(tmp_path):
    p = tmp_path / "bad.gtl"
    p.write_text('(module m typed (define x : Integer "s"))')
    code, _, err = run("check", str(p))
    assert code == 2 and err.startswith("static error:")
    p.write_text("(module m typed")
    assert run("check", str(p))[0] == 2


def test_usage_errors():
    assert run()[0] == 64
    assert run("fly")[0] == 64
    assert run("run", "no-such-file.gtl")[0] == 64
    assert run("run", "fig1", "--config", "1")[0] == 64
    assert run("lattice", "sieve", "--weight", "bogus=1")[0] == 64


def test_check_dumps_sites():
    code, out, err = run("check", "fig2", "--dump-checks")
    assert code == 0
    assert out.strip() == "FnEntry(0) sum:176 list?"
    assert err.strip() == "ok: configuration -"


def test_check_desugared_flag():
    assert run("run", "figskip")[0] == 0
    code, _, err = run("run", "figskip", "--check-desugared")
    assert code == 3 and "natural?" in err


def test_lattice_rows():
    code, out, _ = run("lattice", "sieve", "--mode", "shallow")
    assert code == 0
    lines = out.strip().split("\n")
    assert len(lines) == 1 + 8
    assert lines[0].startswith("config_bits,mode,")


def test_lattice_cdf():
    code, out, _ = run("lattice", "control", "--cdf", "--mode", "deep")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "mode,x,percent"
    assert lines[-1].endswith(",100")


def test_report():
    code, out, _ = run("report", "stats.gtl")
    assert code == 0
    header, row = out.strip().split("\n")
    assert header == "program,shallow_worst,deep_worst,sb_typed"
    cells = row.split(",")
    assert cells[0] == "stats" and len(cells) == 4
    assert all(float(c) >= 1.0 for c in cells[1:])


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "gtl.cli", "run", "sieve"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip() == "17"
