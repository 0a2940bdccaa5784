import subprocess
import sys

import pytest

from conftest import S8_TEXT
from dstiling.cli import EXIT_INTERNAL, EXIT_USAGE, EXIT_VALIDATION, analysis_lines, main
from dstiling.store import read_db, read_tsv


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_enumerate_size_one(capsys):
    code, out, err = run(["enumerate", "--max-complexity", "1"], capsys)
    assert code == 0
    lines = out.split()
    assert len(out.splitlines()) == 12 and lines[0] == "<1:1,1,1:3,3>"
    assert "12 symbols" in err


def test_enumerate_geometry_filter(capsys):
    code, out, _ = run(["enumerate", "--max-complexity", "2", "--geometry", "euc", "-q"], capsys)
    assert code == 0 and len(out.splitlines()) == 3 + 15


def test_enumerate_files(tmp_path, capsys):
    tdb, tsv = str(tmp_path / "a.tdb"), str(tmp_path / "a.tsv")
    assert run(["enumerate", "--max-complexity", "3", "--out", tdb, "-q"], capsys)[0] == 0
    assert run(["enumerate", "--max-complexity", "3", "--out", tsv, "-q"], capsys)[0] == 0
    assert read_db(tdb) == read_tsv(tsv)
    assert len(read_db(tdb)) == 12 + 50 + 36


def test_db_build_and_query(tmp_path, capsys):
    tsv, tdb = str(tmp_path / "a.tsv"), str(tmp_path / "b.tdb")
    run(["enumerate", "--max-complexity", "2", "--out", tsv, "-q"], capsys)
    code, _, err = run(["db", "build", "--from", tsv, "--out", tdb], capsys)
    assert code == 0 and "62 rows" in err
    code, out, _ = run(["db", "query", tdb, "-e", "geometry = 'Hyperbolic' and complexity = 1",
                        "--format", "symbols"], capsys)
    assert code == 0
    assert out.split("\n")[:4] == ["<1:1,1,1:3,7>", "<1:1,1,1:4,5>", "<1:1,1,1:5,4>", "<1:1,1,1:7,3>"]
    code, out, _ = run(["db", "query", tdb, "-e", "complexity = 1"], capsys)
    assert code == 0 and len(out.splitlines()) == 13 and out.startswith("id\tsymbol\t")


def test_query_errors(tmp_path, capsys):
    tdb = str(tmp_path / "c.tdb")
    run(["enumerate", "--max-complexity", "1", "--out", tdb, "-q"], capsys)
    code, _, err = run(["db", "query", tdb, "-e", "frobnicate = 1"], capsys)
    assert code == EXIT_VALIDATION and "valid columns" in err
    code, _, err = run(["db", "query", tdb, "-e", "tiles = "], capsys)
    assert code == EXIT_VALIDATION and "position 8" in err
    code, _, _ = run(["db", "query", str(tmp_path / "missing.tdb"), "-e", "tiles = 1"], capsys)
    assert code == EXIT_VALIDATION


def test_analyze(capsys):
    code, out, _ = run(["analyze", S8_TEXT], capsys)
    assert code == 0
    fields = dict(line.split(": ", 1) for line in out.splitlines())
    assert fields["orbifold"] == "3*3" and fields["curvature"] == "0"
    assert fields["geometry"] == "Euclidean" and fields["colorable"] == "true"
    assert fields["graph_trace"] == "1,1,2; 2,3,1; 4,2,5; 3,6,7; 7,5,3; 6,4,8; 5,8,4; 8,7,6"


def test_analyze_file(tmp_path, capsys):
    f = tmp_path / "syms.txt"
    f.write_text("# two symbols\n<1:1,1,1:4,4>\n\n<1:1,1,1:3,7>\n")
    code, out, _ = run(["analyze", "--file", str(f)], capsys)
    assert code == 0 and out.count("orbifold: ") == 2


def test_analysis_lines_cover_all_columns():
    keys = {line.split(":")[0] for line in analysis_lines("<1:1,1,1:3,3>")}
    assert {"symbol", "orbifold", "normal", "self_dual", "canonical_trace"} <= keys


def test_canon(capsys):
    code, out, _ = run(["canon", "<2:2 1,2 1,1 2:4 4,4 4>"], capsys)
    lines = out.splitlines()
    assert code == 0 and len(lines) == 2 and " | " in lines[1]


def test_render(tmp_path, capsys):
    out = tmp_path / "s8.svg"
    code, _, _ = run(["render", S8_TEXT, "--model", "euclidean", "--size", "256", "-o", str(out)], capsys)
    assert code == 0 and out.read_text().startswith("<?xml")


@pytest.mark.parametrize("argv,code", [
    (["canon", "<1:1,1,1:2,3>"], EXIT_VALIDATION),
    (["canon", "<1:1,1"], EXIT_VALIDATION),
    (["render", "<1:1,1,1:4,4>", "--model", "klein", "-o", "/tmp/x.svg"], EXIT_VALIDATION),
    (["enumerate", "--max-complexity", "0"], EXIT_USAGE),
    (["enumerate", "--max-complexity", "1", "--out", "x.csv"], EXIT_USAGE),
])
def test_exit_codes(argv, code, capsys):
    assert run(argv, capsys)[0] == code


@pytest.mark.parametrize("argv", [[], ["bogus"], ["enumerate"], ["render", "<1:1,1,1:4,4>"]])
def test_usage_errors(argv, capsys):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == EXIT_USAGE


def test_internal_failure_code(monkeypatch, capsys):
    from dstiling import cli
    from dstiling.invariants import OrbifoldError

    def boom(args):
        raise OrbifoldError("cost identity violated")
    monkeypatch.setitem(cli.COMMANDS, "canon", boom)
    assert run(["canon", "<1:1,1,1:4,4>"], capsys)[0] == EXIT_INTERNAL


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "dstiling.cli", "canon", "<1:1,1,1:4,4>"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("<1:1,1,1:4,4>")
