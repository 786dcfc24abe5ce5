import io
import subprocess
import sys

from qtangle.catalog import InvariantCache
from qtangle.cli import run

F = ["--quandle", "alexander:2:t^2+t+1", "--cocycle", "poly2:(x-y)^2*y"]
M3 = ["--quandle", "dihedral:3", "--cocycle", "mochizuki:3"]
EXTENDED = "quandle R3+1 4\n0 2 1 0\n2 1 0 1\n1 0 2 2\n3 3 3 3\n"


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def test_verify():
    code, text = call("verify", "--quandle", "dihedral:5", "--cocycle", "mochizuki:5")
    assert code == 0
    assert text.splitlines()[0] == "quandle R_5: axioms OK"
    assert "cocycle OK" in text


def test_verify_rejects_bad_cayley(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("quandle bad 2\n0 0\n0 1\n")
    code, _ = call("verify", "--quandle", f"cayley:{path}")
    assert code == 1


def test_color():
    assert call("color", "--quandle", "dihedral:3", "--knot", "3_1") == (0, "colorings of 3_1: 9\n")
    code, text = call("color", "--quandle", "dihedral:3", "--knot", "braid:2 1,1,1")
    assert code == 0 and text.endswith(": 9\n")
    code, text = call("color", "--quandle", "dihedral:3", "--tangle", "6_2:NWin-SWout")
    assert code == 0 and "9" in text


def test_invariant_and_tangle_invariant():
    assert call("invariant", "--knot", "3_1", *F) == (0, "4 + 12u^(t+1)\n")
    code, text = call("tangle-invariant", "--tangle", "7_5", *F)
    assert (code, text) == (0, "4 + 12u^(t+1)\n")
    code, text = call("tangle-invariant", "--tangle", "6_2:NWin-SWout", *M3, "--per-boundary")
    lines = text.splitlines()
    assert code == 0 and lines[0] == "9 + 18u" and len(lines) == 10


def test_disjoint():
    assert call("disjoint", "--tangle", "6_2:NWin-SWout", "--tangle", "7_5", *F) == \
        (0, "16 + 48u^(t+1)\n")


def test_disjoint_refusal(tmp_path):
    path = tmp_path / "q.txt"
    path.write_text(EXTENDED)
    code, text = call("disjoint", "--tangle", "6_2:NWin-SWout", "--tangle", "6_2:NWin-SWout",
                      "--quandle", f"cayley:{path}", "--cocycle", "zero:2")
    assert code == 2 and text.startswith("refused:")


def test_obstruct():
    code, text = call("obstruct", "--tangle", "6_3:NWin-SWout", "--knot", "4_1",
                      "--specs", "mochizuki3")
    assert code == 0
    assert text == "verdict 6_3 NWin-SWout 4_1 excluded dihedral:3@mochizuki:3\n"


def _small_table(tmp_path):
    path = tmp_path / "knots.txt"
    path.write_text("knot 3_1 braid 2 1 1 1\nknot 4_1 braid 3 1 -2 1 -2\n"
                    "knot 8_20 braid 3 1 1 1 -2 -1 -1 -1 -2\n")
    return str(path)


def test_scan_formats_and_cache(tmp_path):
    table = _small_table(tmp_path)
    cache = tmp_path / "cache.tsv"
    args = ["scan", "--tangle", "6_3:NWin-SWout", "--specs", "prop3", "--table", table,
            "--cache", str(cache), "--workers", "1"]
    code, text = call(*args)
    assert code == 0 and "may embed in: 8_20" in text
    code, lines = call(*args, "--format", "lines", "--full")
    assert code == 0
    assert lines.splitlines() == [
        "verdict 6_3 NWin-SWout 3_1 excluded dihedral:3@mochizuki:3",
        "verdict 6_3 NWin-SWout 4_1 excluded dihedral:3@mochizuki:3",
        "verdict 6_3 NWin-SWout 8_20 open"]
    assert len(InvariantCache(cache)) >= 3


def test_scan_with_tangle_file(tmp_path):
    path = tmp_path / "t.txt"
    path.write_text("tangle s = add(R(3), R(-3))\nvariant s NWin-SWout colors A2 A3 A5 A7 R3\n")
    code, text = call("scan", "--tangles", str(path), "--strict", "--tangle", "s",
                      "--specs", "mochizuki3", "--table", _small_table(tmp_path))
    assert code == 0 and "may embed in: 8_20" in text
    path.write_text("tangle s = add(R(3), R(-3))\nvariant s NWin-SWout colors R5\n")
    code, _ = call("scan", "--tangles", str(path), "--strict", "--tangle", "s",
                   "--specs", "mochizuki3", "--table", _small_table(tmp_path))
    assert code == 1


def test_usage_errors(capsys):
    assert call("invariant", "--knot", "3_1")[0] == 1
    assert call("frobnicate")[0] == 1
    assert call("invariant", "--knot", "10_1", *F)[0] == 1
    assert call("invariant", "--knot", "3_1", "--quandle", "dihedral:3", "--cocycle", "bogus")[0] == 1
    assert call("scan", "--tangle", "6_2", "--specs", "nope")[0] == 1
    assert "error:" in capsys.readouterr().err


def test_reproduce_examples5():
    code, text = call("reproduce", "examples5")
    lines = text.splitlines()
    assert code == 0 and len(lines) == 6
    assert all(l.startswith("PASS") for l in lines[:5])
    assert lines[5].startswith("NOTE R_5") and "disagrees" in lines[5]


def test_reproduce_prop3():
    code, text = call("reproduce", "prop3", "--workers", "1")
    assert code == 0
    assert text.splitlines() == ["PASS 6_3 NWin-SWout p=5 list: 8_10 8_12 8_18 8_20 9_24",
                                 "PASS 6_3 NWin-SWout open set: 8_10 8_20 9_24"]


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "qtangle.cli", "invariant", "--knot", "3_1", *F],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout == "4 + 12u^(t+1)\n"
