import logging

import pytest

from qtangle.catalog import (CACHE_ENV, PROBES, CatalogError, InvariantCache, build_tangle,
                             load_tangle_table, parse_knot_table, parse_tangle_file)
from qtangle.diagrams import format_diagram


def test_bundled_knot_table(knots):
    assert len(knots) == 84
    assert knots.names[0] == "3_1" and knots.names[-1] == "9_49"
    assert "8_18" in knots and "8_18*" in knots and "10_1" not in knots
    assert knots.entries["3_1"].source == "braid 2 1 1 1"
    with pytest.raises(KeyError):
        knots["10_1"]


def test_braid_line():
    table = parse_knot_table("knot t braid 2 1 1 1  # a trefoil\n")
    e = table.entries["t"]
    assert e.diagram.num_crossings == 3 and e.note == "a trefoil"


def test_malformed_lines_name_the_line():
    with pytest.raises(CatalogError, match="line 2"):
        parse_knot_table("knot a braid 2 1 1 1\nknot b braid 2 1 x 1\n")
    with pytest.raises(CatalogError, match="line 1"):
        parse_knot_table("knot a braid 2 1 5 1\n")
    with pytest.raises(CatalogError, match="line 3: duplicate"):
        parse_knot_table("knot a braid 2 1 1 1\n\nknot a braid 2 1 1 1\n")
    with pytest.raises(CatalogError, match="line 1: unexpected"):
        parse_knot_table("widget\n")


def test_pd_block(knots):
    body = format_diagram(knots["4_1"]).split("\n", 1)[1]
    table = parse_knot_table("knot fig8\n" + body + "\nknot t braid 2 1 1 1\n")
    assert table.entries["fig8"].source == "pd"
    assert table["fig8"].signs == knots["4_1"].signs
    assert len(table) == 2


def test_construct_expressions():
    t = build_tangle("add(R(-3), R(-3))", "x")
    assert t.num_crossings == 6 and not t.is_oriented
    assert build_tangle("rot(mirror(R(2, 1)))").num_crossings == 3
    for bad in ("__import__('os')", "R(x)", "add(R(1))", "R(1) + R(2)", "open('f')"):
        with pytest.raises(CatalogError):
            build_tangle(bad)


def test_bundled_tangles(tangles):
    assert sorted(tangles.entries) == ["6_2", "6_3", "7_13", "7_15", "7_16", "7_17",
                                       "7_18", "7_4", "7_5"]
    assert tangles.coloring_profile("6_2", "NWin-SWout") == ("A2", "A3", "A5", "A7", "R3")
    assert "R7" in tangles.coloring_profile("7_15", "NWin-SWin")
    assert tangles.check_colorings() == []
    t = tangles.lookup("6_3:NWin-SWout")
    assert t.name == "6_3" and t.is_oriented
    assert tangles.lookup("6_3").variant == t.variant
    with pytest.raises(KeyError):
        tangles.get("9_9")


def test_dihedral_colorable_implies_alexander(tangles):
    # R_3 sits inside Z_3[t]/(t^2-t+1) as the line t = -1
    for name, entry in tangles.entries.items():
        for variant, probes in entry.variants.items():
            if "R3" in probes:
                assert "A3" in probes, (name, variant)


SMALL = """\
tangle s = add(R(-3), R(-3))
variant s NWin-SWout colors {colors}
identity s NWin-SWout 8_5* = N(T + R(-2))
"""


def test_strict_cross_check():
    assert parse_tangle_file(SMALL.format(colors="A2 A3 A5 A7 R3")).entries["s"]
    with pytest.raises(CatalogError, match="cross-check"):
        parse_tangle_file(SMALL.format(colors="A2 R5"))
    loose = parse_tangle_file(SMALL.format(colors="A2 R5"), strict=False)
    assert loose.check_colorings()
    with pytest.raises(CatalogError, match="unknown probe"):
        parse_tangle_file(SMALL.format(colors="Q9"))


def test_bad_identity_is_rejected():
    text = SMALL.format(colors="A2 A3 A5 A7 R3").replace("R(-2)", "R(1)")
    with pytest.raises(CatalogError, match="not orientable"):
        parse_tangle_file(text, strict=False)
    with pytest.raises(CatalogError, match="unknown tangle"):
        parse_tangle_file("identity q NWin-SWout 3_1 = D(T)\n")


def test_load_from_path(tmp_path):
    path = tmp_path / "t.txt"
    path.write_text(SMALL.format(colors="A2 A3 A5 A7 R3"))
    assert list(load_tangle_table(path).entries) == ["s"]


def test_probe_names():
    assert set(PROBES) == {"A2", "A3", "A5", "A7", "R3", "R5", "R7"}


# ---------------------------------------------------------------------------
# invariant cache

KEY = ("3_1", "dihedral:3", "mochizuki:3")


def test_cache_put_get_reload(tmp_path):
    path = tmp_path / "c.tsv"
    c = InvariantCache(path)
    assert c.get(KEY) is None and len(c) == 0
    c.put(KEY, "3 + 6u")
    assert c.get(KEY) == "3 + 6u" and KEY in c
    again = InvariantCache(path)
    assert again.get(KEY) == "3 + 6u" and again.keys() == [KEY]
    with pytest.raises(ValueError):
        c.put(("a\tb", "q", "c"), "1")


def test_corrupt_lines_are_skipped(tmp_path, caplog):
    path = tmp_path / "c.tsv"
    path.write_text("3_1\tdihedral:3\tmochizuki:3\t3 + 6u\ngarbage line\n4_1\tx\n")
    with caplog.at_level(logging.WARNING):
        c = InvariantCache(path)
    assert len(c) == 1
    assert sum("corrupt" in r.message for r in caplog.records) == 2


def test_cache_from_env(tmp_path, monkeypatch):
    path = tmp_path / "env.tsv"
    monkeypatch.setenv(CACHE_ENV, str(path))
    InvariantCache.from_env().put(KEY, "9")
    assert path.read_text().startswith("3_1\t")
    monkeypatch.delenv(CACHE_ENV)
    assert InvariantCache.from_env().path is None


def test_audit(tmp_path, knots):
    from qtangle.obstruction import InvariantSpec, knot_value
    spec = InvariantSpec("dihedral:3", "mochizuki:3")
    cache = InvariantCache(tmp_path / "a.tsv")
    for name in knots.names[:12]:
        knot_value(knots[name], spec, cache)

    def recompute(key):
        return knot_value(knots[key[0]], InvariantSpec(key[1], key[2])).format()

    assert cache.audit(recompute, sample=10) == []
    cache.put(("3_1", spec.quandle, spec.cocycle), "1")
    assert cache.audit(recompute, sample=12) == [("3_1", spec.quandle, spec.cocycle)]
