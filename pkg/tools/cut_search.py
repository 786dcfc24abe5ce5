"""Find 7-crossing tangles satisfying closure identities by cutting knot diagrams.

Candidate tangles come from bundled table diagrams whose crossing count is
minimal (and their mirrors):

* an 8-crossing diagram with one crossing removed,
* a 9-crossing diagram with a bigon (two crossings sharing two edges) removed,
* a 7-crossing diagram cut open along two edges.

Every assignment of the four cut ends to NW, NE, SW, SE that yields a
planar tangle is kept; closures are identified by Jones polynomial.

    python tools/cut_search.py 7_13
"""

from __future__ import annotations

import itertools
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))
sys.path.insert(0, str(ROOT / "tools"))

from search_tangles import TARGETS, identify, jones_table, variants  # noqa: E402

from qtangle.algebra import parse_quandle_spec  # noqa: E402
from qtangle.catalog import load_knot_table  # noqa: E402
from qtangle.colorings import coloring_count  # noqa: E402
from qtangle.diagrams import (Diagram, DiagramError, denominator, mirror, numerator,  # noqa: E402
                              rational_tangle, tangle_add)


def knot_diagrams(ncross: int):
    for entry in load_knot_table():
        d = entry.diagram
        if d.num_crossings != ncross:
            continue
        d = Diagram(d.crossings, name=entry.name)
        yield entry.name, d
        yield entry.name + "*", mirror(d)


def _planar_tangles(crossings, ends):
    """All planar labelings of the four ``ends`` (edge labels) as NW, NE, SW, SE."""
    for perm in itertools.permutations(ends):
        t = Diagram(tuple(crossings), boundary=tuple(perm))
        try:
            t.faces
        except DiagramError:
            continue
        yield t


def cut_crossings(d: Diagram, drop: tuple[int, ...]):
    keep = [c for i, c in enumerate(d.crossings) if i not in drop]
    removed = [e for i in drop for e in d.crossings[i]]
    # edges joining two removed crossings disappear; the others become boundary ends
    ends = [e for e in removed if removed.count(e) == 1]
    if len(ends) != 4:
        return
    yield from _planar_tangles(keep, ends)


def cut_edges(d: Diagram, e: int, f: int):
    big = max(d.edges) + 1
    new = {e: big, f: big + 1}
    crossings = []
    seen = set()
    for v, t in enumerate(d.crossings):
        row = []
        for k, x in enumerate(t):
            if x in new and x not in seen:
                seen.add(x)
                row.append(new[x])
            else:
                row.append(x)
        crossings.append(tuple(row))
    yield from _planar_tangles(crossings, [e, big, f, big + 1])


def pool():
    for name, d in knot_diagrams(8):
        for v in range(8):
            for t in cut_crossings(d, (v,)):
                yield f"{name} minus crossing {v}", t
    for name, d in knot_diagrams(9):
        for v, w in itertools.combinations(range(9), 2):
            if len(set(d.crossings[v]) & set(d.crossings[w])) == 2:
                for t in cut_crossings(d, (v, w)):
                    yield f"{name} minus bigon {v},{w}", t
    for name, d in knot_diagrams(7):
        for e, f in itertools.combinations(sorted(d.edges), 2):
            for t in cut_edges(d, e, f):
                yield f"{name} cut at {e},{f}", t


def check(t, idents, table):
    got = []
    for kind, extra, knot in idents:
        body = t if extra is None else tangle_add(t, rational_tangle(*extra))
        k = numerator(body) if kind == "N" else denominator(body)
        found = identify(k, table)
        got.append(found)
        if found.rstrip("*") != knot:
            return None
    return got


def main(name: str) -> None:
    qspec, idents = TARGETS[name]
    q = parse_quandle_spec(qspec)
    table = jones_table()
    for label, t in pool():
        if not any(coloring_count(v, q, 0) > 1 for v in variants(t)):
            continue
        got = check(t, idents, table)
        if got:
            print(label, t.crossings, t.boundary, got, flush=True)


if __name__ == "__main__":
    main(sys.argv[1])
