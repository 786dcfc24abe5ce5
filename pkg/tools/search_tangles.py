"""Search small algebraic tangles for ones satisfying given closure identities.

Used to reconstruct tangle-table entries whose drawings are not available
in machine-readable form.  Identification of closures is by Jones
polynomial (up to mirror) against the bundled KnotInfo extract.

    python tools/search_tangles.py 7_18
"""

from __future__ import annotations

import itertools
import sys
from fractions import Fraction
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

from oracles import jones, mirror_poly, parse_laurent  # noqa: E402

from qtangle.algebra import parse_quandle_spec  # noqa: E402
from qtangle.colorings import coloring_count  # noqa: E402
from qtangle.diagrams import (strand_pairs, denominator, numerator, orient, rational_tangle, rotate,  # noqa: E402
                              tangle_add)

JONES = ROOT / "tests" / "data" / "jones9.tsv"

# name -> (quandle needed for nontrivial colorings, [(closure, extra twists, knot)])
TARGETS = {
    "7_4": ("alexander:2:t^2+t+1", [("N", (-1,), "4_1")]),
    "7_5": ("alexander:2:t^2+t+1", [("N", (-1,), "7_3")]),
    "7_13": ("dihedral:5", [("N", None, "7_4"), ("N", (1,), "8_16"), ("N", (1, 1), "9_39"),
                            ("N", (-1, -1), "9_49")]),
    "7_15": ("dihedral:7", [("N", (-1,), "5_2"), ("D", None, "7_7"), ("N", (2,), "9_41")]),
    "7_16": ("dihedral:3", [("D", None, "7_7"), ("N", None, "7_4")]),
    "7_17": ("dihedral:3", [("N", (1,), "8_18")]),
    "7_18": ("dihedral:5", [("D", None, "5_1"), ("N", (1,), "8_21")]),
}


def jones_table():
    table = {}
    for line in JONES.read_text().splitlines():
        if not line or line.startswith("#"):
            continue
        name, text = line.split("\t")
        ref = parse_laurent(text)
        table[tuple(sorted(ref.items()))] = name
        table.setdefault(tuple(sorted(mirror_poly(ref).items())), name + "*")
    return table


def identify(k, table):
    if not k.crossings or k.loops:
        return "unknot/link"
    k = orient(k)
    return table.get(tuple(sorted(jones(k.crossings, k.writhe).items())), "?")


def rationals(max_n: int):
    out = {}
    for n in range(1, max_n + 1):
        for parts in range(1, n + 1):
            for comp in itertools.combinations(range(1, n), parts - 1):
                sizes = [b - a for a, b in zip((0,) + comp, comp + (n,))]
                for signs in itertools.product((1, -1), repeat=parts):
                    tw = tuple(s * a for s, a in zip(signs, sizes))
                    out[tw] = rational_tangle(*tw)
    return out


INF = "inf"


def _recip(f):
    if f == INF:
        return Fraction(0)
    return INF if f == 0 else 1 / f


def fraction(twists, rotated=False):
    """Conway fraction of ``R(twists)``; vertical twists act on ``1/F``."""
    f = INF
    for i, a in enumerate(twists):
        if i % 2 == 0:
            r = _recip(f)
            f = _recip(r if r == INF else r + a)
        else:
            f = INF if f == INF else f + a
    if rotated:
        r = _recip(f)
        f = r if r == INF else -r
    return f


def candidates(total: int):
    rats = rationals(total - 1)
    best: dict = {}
    for tw, t in rats.items():
        n = sum(map(abs, tw))
        for rot in (False, True):
            key = fraction(tw, rot)
            if key not in best or best[key][1] > n:
                best[key] = (f"rot(R{tw})" if rot else f"R{tw}", n, rotate(t) if rot else t)
    by_n: dict[int, list] = {}
    for p in best.values():
        by_n.setdefault(p[1], []).append(p)
    # sums of two and three pieces
    for a in range(1, total):
        for pa in by_n.get(a, []):
            for pb in by_n.get(total - a, []):
                yield f"{pa[0]}+{pb[0]}", tangle_add(pa[2], pb[2])
    for a in range(1, total - 1):
        for b in range(1, total - a):
            c = total - a - b
            for pa in by_n.get(a, []):
                for pb in by_n.get(b, []):
                    ab = tangle_add(pa[2], pb[2])
                    for pc in by_n.get(c, []):
                        yield f"{pa[0]}+{pb[0]}+{pc[0]}", tangle_add(ab, pc[2])
                        yield f"rot({pa[0]}+{pb[0]})+{pc[0]}", tangle_add(rotate(ab), pc[2])


def variants(t):
    for text in ("NW In, NE In", "NW In, NE Out", "NW In, SW In", "NW In, SW Out"):
        try:
            yield orient(t, text)
        except Exception:
            pass


def main(name: str) -> None:
    qspec, idents = TARGETS[name]
    q = parse_quandle_spec(qspec)
    table = jones_table()
    seen = set()
    for label, t in candidates(7):
        key = (t.crossings, t.boundary)
        if key in seen:
            continue
        seen.add(key)
        if not any(coloring_count(v, q, 0) > 1 for v in variants(t)):
            continue
        ok = True
        got = []
        for kind, extra, knot in idents:
            body = t if extra is None else tangle_add(t, rational_tangle(*extra))
            k = numerator(body) if kind == "N" else denominator(body)
            found = identify(k, table)
            got.append(found)
            if found.rstrip("*") != knot:
                ok = False
                break
        if ok:
            print(label, got, flush=True)


if __name__ == "__main__":
    main(sys.argv[1])
