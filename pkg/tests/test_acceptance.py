"""The eight acceptance criteria, one PASS/FAIL line each.

Each test reports through the ``acceptance`` fixture before asserting, so a
red criterion still prints its line (repeated in the terminal summary).
"""

import random

import numpy as np
import pytest

from oracles import REIDEMEISTER_PAIRS, edge_check

from qtangle.algebra import cyclic_group, parse_quandle_spec, verify_quandle_axioms
from qtangle.catalog import PROBES
from qtangle.cocycles import make_mochizuki_cocycle, verify_2cocycle, verify_3cocycle
from qtangle.colorings import (check_coloring, colorings, enumerate_colorings, is_linear,
                               region_colorings, solve_alexander_colorings, tangle_colorings)
from qtangle.diagrams import from_braid
from qtangle.invariants import InvariantMultiset, parse_polynomial
from qtangle.obstruction import (F_SPEC, SPEC_SETS, check_embedding_obstruction, disjoint_value,
                                 knot_value, multiset_included, scan_table, tangle_value)

QUANDLE_SPECS = ["dihedral:3", "dihedral:5", "dihedral:7", "alexander:2:t^2+t+1",
                 "alexander:3:t^2-t+1", "alexander:5:t^2-t+1", "alexander:7:t^2-t+1"]
ALL_SPECS = SPEC_SETS["shadow"] + SPEC_SETS["mochizuki"] + [F_SPEC]


def same(value: InvariantMultiset, text: str) -> bool:
    return value == parse_polynomial(text, value.group)


def test_criterion_1_algebra_and_cocycles(acceptance):
    failures = [s for s in QUANDLE_SPECS if not verify_quandle_axioms(parse_quandle_spec(s)).ok]
    for p in (3, 5, 7):
        if not verify_3cocycle(make_mochizuki_cocycle(p)).ok:
            failures.append(f"mochizuki:{p}")
    for spec in SPEC_SETS["shadow"]:
        if not verify_3cocycle(spec.resolve()).ok:
            failures.append(spec.token)
    if not verify_2cocycle(F_SPEC.resolve()).ok:
        failures.append(F_SPEC.token)
    acceptance(1, not failures, "7 quandles, 3 Mochizuki and 4 polynomial 3-cocycles verified"
               if not failures else "failed: " + ", ".join(failures))
    assert not failures


TREFOIL = [
    ("f", F_SPEC, ["4 + 12u^(t+1)"]),
    ("shadow p=2", SPEC_SETS["shadow2"][0], ["16 + 48u^t"]),
    ("shadow p=3", SPEC_SETS["shadow3"][0], ["243 + 486u^(2t+2)", "243 + 486u^(t+1)"]),
    ("shadow p=5", SPEC_SETS["shadow5"][0],
     ["625 + 3750u^(t+3) + 3750u^(4t+2) + 3750u^(3t+4) + 3750u^(2t+1)"]),
    ("shadow p=7", SPEC_SETS["shadow7"][0], ["117649"]),
]


def test_criterion_2_trefoil_values(knots, acceptance):
    bad = []
    for label, spec, want in TREFOIL:
        got = [knot_value(knots["3_1"], spec), knot_value(knots["3_1*"], spec)]
        if len(want) == 2:
            # one value per chirality
            ok = same(got[0], want[0]) and same(got[1], want[1]) or \
                same(got[0], want[1]) and same(got[1], want[0])
        else:
            ok = same(got[0], want[0])
        if not ok:
            bad.append(f"{label}: got {got[0]} / {got[1]}")
    acceptance(2, not bad, "trefoil values for f and shadow p=2,3,5,7 match" if not bad
               else "; ".join(bad))
    assert not bad


def test_criterion_3_tangle_values(tangles, acceptance):
    cases = [("6_2", "NWin-SWout", SPEC_SETS["shadow2"][0], "64"),
             ("6_2", "NWin-SWout", SPEC_SETS["mochizuki3"][0], "9 + 18u"),
             ("6_3", "NWin-SWout", SPEC_SETS["shadow5"][0], "15625"),
             ("7_5", "NWin-NEin", F_SPEC, "4 + 12u^(t+1)")]
    bad = []
    for name, variant, spec, want in cases:
        got = tangle_value(tangles.get(name, variant), spec)
        if not same(got, want):
            bad.append(f"{name} {spec}: got {got}, expected {want}")
    acceptance(3, not bad, "4 tangle values match" if not bad else "; ".join(bad))
    assert not bad


def test_criterion_4_disjoint_unions(tangles, acceptance):
    t62, t63 = tangles.get("6_2", "NWin-SWout"), tangles.get("6_3", "NWin-SWout")
    t75 = tangles.get("7_5", "NWin-NEin")
    m3, m5 = SPEC_SETS["mochizuki3"][0], SPEC_SETS["mochizuki5"][0]
    cases = [([t62, t62], F_SPEC, "64"), ([t75, t75], F_SPEC, "40 + 24u^(t+1)"),
             ([t62, t75], F_SPEC, "16 + 48u^(t+1)"), ([t62, t62], m3, "9 + 36u + 36u^2"),
             ([t63, t63], m3, "81")]
    bad = []
    for ts, spec, want in cases:
        res = disjoint_value(ts, spec)
        if res.formula != res.direct or not same(res.direct, want):
            bad.append(f"{'+'.join(t.name for t in ts)} {spec}: got {res.direct}")
    r5 = disjoint_value([tangles.get("7_13", "NWin-NEout"), tangles.get("7_18", "NWin-SWin")],
                        m5, strict=False)
    reference = "125 + 25u + 100u^2 + 50u^3 + 100u^4"
    flag = "agrees with" if same(r5.direct, reference) else "disagrees with"
    detail = (f"5 published values reproduced, formula = direct; R_5 on 7_13+7_18 is {r5.direct} "
              f"by the direct form, which {flag} the printed {reference}")
    acceptance(4, not bad, detail if not bad else "; ".join(bad))
    assert not bad
    assert r5.direct.total == 5 ** 4            # |Col| * |X| for the union


def test_criterion_5_known_closures_stay_open(tangles, acceptance):
    bad = []
    for ident in tangles.identities:
        v = check_embedding_obstruction(tangles.get(ident.tangle, ident.variant),
                                        ident.closure(tangles), ALL_SPECS)
        if v.excluded:
            bad.append(f"{ident.tangle} {ident.variant} {ident.text} excluded by {v.witness}")
    acceptance(5, not bad, f"{len(tangles.identities)} closure identities open under all "
               f"{len(ALL_SPECS)} specs" if not bad else "; ".join(bad))
    assert not bad


PROP2 = {
    2: "8_5 8_10 8_15 8_18 8_19 8_20 8_21 9_16 9_22 9_24 9_25 9_28 9_29 9_30 9_36 9_38 9_39 "
       "9_40 9_41 9_42 9_43 9_44 9_45 9_49",
    3: "3_1 8_18 9_2 9_4 9_29 9_34 9_38",
    5: "3_1 8_3 8_5 8_11 8_15 8_18 8_19 8_21 9_1 9_5 9_6 9_16 9_19 9_23 9_28 9_29 9_38 9_40",
    7: "3_1 8_5 8_10 8_11 8_15 8_18 8_19 8_20 8_21 9_1 9_6 9_16 9_23 9_28 9_29 9_38 9_40",
}


def test_criterion_6_six_two_scan(tangles, knots, acceptance):
    t = tangles.get("6_2", "NWin-SWout")
    rep = scan_table(t, knots, SPEC_SETS["prop2"], full=True, workers=1)
    diffs = {}
    for spec, p in zip(rep.specs, (2, 3, 5, 7)):
        got, want = set(rep.open_by_spec[spec]), set(PROP2[p].split())
        if got != want:
            diffs[p] = (sorted(got - want), sorted(want - got))
    final_ok = rep.open == ["8_18", "9_29", "9_38"]
    parts = [f"open set {' '.join(rep.open)}"]
    parts += [f"p={p} list extra {' '.join(e) or '-'} missing {' '.join(m) or '-'}"
              for p, (e, m) in diffs.items()]
    acceptance(6, final_ok and not diffs, "; ".join(parts))
    assert final_ok
    if diffs == {7: (["9_24"], [])}:
        # 9_24 has 2401 colorings by Z_7[t]/(t^2-t+1) in either chirality, so every
        # state sum is zero and it cannot be excluded; 8_10, with the same value,
        # is on the reference list.
        assert tangle_value(t, rep.specs[3]) <= knot_value(knots["9_24"], rep.specs[3])
        assert knot_value(knots["9_24"], rep.specs[3]) == knot_value(knots["8_10"], rep.specs[3])
        pytest.xfail("reference p=7 list omits 9_24, which the invariant cannot exclude")
    assert not diffs


def test_criterion_7_six_three_scan(tangles, knots, acceptance):
    t = tangles.get("6_3", "NWin-SWout")
    rep = scan_table(t, knots, SPEC_SETS["prop3"], full=True, workers=1)
    p5 = rep.open_by_spec[SPEC_SETS["shadow5"][0]]
    ok = rep.open == ["8_10", "8_20", "9_24"] and p5 == ["8_10", "8_12", "8_18", "8_20", "9_24"]
    acceptance(7, ok, f"p=5 stage leaves {' '.join(p5)}; open set {' '.join(rep.open)}")
    assert ok


def _partial_order_and_products(rng) -> list[str]:
    bad = []
    for group in (cyclic_group(5), SPEC_SETS["shadow2"][0].resolve().group):
        def draw():
            return InvariantMultiset(group, {rng.randrange(group.order): rng.randrange(4)
                                             for _ in range(rng.randrange(4))})
        for _ in range(300):
            a, b, c = draw(), draw(), draw()
            if not multiset_included(a, a) or not multiset_included(a, a + b):
                bad.append("reflexivity")
            if multiset_included(a, b) and multiset_included(b, a) and a != b:
                bad.append("antisymmetry")
            if multiset_included(a, b) and multiset_included(b, c) and not multiset_included(a, c):
                bad.append("transitivity")
            if (a * b).total != a.total * b.total:
                bad.append("product total")
    return bad


def test_criterion_8_property_suites(knots, tangles, acceptance):
    quandles = {k: parse_quandle_spec(v) for k, v in PROBES.items()}
    bad: list[str] = []
    counts = {"colorings": 0, "regions": 0, "solver": 0, "totals": 0}
    tangle_list = [tangles.get(n, v) for n, e in tangles.entries.items() for v in e.variants]

    for key, q in quandles.items():
        for entry in knots:
            d = entry.diagram
            C = colorings(d, q)
            if not (check_coloring(d, q, C) and edge_check(d, q, C)):
                bad.append(f"coloring {entry.name} {key}")
            if is_linear(q):
                if sorted(map(tuple, solve_alexander_colorings(d, q).tolist())) != \
                        sorted(map(tuple, enumerate_colorings(d, q).tolist())):
                    bad.append(f"solver {entry.name} {key}")
                counts["solver"] += 1
            if q.size <= 9:
                R = region_colorings(d, q, C)
                distinct = {tuple(C[i]) + tuple(R[i, s])
                            for i in range(len(C)) for s in range(q.size)}
                if len(distinct) != len(C) * q.size:
                    bad.append(f"regions {entry.name} {key}")
                counts["regions"] += 1
            counts["colorings"] += 1
        for t in tangle_list:
            for x in range(q.size):
                C = tangle_colorings(t, q, x)
                if not (check_coloring(t, q, C) and edge_check(t, q, C)):
                    bad.append(f"coloring {t.name} {t.variant} {key}")
            counts["colorings"] += 1

    for spec in ALL_SPECS:
        theta = spec.resolve()
        q = theta.quandle
        for entry in knots:
            n = len(colorings(entry.diagram, q))
            want = n * q.size if theta.arity == 3 else n
            if knot_value(entry.diagram, spec).total != want:
                bad.append(f"total {entry.name} {spec}")
            counts["totals"] += 1
        for a, b in REIDEMEISTER_PAIRS:
            if knot_value(from_braid(a), spec) != knot_value(from_braid(b, 3), spec):
                bad.append(f"reidemeister {a} {spec}")

    bad += _partial_order_and_products(random.Random(0))
    detail = (f"{counts['colorings']} coloring re-checks, {counts['solver']} solver comparisons, "
              f"{counts['regions']} region counts, {counts['totals']} totals, "
              f"{len(REIDEMEISTER_PAIRS) * len(ALL_SPECS)} Reidemeister pairs, order/product laws")
    acceptance(8, not bad, detail if not bad else "; ".join(sorted(set(bad))[:10]))
    assert not bad
    assert np.all([c > 0 for c in counts.values()])
