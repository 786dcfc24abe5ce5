import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qtangle.algebra import (AlexanderRing, Quandle, QuandleError, coefficient_group_for,
                             cyclic_group, format_cayley, make_alexander, make_dihedral,
                             parse_cayley, parse_quandle_spec, quandle_unstar,
                             ring_additive_group, verify_quandle_axioms)

SPECS = ["dihedral:3", "dihedral:5", "dihedral:7", "alexander:2:t^2+t+1",
         "alexander:3:t^2-t+1", "alexander:5:t^2-t+1", "alexander:7:t^2-t+1"]


@pytest.mark.parametrize("spec", SPECS)
def test_axioms_pass(spec):
    q = parse_quandle_spec(spec)
    report = verify_quandle_axioms(q)
    assert report.ok, report.lines()


def test_sizes():
    assert [parse_quandle_spec(s).size for s in SPECS] == [3, 5, 7, 4, 9, 25, 49]


def test_dihedral_rule():
    q = make_dihedral(5)
    for i in range(5):
        for j in range(5):
            assert q.op[i, j] == (2 * j - i) % 5


def _poly_mod(coeffs, h, p):
    """Reduce a coefficient list modulo the monic polynomial ``h`` over F_p."""
    work = [c % p for c in coeffs]
    d = len(h) - 1
    for k in range(len(work) - 1, d - 1, -1):
        c = work[k]
        if c:
            for i in range(d + 1):
                work[k - d + i] = (work[k - d + i] - c * h[i]) % p
    return (work + [0] * d)[:d]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([(2, [1, 1, 1]), (3, [1, -1, 1]), (5, [1, -1, 1]), (7, [1, -1, 1])]),
       st.data())
def test_alexander_operation_matches_polynomial_arithmetic(case, data):
    p, h = case
    q = make_alexander(p, h)
    ring = q.ring
    a = data.draw(st.integers(0, q.size - 1))
    b = data.draw(st.integers(0, q.size - 1))
    va, vb = ring.decode(a), ring.decode(b)
    # t*a + (1 - t)*b, with elements as a0 + a1 t
    prod = [0] + list(va)
    one_minus_t = [(vb[0]) % p, (vb[1] - vb[0]) % p, (-vb[1]) % p]
    expect = _poly_mod([x + y for x, y in zip(prod + [0], one_minus_t)], h, p)
    assert ring.decode(int(q.op[a, b])) == expect


def test_non_quandle_rejected_with_witness():
    table = [[0, 0], [0, 1]]  # column 0 is not a bijection
    report = verify_quandle_axioms(table)
    assert not report.ok
    assert not report.right_invertible[0]
    assert report.right_invertible[1] is not None
    with pytest.raises(QuandleError):
        Quandle.from_table(table)


def test_not_self_distributive():
    # idempotent and right-invertible, but (0*1)*2 != (0*2)*(1*2)
    table = [[0, 2, 1], [1, 1, 0], [2, 0, 2]]
    report = verify_quandle_axioms(table)
    assert report.idempotent[0] and report.right_invertible[0]
    assert not report.self_distributive[0]


def test_unstar_inverts_star():
    q = parse_quandle_spec("alexander:3:t^2-t+1")
    for a in range(q.size):
        for b in range(q.size):
            assert quandle_unstar(int(q.op[a, b]), b, q) == a


@pytest.mark.parametrize("spec", SPECS)
def test_coefficient_groups(spec):
    q = parse_quandle_spec(spec)
    A = coefficient_group_for(q)
    assert A.verify()
    assert A.order == q.size


def test_ring_format_parse_round_trip():
    ring = AlexanderRing(5, [1, -1, 1])
    A = ring_additive_group(ring)
    for g in range(A.order):
        assert A.parse(A.format(g)) == g
    assert A.format(A.parse("2t+1")) == "2t+1"
    assert A.format(A.parse("t^2")) == "t+4"  # t^2 = t - 1


def test_cyclic_group():
    Z = cyclic_group(7)
    assert Z.verify()
    assert Z.parse("3") == 3 and Z.format(4) == "4"


@pytest.mark.parametrize("bad", ["foo:3", "dihedral:x", "alexander:4", "alexander:3:"])
def test_bad_specs(bad):
    with pytest.raises(QuandleError):
        parse_quandle_spec(bad)


def test_cayley_round_trip(tmp_path):
    q = parse_quandle_spec("dihedral:5")
    text = format_cayley(q)
    again = parse_cayley(text)
    assert np.array_equal(again.op, q.op)
    path = tmp_path / "r5.txt"
    path.write_text(text)
    assert np.array_equal(parse_quandle_spec(f"cayley:{path}").op, q.op)


def test_cayley_errors():
    with pytest.raises(QuandleError):
        parse_cayley("quandle x 2\n0 0\n")
    with pytest.raises(QuandleError):
        parse_cayley("quandle x 2\n0 5\n1 1\n")
    with pytest.raises(QuandleError):
        parse_quandle_spec("cayley:/nonexistent/file")
