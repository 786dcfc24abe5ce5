"""Quandle 2- and 3-cocycles stored as dense value tables."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import expr
from .algebra import (AbelianGroup, Quandle, QuandleError, RingBackend, cyclic_group,
                      is_prime, parse_quandle_spec, ring_additive_group)


class CocycleError(ValueError):
    pass


@dataclass(frozen=True)
class CocycleReport:
    ok: bool
    witness: tuple | None = None
    residual: str | None = None
    condition: str = ""

    def line(self) -> str:
        if self.ok:
            return "cocycle OK"
        return f"cocycle FAIL ({self.condition}) witness={self.witness} residual={self.residual}"


@dataclass(frozen=True, eq=False)
class Cocycle:
    """A cocycle of ``arity`` 2 or 3 with values ``values[x, y(, z)]`` in ``group``."""

    quandle: Quandle
    group: AbelianGroup
    values: np.ndarray = field(repr=False)
    spec: str = ""

    @property
    def arity(self) -> int:
        return self.values.ndim

    def __call__(self, *args) -> int:
        return int(self.values[args])

    def verify(self) -> CocycleReport:
        return verify_2cocycle(self) if self.arity == 2 else verify_3cocycle(self)


Cocycle2 = Cocycle3 = Cocycle


def _first_nonzero(residual: np.ndarray):
    bad = np.argwhere(residual != 0)
    return None if len(bad) == 0 else tuple(int(v) for v in bad[0])


def verify_2cocycle(phi: Cocycle) -> CocycleReport:
    """Exhaustive check of ``phi(x,x)=0`` and the 2-cocycle condition."""
    q, A, f = phi.quandle, phi.group, phi.values
    n = q.size
    idx = np.arange(n)
    diag = f[idx, idx]
    w = _first_nonzero(diag)
    if w is not None:
        return CocycleReport(False, (w[0], w[0]), A.format(diag[w]), "phi(x,x)=0")
    add, neg, op = A.add_table, A.neg_table, q.op
    x, y, z = idx[:, None, None], idx[None, :, None], idx[None, None, :]
    r = add[f[x, y], neg[f[x, z]]]
    r = add[r, f[op[x, y], z]]
    r = add[r, neg[f[op[x, z], op[y, z]]]]
    w = _first_nonzero(r)
    if w is not None:
        return CocycleReport(False, w, A.format(r[w]), "2-cocycle condition")
    return CocycleReport(True)


def verify_3cocycle(theta: Cocycle) -> CocycleReport:
    """Exhaustive check of the degeneracy conditions and the 3-cocycle condition.

    The ``n**4`` quadruples are processed one ``x`` slice at a time to bound memory.
    """
    q, A, f = theta.quandle, theta.group, theta.values
    n = q.size
    idx = np.arange(n)
    for name, vals, make in (
        ("theta(x,x,y)=0", f[idx[:, None], idx[:, None], idx[None, :]], lambda i, j: (i, i, j)),
        ("theta(x,y,y)=0", f[idx[:, None], idx[None, :], idx[None, :]], lambda i, j: (i, j, j)),
    ):
        w = _first_nonzero(vals)
        if w is not None:
            return CocycleReport(False, make(*w), A.format(vals[w]), name)
    add, neg, op = A.add_table, A.neg_table, q.op
    y, z, w_ = idx[:, None, None], idx[None, :, None], idx[None, None, :]
    for x in range(n):
        r = add[f[x, z, w_], neg[f[x, y, w_]]]
        r = add[r, f[x, y, z]]
        r = add[r, neg[f[op[x, y], z, w_]]]
        r = add[r, f[op[x, z], op[y, z], w_]]
        r = add[r, neg[f[op[x, w_], op[y, w_], op[z, w_]]]]
        bad = _first_nonzero(r)
        if bad is not None:
            return CocycleReport(False, (x,) + bad, A.format(r[bad]), "3-cocycle condition")
    return CocycleReport(True)


def _poly_table(q: Quandle, text: str, variables: tuple[str, ...]) -> np.ndarray:
    if q.ring is None:
        raise CocycleError(f"polynomial cocycles need an Alexander quandle, got {q.label}")
    tree = expr.parse(text, variables)
    n = q.size
    k = len(variables)
    env = {}
    for i, v in enumerate(variables):
        shape = [1] * k
        shape[i] = n
        env[v] = np.arange(n).reshape(shape)
    values = np.asarray(expr.evaluate(tree, env, RingBackend(q.ring)), dtype=np.int64)
    return np.ascontiguousarray(np.broadcast_to(values, (n,) * k))


def _finish(q: Quandle, A: AbelianGroup, values: np.ndarray, spec: str) -> Cocycle:
    values.setflags(write=False)
    cocycle = Cocycle(q, A, values, spec)
    report = cocycle.verify()
    if not report.ok:
        raise CocycleError(f"{spec} is not a cocycle on {q.label}: {report.line()}")
    return cocycle


def make_poly_cocycle2(q: Quandle, text: str) -> Cocycle:
    """2-cocycle ``f(x, y)`` evaluated in the Alexander ring of ``q``."""
    values = _poly_table(q, text, ("x", "y"))
    return _finish(q, ring_additive_group(q.ring), values, f"poly2:{text}")


def make_poly_cocycle3(q: Quandle, text: str) -> Cocycle:
    """3-cocycle ``f(x, y, z)`` evaluated in the Alexander ring of ``q``."""
    values = _poly_table(q, text, ("x", "y", "z"))
    return _finish(q, ring_additive_group(q.ring), values, f"poly3:{text}")


def mochizuki_bracket(p: int, y: int, z: int) -> int:
    """``((2z^p - y^p) - (2z - y)^p) / p`` over the integers (exact)."""
    num = (2 * z ** p - y ** p) - (2 * z - y) ** p
    if num % p:
        raise CocycleError(f"bracket not divisible by {p} at y={y}, z={z}")
    return num // p


def make_mochizuki_cocycle(p: int, q: Quandle | None = None) -> Cocycle:
    """Mochizuki's 3-cocycle on ``R_p`` with values in ``Z_p``.

    ``psi(x,y,z) = (x-y) * ((2z^p - y^p) - (2z-y)^p) / p  mod p`` using the
    representatives ``0..p-1``.
    """
    if p < 3 or not is_prime(p):
        raise CocycleError("Mochizuki's cocycle needs an odd prime")
    if q is None:
        q = parse_quandle_spec(f"dihedral:{p}")
    if q.spec != f"dihedral:{p}":
        raise CocycleError(f"mochizuki:{p} is defined on R_{p}, not {q.label}")
    values = np.empty((p, p, p), dtype=np.int64)
    for y in range(p):
        for z in range(p):
            bracket = mochizuki_bracket(p, y, z)
            for x in range(p):
                values[x, y, z] = ((x - y) * bracket) % p
    return _finish(q, cyclic_group(p), values, f"mochizuki:{p}")


def zero_cocycle(q: Quandle, arity: int, group: AbelianGroup | None = None) -> Cocycle:
    A = group or cyclic_group(2)
    return Cocycle(q, A, np.zeros((q.size,) * arity, dtype=np.int64), f"zero:{arity}")


def parse_cocycle_spec(spec: str, q: Quandle) -> Cocycle:
    """Resolve ``poly2:<expr>``, ``poly3:<expr>``, ``mochizuki:<p>``, ``zero:<arity>``
    or ``table:<path>`` on ``q``."""
    kind, _, rest = spec.strip().partition(":")
    try:
        if kind == "poly2":
            return make_poly_cocycle2(q, rest)
        if kind == "poly3":
            return make_poly_cocycle3(q, rest)
        if kind == "mochizuki":
            return make_mochizuki_cocycle(int(rest), q)
        if kind == "zero" and rest in ("2", "3"):
            return zero_cocycle(q, int(rest))
        if kind == "table":
            with open(rest) as fh:
                return parse_cocycle_table(fh.read(), q)
    except (expr.ExpressionError, QuandleError, OSError) as exc:
        raise CocycleError(f"bad cocycle spec {spec!r}: {exc}") from None
    raise CocycleError(f"unknown cocycle spec {spec!r}")


# Explicit value tables: header "cocycle <arity> <n> Z_<m>", then one line
# "x y [z] value" per input tuple.

def format_cocycle_table(c: Cocycle) -> str:
    lines = [f"cocycle {c.arity} {c.quandle.size} {c.group.label}"]
    for key in np.ndindex(*c.values.shape):
        lines.append(" ".join(str(v) for v in key) + f" {int(c.values[key])}")
    return "\n".join(lines) + "\n"


def parse_cocycle_table(text: str, q: Quandle) -> Cocycle:
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not rows or rows[0][0] != "cocycle" or len(rows[0]) != 4:
        raise CocycleError("expected header 'cocycle <arity> <n> <group>'")
    arity, n, label = int(rows[0][1]), int(rows[0][2]), rows[0][3]
    if n != q.size or arity not in (2, 3):
        raise CocycleError("table does not match the quandle")
    if q.ring is not None and label == q.ring.label:
        A = ring_additive_group(q.ring)
    elif label.startswith("Z_"):
        A = cyclic_group(int(label[2:]))
    else:
        raise CocycleError(f"unknown coefficient group {label!r}")
    values = np.full((n,) * arity, -1, dtype=np.int64)
    for row in rows[1:]:
        if len(row) != arity + 1:
            raise CocycleError(f"bad table line {' '.join(row)!r}")
        *key, v = (int(s) for s in row)
        values[tuple(key)] = v % A.order
    if (values < 0).any():
        raise CocycleError("table is missing entries")
    return _finish(q, A, values, "table")
