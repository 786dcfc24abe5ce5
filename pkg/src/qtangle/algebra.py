"""Finite quandles, Alexander rings and coefficient groups.

Elements of every finite structure are dense integer codes ``0..n-1``.  For
an Alexander ring ``Z_p[t]/(h)`` of degree ``d`` the code of
``c_0 + c_1 t + ... + c_{d-1} t^{d-1}`` is ``sum(c_i * p**i)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

from . import expr


class QuandleError(ValueError):
    """Raised when a table or presentation does not define a quandle."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % k for k in range(2, int(n ** 0.5) + 1))


# ---------------------------------------------------------------------------
# Alexander rings Z_p[t]/(h)


class AlexanderRing:
    """The ring ``Z_p[t]/(h)`` with ``h`` monic, as dense lookup tables."""

    def __init__(self, p: int, h: Sequence[int]):
        if not is_prime(p):
            raise QuandleError(f"modulus {p} is not prime")
        coeffs = [c % p for c in h]
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        if len(coeffs) < 2:
            raise QuandleError("h must have positive degree")
        if coeffs[-1] != 1:
            raise QuandleError(f"h = {format_poly(coeffs)} is not monic mod {p}")
        if coeffs[0] == 0:
            raise QuandleError(f"h(0) = 0 mod {p}: t is not invertible in Z_{p}[t]/(h)")
        self.p = p
        self.h = tuple(coeffs)
        self.degree = len(coeffs) - 1
        self.order = p ** self.degree
        n = self.order
        vectors = [self.decode(a) for a in range(n)]
        add = np.empty((n, n), dtype=np.int64)
        mul = np.empty((n, n), dtype=np.int64)
        for a in range(n):
            va = vectors[a]
            for b in range(n):
                vb = vectors[b]
                add[a, b] = self.encode([(x + y) % p for x, y in zip(va, vb)])
                mul[a, b] = self.encode(self._mulvec(va, vb))
        self.add_table = add
        self.mul_table = mul
        self.neg_table = np.array([self.encode([(-x) % p for x in v]) for v in vectors])
        self.zero = 0
        self.one = self.encode([1])
        self.t = self.encode(self._reduce([0, 1]))
        inverse = [b for b in range(n) if mul[self.t, b] == self.one]
        self.t_inv = inverse[0]
        for table in (add, mul, self.neg_table):
            table.setflags(write=False)

    def __repr__(self) -> str:
        return f"AlexanderRing(Z_{self.p}[t]/({self.modulus_text()}))"

    def modulus_text(self) -> str:
        return format_poly(self.h)

    @property
    def label(self) -> str:
        return f"Z_{self.p}[t]/({self.modulus_text()})"

    def encode(self, vector: Iterable[int]) -> int:
        code = 0
        for i, c in enumerate(vector):
            if i >= self.degree:
                raise ValueError("vector longer than ring degree")
            code += (c % self.p) * self.p ** i
        return code

    def decode(self, code: int) -> list[int]:
        if not 0 <= code < self.p ** self.degree:
            raise ValueError(f"code {code} out of range")
        out = []
        for _ in range(self.degree):
            code, r = divmod(code, self.p)
            out.append(r)
        return out

    def _reduce(self, poly: Sequence[int]) -> list[int]:
        p, d, h = self.p, self.degree, self.h
        work = [c % p for c in poly]
        for k in range(len(work) - 1, d - 1, -1):
            c = work[k]
            if c:
                for i in range(d + 1):
                    work[k - d + i] = (work[k - d + i] - c * h[i]) % p
        work = work[:d]
        return work + [0] * (d - len(work))

    def _mulvec(self, a: Sequence[int], b: Sequence[int]) -> list[int]:
        prod = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        return self._reduce(prod)

    def from_int(self, value: int) -> int:
        return self.encode([value % self.p])

    def element_from_poly(self, coeffs: Sequence[int]) -> int:
        return self.encode(self._reduce(list(coeffs)))

    def format(self, code: int) -> str:
        return format_poly(self.decode(int(code)))

    def parse(self, text: str) -> int:
        return self.element_from_poly(expr.univariate_coefficients(text, "t"))


def format_poly(coeffs: Sequence[int], var: str = "t") -> str:
    """Format a coefficient list (constant term first), e.g. ``[2, 2] -> '2t+2'``."""
    parts: list[str] = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c == 0:
            continue
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            power = var if k == 1 else f"{var}^{k}"
            body = power if mag == 1 else f"{mag}{power}"
        if not parts:
            parts.append(body if c > 0 else "-" + body)
        else:
            parts.append(("+" if c > 0 else "-") + body)
    return "".join(parts) if parts else "0"


class RingBackend(expr.Backend):
    """Evaluate expressions elementwise on numpy arrays of ring codes."""

    def __init__(self, ring: AlexanderRing):
        self.ring = ring

    def const(self, value: int):
        return self.ring.from_int(value)

    def add(self, a, b):
        return self.ring.add_table[a, b]

    def neg(self, a):
        return self.ring.neg_table[a]

    def mul(self, a, b):
        return self.ring.mul_table[a, b]


# ---------------------------------------------------------------------------
# Coefficient groups


@dataclass(frozen=True, eq=False)
class AbelianGroup:
    """A finite abelian group with elements ``0..order-1`` (0 is the identity)."""

    label: str
    add_table: np.ndarray = field(repr=False)
    neg_table: np.ndarray = field(repr=False)
    formatter: Callable[[int], str] = field(repr=False)
    parser: Callable[[str], int] = field(repr=False)

    @property
    def order(self) -> int:
        return len(self.neg_table)

    def __eq__(self, other) -> bool:
        return isinstance(other, AbelianGroup) and other.label == self.label

    def __hash__(self) -> int:
        return hash(self.label)

    def add(self, a, b):
        return self.add_table[a, b]

    def neg(self, a):
        return self.neg_table[a]

    def format(self, g: int) -> str:
        return self.formatter(int(g))

    def parse(self, text: str) -> int:
        return self.parser(text)

    def verify(self) -> bool:
        """Exhaustively check the abelian group axioms."""
        n = self.order
        add = self.add_table
        idx = np.arange(n)
        if not (np.array_equal(add[0], idx) and np.array_equal(add[:, 0], idx)):
            return False
        if not np.array_equal(add, add.T):
            return False
        if not np.all(add[idx, self.neg_table] == 0):
            return False
        return bool(np.all(add[add[:, :, None], idx[None, None, :]]
                           == add[idx[:, None, None], add[None, :, :]]))


@lru_cache(maxsize=None)
def cyclic_group(m: int) -> AbelianGroup:
    if m < 1:
        raise ValueError("cyclic group order must be positive")
    idx = np.arange(m)
    add = (idx[:, None] + idx[None, :]) % m
    neg = (-idx) % m
    add.setflags(write=False)
    neg.setflags(write=False)

    def parse(text: str) -> int:
        return int(expr.univariate_coefficients(text, "t")[0]) % m

    return AbelianGroup(f"Z_{m}", add, neg, str, parse)


def ring_additive_group(ring: AlexanderRing) -> AbelianGroup:
    return AbelianGroup(ring.label, ring.add_table, ring.neg_table, ring.format, ring.parse)


# ---------------------------------------------------------------------------
# Quandles


@dataclass(frozen=True)
class AxiomReport:
    """Outcome of an exhaustive axiom check; witnesses are element tuples."""

    idempotent: tuple[bool, tuple | None]
    right_invertible: tuple[bool, tuple | None]
    self_distributive: tuple[bool, tuple | None]

    @property
    def ok(self) -> bool:
        return self.idempotent[0] and self.right_invertible[0] and self.self_distributive[0]

    def lines(self) -> list[str]:
        out = []
        for name, (ok, witness) in (("I", self.idempotent), ("II", self.right_invertible),
                                    ("III", self.self_distributive)):
            out.append(f"axiom {name}: " + ("pass" if ok else f"FAIL witness={witness}"))
        return out


def verify_quandle_axioms(table) -> AxiomReport:
    """Check axioms I-III of a square operation table (or a :class:`Quandle`)."""
    op = np.asarray(table.op if isinstance(table, Quandle) else table, dtype=np.int64)
    n = op.shape[0]
    if op.shape != (n, n) or op.min(initial=0) < 0 or op.max(initial=0) >= n:
        raise QuandleError("operation table must be square with entries in range")
    idx = np.arange(n)

    bad = np.nonzero(op[idx, idx] != idx)[0]
    ax1 = (True, None) if bad.size == 0 else (False, (int(bad[0]),))

    ax2: tuple[bool, tuple | None] = (True, None)
    for b in range(n):
        column = op[:, b]
        if len(np.unique(column)) != n:
            seen: dict[int, int] = {}
            for a in range(n):
                c = int(column[a])
                if c in seen:
                    ax2 = (False, (seen[c], a, b))
                    break
                seen[c] = a
            break

    lhs = op[op[:, :, None], idx[None, None, :]]        # (a*b)*c
    rhs = op[op[:, None, :], op[None, :, :]]            # (a*c)*(b*c)
    bad3 = np.argwhere(lhs != rhs)
    ax3 = (True, None) if len(bad3) == 0 else (False, tuple(int(v) for v in bad3[0]))
    return AxiomReport(ax1, ax2, ax3)


@dataclass(frozen=True, eq=False)
class Quandle:
    """A finite quandle given by its Cayley table ``op[a, b] = a * b``.

    ``inv_op[a, b]`` is the unique ``c`` with ``c * b = a``.  ``ring`` is set
    for Alexander quandles, whose operation is ``a*b = t a + (1-t) b``.
    """

    label: str
    op: np.ndarray = field(repr=False)
    inv_op: np.ndarray = field(repr=False)
    ring: AlexanderRing | None = field(default=None, repr=False)
    spec: str | None = None

    @property
    def size(self) -> int:
        return self.op.shape[0]

    def __len__(self) -> int:
        return self.size

    def star(self, a, b):
        return self.op[a, b]

    def unstar(self, a, b):
        return self.inv_op[a, b]

    def format(self, x: int) -> str:
        return self.ring.format(x) if self.ring is not None else str(int(x))

    @classmethod
    def from_table(cls, table, label: str = "quandle", ring=None, spec=None) -> "Quandle":
        op = np.array(table, dtype=np.int64)
        report = verify_quandle_axioms(op)
        if not report.ok:
            raise QuandleError(f"{label}: " + "; ".join(report.lines()))
        n = op.shape[0]
        inv = np.empty_like(op)
        cols = np.arange(n)
        for b in range(n):
            inv[op[:, b], b] = cols
        op.setflags(write=False)
        inv.setflags(write=False)
        return cls(label, op, inv, ring, spec)


def quandle_unstar(a: int, b: int, q: Quandle) -> int:
    return int(q.inv_op[a, b])


def make_dihedral(n: int) -> Quandle:
    """The dihedral quandle ``R_n``: ``i * j = 2j - i mod n``."""
    if n < 1:
        raise QuandleError("dihedral quandle needs n >= 1")
    idx = np.arange(n)
    table = (2 * idx[None, :] - idx[:, None]) % n
    return Quandle.from_table(table, f"R_{n}", spec=f"dihedral:{n}")


def make_alexander(p: int, h: Sequence[int] | str) -> Quandle:
    """Alexander quandle on ``Z_p[t]/(h)``; ``h`` is a coefficient list or text."""
    coeffs = expr.univariate_coefficients(h, "t") if isinstance(h, str) else list(h)
    ring = AlexanderRing(p, coeffs)
    one_minus_t = ring.add_table[ring.one, ring.neg_table[ring.t]]
    ta = ring.mul_table[ring.t]                       # t*a for every a
    sb = ring.mul_table[one_minus_t]                  # (1-t)*b for every b
    table = ring.add_table[ta[:, None], sb[None, :]]
    spec = f"alexander:{p}:{ring.modulus_text()}"
    return Quandle.from_table(table, ring.label, ring=ring, spec=spec)


def parse_quandle_spec(spec: str) -> Quandle:
    """Build a quandle from ``dihedral:<n>``, ``alexander:<p>:<h(t)>`` or
    ``cayley:<path>`` (a Cayley table file, see :func:`parse_cayley`)."""
    spec = spec.strip()
    if spec.startswith("cayley:"):
        try:
            with open(spec[7:]) as fh:
                return replace(parse_cayley(fh.read()), spec=spec)
        except OSError as exc:
            raise QuandleError(f"bad quandle spec {spec!r}: {exc}") from None
    return _quandle_from_spec(spec)


@lru_cache(maxsize=64)
def _quandle_from_spec(spec: str) -> Quandle:
    kind, _, rest = spec.partition(":")
    try:
        if kind == "dihedral":
            return make_dihedral(int(rest))
        if kind == "alexander":
            p, _, h = rest.partition(":")
            return make_alexander(int(p), h)
    except (ValueError, expr.ExpressionError) as exc:
        raise QuandleError(f"bad quandle spec {spec!r}: {exc}") from None
    raise QuandleError(f"unknown quandle spec {spec!r}")


def coefficient_group_for(q: Quandle) -> AbelianGroup:
    """The default coefficient group: the ring itself for Alexander quandles."""
    if q.ring is not None:
        return ring_additive_group(q.ring)
    return cyclic_group(q.size)


# ---------------------------------------------------------------------------
# Cayley table text format


def format_cayley(q: Quandle, name: str | None = None) -> str:
    lines = [f"quandle {name or q.label.replace(' ', '')} {q.size}"]
    lines += [" ".join(str(int(v)) for v in row) for row in q.op]
    return "\n".join(lines) + "\n"


def parse_cayley(text: str) -> Quandle:
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows or rows[0][0] != "quandle" or len(rows[0]) != 3:
        raise QuandleError("expected header 'quandle <name> <n>'")
    name, n = rows[0][1], int(rows[0][2])
    body = rows[1:]
    if len(body) != n or any(len(r) != n for r in body):
        raise QuandleError(f"expected {n} rows of {n} entries")
    table = [[int(v) for v in r] for r in body]
    if any(not 0 <= v < n for r in table for v in r):
        raise QuandleError("table entry out of range")
    return Quandle.from_table(table, name)
