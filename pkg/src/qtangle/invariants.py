"""Cocycle state-sum invariants as multisets over the coefficient group.

A multiset ``{m_1 x g_1, ..., m_k x g_k}`` is written ``m_1u^g_1 + ... +
m_ku^g_k``; the weight of a coloring is the signed sum of cocycle values
over its crossings.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Mapping

import numpy as np

from .algebra import AbelianGroup, Quandle
from .cocycles import Cocycle
from .colorings import colorings, region_colorings, tangle_colorings
from .diagrams import Diagram


class GroupMismatch(ValueError):
    pass


class UniformityError(ValueError):
    """The per-boundary invariants differ, so the product formula does not apply."""

    def __init__(self, tangle: str, first, second):
        super().__init__(f"{tangle}: Phi differs between boundary data {first} and {second}")
        self.tangle = tangle
        self.witness = (first, second)


@dataclass(frozen=True, eq=False)
class InvariantMultiset:
    group: AbelianGroup
    counts: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {int(g): int(m) for g, m in sorted(self.counts.items()) if m}
        if any(m < 0 for m in clean.values()):
            raise ValueError("multiplicities must be non-negative")
        object.__setattr__(self, "counts", clean)

    @classmethod
    def from_values(cls, group: AbelianGroup, values: Iterable[int]) -> "InvariantMultiset":
        vals, mult = np.unique(np.asarray(list(values) if not isinstance(values, np.ndarray)
                                          else values, dtype=np.int64), return_counts=True)
        return cls(group, dict(zip(vals.tolist(), mult.tolist())))

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def __getitem__(self, g: int) -> int:
        return self.counts.get(int(g), 0)

    def _same_group(self, other: "InvariantMultiset") -> None:
        if self.group != other.group:
            raise GroupMismatch(f"{self.group.label} vs {other.group.label}")

    def __eq__(self, other) -> bool:
        return (isinstance(other, InvariantMultiset) and self.group == other.group
                and self.counts == other.counts)

    def __hash__(self) -> int:
        return hash((self.group.label, tuple(self.counts.items())))

    def __add__(self, other: "InvariantMultiset") -> "InvariantMultiset":
        self._same_group(other)
        return InvariantMultiset(self.group, Counter(self.counts) + Counter(other.counts))

    def __mul__(self, other: "InvariantMultiset") -> "InvariantMultiset":
        return multiset_product(self, other)

    def scaled(self, factor: int) -> "InvariantMultiset":
        return InvariantMultiset(self.group, {g: m * factor for g, m in self.counts.items()})

    def divided(self, divisor: int) -> "InvariantMultiset":
        """Exact division of every multiplicity."""
        bad = [g for g, m in self.counts.items() if m % divisor]
        if bad:
            raise ValueError(f"multiplicity of {self.group.format(bad[0])} not divisible by {divisor}")
        return InvariantMultiset(self.group, {g: m // divisor for g, m in self.counts.items()})

    def __le__(self, other: "InvariantMultiset") -> bool:
        self._same_group(other)
        return all(m <= other[g] for g, m in self.counts.items())

    def format(self) -> str:
        return format_polynomial(self)

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"InvariantMultiset({self.group.label}: {self.format()})"


def zeros(group: AbelianGroup, count: int) -> InvariantMultiset:
    return InvariantMultiset(group, {0: count})


def multiset_product(C: InvariantMultiset, D: InvariantMultiset) -> InvariantMultiset:
    """``C x D = sum m_i n_j u^(c_i + d_j)``."""
    C._same_group(D)
    out: Counter = Counter()
    add = C.group.add_table
    for c, m in C.counts.items():
        for d, n in D.counts.items():
            out[int(add[c, d])] += m * n
    return InvariantMultiset(C.group, out)


_SIMPLE_EXPONENT = re.compile(r"^[0-9]+$|^t$")


def format_polynomial(M: InvariantMultiset) -> str:
    """Polynomial notation, e.g. ``4 + 12u^(t+1)``; terms ordered by element code."""
    terms = []
    for g, m in M.counts.items():
        if g == 0:
            terms.append(str(m))
            continue
        text = M.group.format(g)
        if text == "1":
            power = "u"
        elif _SIMPLE_EXPONENT.match(text):
            power = f"u^{text}"
        else:
            power = f"u^({text})"
        terms.append(power if m == 1 else f"{m}{power}")
    return " + ".join(terms) if terms else "0"


_TERM = re.compile(r"^\s*(\d*)\s*(?:u(?:\^(?:\(([^)]*)\)|([0-9]+|t)))?)?\s*$")


def parse_polynomial(text: str, group: AbelianGroup) -> InvariantMultiset:
    """Inverse of :func:`format_polynomial`."""
    text = text.strip()
    if text == "0":
        return InvariantMultiset(group, {})
    counts: Counter = Counter()
    for chunk in text.split(" + "):
        m = _TERM.match(chunk)
        if not m or not chunk.strip():
            raise ValueError(f"cannot parse term {chunk!r}")
        coeff, paren, simple = m.groups()
        has_u = "u" in chunk
        mult = int(coeff) if coeff else 1
        if not has_u:
            counts[0] += mult
        else:
            exponent = paren if paren is not None else (simple if simple is not None else "1")
            counts[group.parse(exponent)] += mult
    return InvariantMultiset(group, counts)


# ---------------------------------------------------------------------------
# state sums


def _accumulate(group: AbelianGroup, m: int, terms) -> np.ndarray:
    add, neg = group.add_table, group.neg_table
    acc = np.zeros(m, dtype=np.int64)
    for sign, values in terms:
        acc = add[acc, values if sign > 0 else neg[values]]
    return acc


def weights_2(d: Diagram, phi: Cocycle, C: np.ndarray) -> np.ndarray:
    """Per-coloring weight ``sum eps(tau) phi(x_tau, y_tau)``."""
    f = phi.values
    terms = ((c.sign, f[C[:, c.source_arc], C[:, c.over_arc]]) for c in d.crossing_data)
    return _accumulate(phi.group, C.shape[0], terms)


def weights_3(d: Diagram, theta: Cocycle, C: np.ndarray, R: np.ndarray) -> np.ndarray:
    """Weights for every (coloring, base color) pair; returns shape ``(m, |X|)``.

    At each crossing the triple is (source region, source under-arc, over-arc).
    """
    f = theta.values
    m, n = R.shape[0], R.shape[1]
    terms = ((c.sign, f[R[:, :, c.source_face], C[:, c.source_arc, None],
                        C[:, c.over_arc, None]].reshape(-1))
             for c in d.crossing_data)
    return _accumulate(theta.group, m * n, terms).reshape(m, n)


def _trivial_knot(d: Diagram) -> bool:
    return not d.crossings


def state_sum_2(d: Diagram, phi: Cocycle, C: np.ndarray | None = None) -> InvariantMultiset:
    q = phi.quandle
    if _trivial_knot(d):
        return zeros(phi.group, q.size ** (1 + d.loops - 1 if d.loops else 1))
    if C is None:
        C = colorings(d, q)
    return InvariantMultiset.from_values(phi.group, weights_2(d, phi, C))


def state_sum_3(d: Diagram, theta: Cocycle, C: np.ndarray | None = None) -> InvariantMultiset:
    q = theta.quandle
    if _trivial_knot(d):
        comps = max(d.loops, 1)
        return zeros(theta.group, q.size ** comps * q.size)
    if C is None:
        C = colorings(d, q)
    R = region_colorings(d, q, C)
    return InvariantMultiset.from_values(theta.group, weights_3(d, theta, C, R).reshape(-1))


def knot_invariant(d: Diagram, cocycle: Cocycle, C: np.ndarray | None = None) -> InvariantMultiset:
    return state_sum_2(d, cocycle, C) if cocycle.arity == 2 else state_sum_3(d, cocycle, C)


# ---------------------------------------------------------------------------
# tangles


@dataclass(frozen=True, eq=False)
class TangleInvariant:
    """``Phi(T)`` with its per-boundary pieces.

    ``pieces`` maps ``x`` (2-cocycles) or ``(x, s)`` (3-cocycles, ``s`` the
    color of the leftmost region) to a multiset.
    """

    tangle: str
    group: AbelianGroup
    arity: int
    pieces: Mapping

    @property
    def total(self) -> InvariantMultiset:
        return reduce(lambda a, b: a + b, self.pieces.values(), InvariantMultiset(self.group))

    def __getitem__(self, key) -> InvariantMultiset:
        return self.pieces[key]

    def uniformity_witness(self):
        """``None`` when all pieces agree, else a pair of keys that differ."""
        keys = list(self.pieces)
        first = keys[0]
        for k in keys[1:]:
            if self.pieces[k] != self.pieces[first]:
                return first, k
        return None


def tangle_invariant_2(t: Diagram, phi: Cocycle) -> TangleInvariant:
    q = phi.quandle
    pieces = {}
    for x in range(q.size):
        C = tangle_colorings(t, q, x)
        pieces[x] = InvariantMultiset.from_values(phi.group, weights_2(t, phi, C))
    return TangleInvariant(t.name, phi.group, 2, pieces)


def tangle_invariant_3(t: Diagram, theta: Cocycle) -> TangleInvariant:
    q = theta.quandle
    pieces = {}
    for x in range(q.size):
        C = tangle_colorings(t, q, x)
        if not t.crossings:
            # no crossings, no faces to color: every state has weight zero
            for s in range(q.size):
                pieces[(x, s)] = zeros(theta.group, len(C))
            continue
        R = region_colorings(t, q, C, t.west_face)
        W = weights_3(t, theta, C, R)
        for s in range(q.size):
            pieces[(x, s)] = InvariantMultiset.from_values(theta.group, W[:, s])
    return TangleInvariant(t.name, theta.group, 3, pieces)


def tangle_invariant(t: Diagram, cocycle: Cocycle) -> TangleInvariant:
    return tangle_invariant_2(t, cocycle) if cocycle.arity == 2 else tangle_invariant_3(t, cocycle)


# ---------------------------------------------------------------------------
# disjoint unions


@dataclass(frozen=True)
class DisjointUnionResult:
    direct: InvariantMultiset
    formula: InvariantMultiset | None

    @property
    def value(self) -> InvariantMultiset:
        return self.direct


def _product_all(items: list[InvariantMultiset]) -> InvariantMultiset:
    return reduce(multiset_product, items)


def direct_disjoint_union(invariants: list[TangleInvariant]) -> InvariantMultiset:
    """``sum over boundary data of prod_i Phi(T_i, .)`` (same key for every tangle)."""
    group = invariants[0].group
    total = InvariantMultiset(group)
    for key in invariants[0].pieces:
        total = total + _product_all([inv.pieces[key] for inv in invariants])
    return total


def _disjoint(invariants: list[TangleInvariant], arity: int, q: Quandle,
              strict: bool) -> DisjointUnionResult:
    for inv in invariants:
        if inv.arity != arity:
            raise ValueError("cocycle arity mismatch")
    direct = direct_disjoint_union(invariants)
    witnesses = [(inv.tangle, inv.uniformity_witness()) for inv in invariants]
    bad = [(name, w) for name, w in witnesses if w is not None]
    if bad:
        if strict:
            raise UniformityError(bad[0][0], *bad[0][1])
        return DisjointUnionResult(direct, None)
    k = len(invariants)
    scale = q.size ** ((arity - 1) * (k - 1))
    formula = _product_all([inv.total for inv in invariants]).divided(scale)
    if formula != direct:
        raise AssertionError(f"product formula {formula} disagrees with direct value {direct}")
    return DisjointUnionResult(direct, formula)


def disjoint_union_2(tangles: list[Diagram], phi: Cocycle, strict: bool = True) -> DisjointUnionResult:
    """2-cocycle invariant of ``T_1 u ... u T_k`` with all boundary points colored alike."""
    return _disjoint([tangle_invariant_2(t, phi) for t in tangles], 2, phi.quandle, strict)


def disjoint_union_3(tangles: list[Diagram], theta: Cocycle, strict: bool = True) -> DisjointUnionResult:
    return _disjoint([tangle_invariant_3(t, theta) for t in tangles], 3, theta.quandle, strict)
