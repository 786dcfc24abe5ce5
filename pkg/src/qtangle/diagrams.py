"""Planar diagrams of oriented knots, links and 4-ended tangles.

A diagram is stored as an *unoriented* planar code plus an optional
orientation:

* ``crossings[i] = (e0, e1, e2, e3)`` lists the edge labels around crossing
  ``i`` counterclockwise; ``e0``/``e2`` are the ends of the under-strand and
  ``e1``/``e3`` the ends of the over-strand.
* ``orientation[i] = (under_forward, over_forward)`` says whether the
  under-strand runs ``e0 -> e2`` and the over-strand ``e1 -> e3``.
* Tangles carry ``boundary = (NW, NE, SW, SE)`` edge labels and
  ``boundary_in`` flags (True when the strand enters the tangle there).

The oriented PD view (:attr:`Diagram.pd`) lists ``(a, b, c, d, sign)`` with
``a`` the incoming under-edge, counterclockwise, and ``sign = +1`` when the
over-strand leaves through ``b``.

Rational tangles follow the twisting construction: ``R(a1, a2, ...)``
starts from two vertical arcs and alternately stacks ``|a1|`` crossings at
the bottom, adds ``|a2|`` crossings at the right, and so on.  With this
convention ``R(a)`` is a vertical twist column (fraction ``1/a``), ``N``
joins NW-NE and SW-SE, and ``D`` joins NW-SW and NE-SE; thus ``D(R(3))`` is
a trefoil while ``N(R(3))`` is an unknot diagram.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Sequence

POSITIONS = ("NW", "NE", "SW", "SE")
# Endpoints in counterclockwise order around the tangle disk, starting at NE.
_CCW_BOUNDARY = ("NE", "NW", "SW", "SE")
# Slot order of the virtual vertex at infinity used for face tracing.
_B_SLOTS = (1, 3, 2, 0)  # indices into POSITIONS: NE, SE, SW, NW

# Sign of the single crossing stacked or added by a positive twist.  Pinned
# by the closure identities of the tangle table (see tests/test_diagrams.py).
TWIST_SIGN = +1


class DiagramError(ValueError):
    pass


class OrientationError(DiagramError):
    pass


@dataclass(frozen=True)
class Face:
    """A face as the cyclic list of half-edges ``(vertex, slot)`` bounding it.

    Vertex ``-1`` is the virtual boundary vertex of a tangle.
    """

    index: int
    corners: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class CrossingData:
    """Arc-level data of one oriented crossing."""

    sign: int
    in_arc: int       # incoming under-arc
    out_arc: int      # outgoing under-arc
    over_arc: int
    source_arc: int   # under-arc the over-arc's normal points away from
    target_arc: int
    source_face: int  # region both normals point away from


@dataclass(frozen=True, eq=False)
class Diagram:
    crossings: tuple[tuple[int, int, int, int], ...]
    orientation: tuple[tuple[bool, bool], ...] | None = None
    boundary: tuple[int, int, int, int] | None = None
    boundary_in: tuple[bool, bool, bool, bool] | None = None
    loops: int = 0
    name: str = ""
    variant: str = ""
    meta: dict = field(default_factory=dict, compare=False, repr=False)

    # -- basic structure -------------------------------------------------

    @property
    def is_tangle(self) -> bool:
        return self.boundary is not None

    @property
    def is_oriented(self) -> bool:
        return self.orientation is not None and (not self.is_tangle or self.boundary_in is not None)

    @property
    def num_crossings(self) -> int:
        return len(self.crossings)

    def __repr__(self) -> str:
        kind = "Tangle" if self.is_tangle else "Knot"
        extra = f" {self.variant}" if self.variant else ""
        return f"<{kind} {self.name or '?'}{extra}: {self.num_crossings} crossings>"

    @cached_property
    def edges(self) -> tuple[int, ...]:
        seen: dict[int, None] = {}
        for t in self.crossings:
            for e in t:
                seen.setdefault(e, None)
        for e in self.boundary or ():
            seen.setdefault(e, None)
        return tuple(seen)

    @cached_property
    def ends(self) -> dict[int, list[tuple[int, int]]]:
        """Edge label -> its two ends ``(vertex, slot)``; boundary ends use vertex -1."""
        ends: dict[int, list[tuple[int, int]]] = {}
        for v, t in enumerate(self.crossings):
            for k, e in enumerate(t):
                ends.setdefault(e, []).append((v, k))
        if self.boundary is not None:
            for k, e in enumerate(self.boundary):
                ends.setdefault(e, []).append((-1, k))
        return ends

    def validate(self) -> None:
        """Check edge incidences, orientation consistency and the Euler relation."""
        for e, where in self.ends.items():
            if len(where) != 2:
                raise DiagramError(f"{self.name}: edge {e} has {len(where)} ends (need 2)")
        if self.orientation is not None:
            if len(self.orientation) != len(self.crossings):
                raise DiagramError("orientation length mismatch")
            if self.is_tangle and self.boundary_in is None:
                raise DiagramError("oriented tangle needs boundary directions")
            for e, where in self.ends.items():
                tails = sum(self._is_tail(end) for end in where)
                if tails != 1:
                    raise OrientationError(f"{self.name}: edge {e} is not consistently oriented")
            if self.is_tangle and sum(self.boundary_in) != 2:
                raise OrientationError(f"{self.name}: need two inward and two outward ends")
        if self.crossings:
            self.faces  # runs the Euler check

    def _is_tail(self, end: tuple[int, int]) -> bool:
        v, k = end
        if v < 0:
            return self.boundary_in[k]
        under_fwd, over_fwd = self.orientation[v]
        if k in (0, 2):
            return (k == 2) == under_fwd
        return (k == 3) == over_fwd

    # -- oriented views --------------------------------------------------

    def _pos_to_slot(self, v: int) -> tuple[int, int, int, int]:
        under_fwd = self.orientation[v][0]
        return (0, 1, 2, 3) if under_fwd else (2, 3, 0, 1)

    @cached_property
    def signs(self) -> tuple[int, ...]:
        self._need_orientation()
        return tuple(+1 if u != o else -1 for u, o in self.orientation)

    @cached_property
    def pd(self) -> tuple[tuple[int, int, int, int, int], ...]:
        self._need_orientation()
        out = []
        for v, t in enumerate(self.crossings):
            a, b, c, d = (t[s] for s in self._pos_to_slot(v))
            out.append((a, b, c, d, self.signs[v]))
        return tuple(out)

    def _need_orientation(self) -> None:
        if self.orientation is None:
            raise OrientationError(f"{self.name or 'diagram'} is not oriented")

    @cached_property
    def writhe(self) -> int:
        return sum(self.signs)

    # -- arcs ------------------------------------------------------------

    @cached_property
    def arc_of_edge(self) -> dict[int, int]:
        """Over-arcs: edges joined through over-crossings, numbered by first appearance."""
        parent = {e: e for e in self.edges}

        def find(e):
            while parent[e] != e:
                parent[e] = parent[parent[e]]
                e = parent[e]
            return e

        for t in self.crossings:
            ra, rb = find(t[1]), find(t[3])
            if ra != rb:
                parent[rb] = ra
        numbering: dict[int, int] = {}
        out = {}
        for e in self.edges:
            out[e] = numbering.setdefault(find(e), len(numbering))
        return out

    @property
    def num_arcs(self) -> int:
        return len(set(self.arc_of_edge.values())) + self.loops

    @cached_property
    def boundary_arcs(self) -> tuple[int, ...]:
        if self.boundary is None:
            return ()
        return tuple(self.arc_of_edge[e] for e in self.boundary)

    @cached_property
    def crossing_data(self) -> tuple[CrossingData, ...]:
        arc = self.arc_of_edge
        out = []
        for v, (a, b, c, d, s) in enumerate(self.pd):
            slots = self._pos_to_slot(v)
            if s > 0:
                src, tgt = arc[a], arc[c]
                corner = slots[0]   # between a and b
            else:
                src, tgt = arc[c], arc[a]
                corner = slots[1]   # between b and c
            out.append(CrossingData(s, arc[a], arc[c], arc[b], src, tgt,
                                    self.face_of_corner[(v, corner)]))
        return tuple(out)

    # -- faces -----------------------------------------------------------

    def _slots(self, v: int) -> tuple[int, ...]:
        if v < 0:
            return tuple(self.boundary[k] for k in _B_SLOTS)
        return self.crossings[v]

    def _twin(self, v: int, k: int) -> tuple[int, int]:
        e = self._slots(v)[k]
        here = (v, _B_SLOTS[k]) if v < 0 else (v, k)
        a, b = self.ends[e]
        other = b if a == here else a
        if other[0] < 0:
            return (-1, _B_SLOTS.index(other[1]))
        return other

    @cached_property
    def faces(self) -> tuple[Face, ...]:
        """Faces of the 4-valent planar graph by corner tracing (face on the left)."""
        if not self.crossings:
            raise DiagramError("faces undefined for a diagram without crossings")
        vertices = list(range(len(self.crossings)))
        if self.is_tangle:
            vertices.append(-1)
        unused = {(v, k) for v in vertices for k in range(4)}
        faces = []
        for start in sorted(unused, key=lambda h: (h[0] < 0, h)):
            if start not in unused:
                continue
            corners = []
            h = start
            while h in unused:
                unused.discard(h)
                corners.append(h)
                v2, k2 = self._twin(*h)
                h = (v2, (k2 - 1) % 4)
            if h != start:
                raise DiagramError(f"{self.name}: inconsistent planar structure")
            faces.append(Face(len(faces), tuple(corners)))
        V = len(vertices)
        E = len(self.edges)
        if self.loops or V - E + len(faces) != 2:
            raise DiagramError(f"{self.name}: Euler check failed "
                               f"(V={V}, E={E}, F={len(faces)}); diagram is not planar/connected")
        return tuple(faces)

    @cached_property
    def face_of_corner(self) -> dict[tuple[int, int], int]:
        """Half-edge leaving ``(vertex, slot)`` -> index of the face on its left.

        For a crossing that face is the corner between ``slot`` and ``slot+1``.
        """
        out = {}
        for f in self.faces:
            for h in f.corners:
                out[h] = f.index
        return out

    @cached_property
    def edge_faces(self) -> dict[int, tuple[int, int]]:
        """Oriented edge -> (face on its right, face on its left)."""
        out = {}
        for e, (end1, end2) in self.ends.items():
            h1, h2 = self._half(end1), self._half(end2)
            if self._is_tail(end1):
                out[e] = (self.face_of_corner[h2], self.face_of_corner[h1])
            else:
                out[e] = (self.face_of_corner[h1], self.face_of_corner[h2])
        return out

    def _half(self, end):
        v, k = end
        return (-1, _B_SLOTS.index(k)) if v < 0 else end

    @cached_property
    def west_face(self) -> int:
        """The leftmost boundary region of a tangle (between NW and SW)."""
        if not self.is_tangle:
            raise DiagramError("not a tangle")
        # leaving the virtual vertex through SW, the face on the left lies
        # between SW and the next slot NW
        return self.face_of_corner[(-1, _B_SLOTS.index(2))]

    @property
    def base_face(self) -> int:
        return self.west_face if self.is_tangle else 0


# ---------------------------------------------------------------------------
# construction helpers


def _canonical(d: Diagram, **changes) -> Diagram:
    """Relabel edges 0..E-1 in order of appearance."""
    mapping: dict[int, int] = {}
    for t in d.crossings:
        for e in t:
            mapping.setdefault(e, len(mapping))
    for e in d.boundary or ():
        mapping.setdefault(e, len(mapping))
    crossings = tuple(tuple(mapping[e] for e in t) for t in d.crossings)
    boundary = None if d.boundary is None else tuple(mapping[e] for e in d.boundary)
    return replace(d, crossings=crossings, boundary=boundary, meta=dict(d.meta), **changes)


def from_pd(pd: Iterable[Sequence[int]], name: str = "", boundary=None, boundary_in=None,
            variant: str = "", loops: int = 0) -> Diagram:
    """Build a diagram from oriented PD tuples ``(a, b, c, d, sign)``."""
    crossings = []
    orientation = []
    for row in pd:
        a, b, c, d, s = row
        if s not in (1, -1):
            raise DiagramError(f"bad crossing sign {s}")
        crossings.append((a, b, c, d))
        orientation.append((True, s == -1))
    d = Diagram(tuple(crossings), tuple(orientation),
                None if boundary is None else tuple(boundary),
                None if boundary_in is None else tuple(boundary_in), loops, name, variant)
    d.validate()
    return d


@dataclass(frozen=True)
class BraidWord:
    strands: int
    word: tuple[int, ...]

    def __post_init__(self):
        for g in self.word:
            if g == 0 or not 1 <= abs(g) < self.strands:
                raise DiagramError(f"generator {g} invalid on {self.strands} strands")

    @classmethod
    def parse(cls, text: str) -> "BraidWord":
        parts = text.split()
        try:
            return cls(int(parts[0]), tuple(int(x) for x in parts[1:]))
        except (ValueError, IndexError):
            raise DiagramError(f"malformed braid {text!r}") from None


def from_braid(w: BraidWord | Sequence[int], strands: int | None = None, name: str = "") -> Diagram:
    """Closure of a braid, strands oriented downward.

    ``sigma_i`` (generator ``+i``) is a positive crossing between the strands
    at positions ``i`` and ``i+1``.
    """
    if not isinstance(w, BraidWord):
        w = BraidWord(strands or (max(abs(g) for g in w) + 1), tuple(w))
    if not w.word:
        raise DiagramError("empty braid word")
    current = list(range(w.strands))  # edge currently hanging at each position
    top = list(current)
    next_edge = w.strands
    pd = []
    for g in w.word:
        i = abs(g) - 1
        left, right = current[i], current[i + 1]
        new_left, new_right = next_edge, next_edge + 1
        next_edge += 2
        if g > 0:
            pd.append([left, new_left, new_right, right, +1])
        else:
            pd.append([right, left, new_left, new_right, -1])
        current[i], current[i + 1] = new_left, new_right
    untouched = [k for k in range(w.strands) if current[k] == top[k]]
    if untouched:
        raise DiagramError(f"braid closure is split (strand {untouched[0] + 1} has no crossings)")
    rename = {current[k]: top[k] for k in range(w.strands)}
    pd = [[rename.get(e, e) for e in row[:4]] + [row[4]] for row in pd]
    d = from_pd(pd, name=name)
    return _canonical(d)


# ---------------------------------------------------------------------------
# tangles


def _glue(parts: Sequence[Diagram], joins: Sequence[tuple[tuple[int, int], tuple[int, int]]],
          new_boundary: Sequence[tuple[int, int]] | None, name: str = "") -> Diagram:
    """Glue boundary endpoints ``(part, position)`` pairwise.

    ``new_boundary`` lists, for NW, NE, SW, SE, which old endpoint becomes
    the new one (``None`` for a closed result).
    """
    offset = 0
    crossings: list[tuple[int, ...]] = []
    orientation: list[tuple[bool, bool]] | None = []
    shifted_boundary = []
    loops = 0
    for d in parts:
        base = offset
        crossings += [tuple(e + base for e in t) for t in d.crossings]
        if orientation is not None and d.orientation is not None:
            orientation += list(d.orientation)
        else:
            orientation = None
        shifted_boundary.append(tuple(e + base for e in d.boundary))
        offset += max(d.edges, default=-1) + 1
        loops += d.loops
    oriented = orientation is not None and all(d.boundary_in is not None for d in parts)

    parent: dict[int, int] = {}

    def find(e):
        parent.setdefault(e, e)
        while parent[e] != e:
            parent[e] = parent[parent[e]]
            e = parent[e]
        return e

    for (i, pi), (j, pj) in joins:
        if oriented and parts[i].boundary_in[pi] == parts[j].boundary_in[pj]:
            raise OrientationError(
                f"cannot join {POSITIONS[pi]} and {POSITIONS[pj]}: both "
                f"{'in' if parts[i].boundary_in[pi] else 'out'}")
        a, b = find(shifted_boundary[i][pi]), find(shifted_boundary[j][pj])
        if a == b:
            loops += 1  # joining the two ends of one strand closes it up
        else:
            parent[b] = a
    crossings = [tuple(find(e) for e in t) for t in crossings]
    boundary = boundary_in = None
    if new_boundary is not None:
        boundary = tuple(find(shifted_boundary[i][p]) for i, p in new_boundary)
        if oriented:
            boundary_in = tuple(parts[i].boundary_in[p] for i, p in new_boundary)
    d = Diagram(tuple(crossings), tuple(orientation) if oriented else None,
                boundary, boundary_in, loops, name)
    return _canonical(d)


def _tile(sign: int) -> Diagram:
    """One crossing as a tangle; sign +1 puts the NE-SW strand over."""
    NW, NE, SW, SE = 0, 1, 2, 3
    t = (NW, SW, SE, NE) if sign * TWIST_SIGN > 0 else (NE, NW, SW, SE)
    return Diagram((t,), None, (NW, NE, SW, SE), None, 0, f"[{sign}]")


def infinity_tangle() -> Diagram:
    """Two vertical arcs NW-SW and NE-SE."""
    return Diagram((), None, (0, 1, 0, 1), None, 0, "R()")


def zero_tangle() -> Diagram:
    """Two horizontal arcs NW-NE and SW-SE, the identity for tangle addition."""
    return Diagram((), None, (0, 0, 1, 1), None, 0, "[0]")


def vstack(top: Diagram, bottom: Diagram, name: str = "") -> Diagram:
    """Place ``top`` above ``bottom`` (vertical tangle product)."""
    return _glue([top, bottom], [((0, 2), (1, 0)), ((0, 3), (1, 1))],
                 [(0, 0), (0, 1), (1, 2), (1, 3)], name)


def tangle_add(t1: Diagram, t2: Diagram, name: str = "") -> Diagram:
    """``T1 + T2``: NE of T1 joins NW of T2 and SE of T1 joins SW of T2.

    When only one summand is oriented the other is oriented to match, so
    ``T + R(1)`` keeps the orientation of ``T``.
    """
    if t1.is_oriented and not t2.is_oriented:
        t2 = orient(t2, [(0, not t1.boundary_in[1]), (2, not t1.boundary_in[3])])
    elif t2.is_oriented and not t1.is_oriented:
        t1 = orient(t1, [(1, not t2.boundary_in[0]), (3, not t2.boundary_in[2])])
    return _glue([t1, t2], [((0, 1), (1, 0)), ((0, 3), (1, 2))],
                 [(0, 0), (1, 1), (0, 2), (1, 3)], name)


def rational_tangle(*twists: int) -> Diagram:
    """Rational tangle ``R(a1, a2, ...)`` (unoriented).

    Starting from two vertical arcs, odd-numbered entries twist the bottom
    endpoints (stacking crossings below) and even-numbered entries twist the
    right endpoints (adding crossings at the right).
    """
    t = infinity_tangle()
    for i, a in enumerate(twists):
        tile = _tile(1 if a > 0 else -1)
        for _ in range(abs(a)):
            t = vstack(t, tile) if i % 2 == 0 else tangle_add(t, tile)
    return replace(t, name=f"R({','.join(str(a) for a in twists)})")


def rotate(t: Diagram, name: str = "") -> Diagram:
    """Quarter turn counterclockwise: the endpoint at NE moves to NW, and so on."""
    if not t.is_tangle:
        raise DiagramError("rotate needs a tangle")
    perm = (1, 3, 0, 2)  # new NW, NE, SW, SE come from old NE, SE, NW, SW
    boundary = tuple(t.boundary[k] for k in perm)
    boundary_in = None if t.boundary_in is None else tuple(t.boundary_in[k] for k in perm)
    return replace(t, boundary=boundary, boundary_in=boundary_in, variant="",
                   name=name or f"rot({t.name})", meta={})


def numerator(t: Diagram, name: str = "") -> Diagram:
    """``N(T)``: join NW to NE and SW to SE."""
    if not t.is_tangle:
        raise DiagramError("numerator needs a tangle")
    return _glue([t], [((0, 0), (0, 1)), ((0, 2), (0, 3))], None, name or f"N({t.name})")


def denominator(t: Diagram, name: str = "") -> Diagram:
    """``D(T)``: join NW to SW and NE to SE."""
    if not t.is_tangle:
        raise DiagramError("denominator needs a tangle")
    return _glue([t], [((0, 0), (0, 2)), ((0, 1), (0, 3))], None, name or f"D({t.name})")


def mirror(d: Diagram, name: str | None = None) -> Diagram:
    """Switch every crossing; signs negate, faces are unchanged."""
    crossings = tuple((t[1], t[2], t[3], t[0]) for t in d.crossings)
    orientation = None
    if d.orientation is not None:
        orientation = tuple((o, not u) for u, o in d.orientation)
    if name is None:
        name = d.name[:-1] if d.name.endswith("*") else d.name + "*"
    return replace(d, crossings=crossings, orientation=orientation, name=name, meta=dict(d.meta))


# ---------------------------------------------------------------------------
# orientation


_VARIANT_RE = re.compile(r"(NW|NE|SW|SE)\s*[-_ ]?\s*(in|out)", re.I)


def parse_variant(text: str) -> list[tuple[int, bool]]:
    """``'NW In, SW Out'`` or ``'NWin-SWout'`` -> ``[(0, True), (2, False)]``."""
    found = [(POSITIONS.index(m.group(1).upper()), m.group(2).lower() == "in")
             for m in _VARIANT_RE.finditer(text)]
    if not found:
        raise DiagramError(f"cannot parse orientation variant {text!r}")
    return found


def format_variant(spec: Sequence[tuple[int, bool]]) -> str:
    return ", ".join(f"{POSITIONS[p]} {'In' if inward else 'Out'}" for p, inward in spec)


def short_variant(text: str) -> str:
    return "-".join(f"{POSITIONS[p]}{'in' if i else 'out'}" for p, i in parse_variant(text))


def orient(d: Diagram, variant: str | Sequence[tuple[int, bool]] | None = None,
           seed: Sequence[tuple[bool, bool]] = ()) -> Diagram:
    """Orient every strand.

    For tangles, ``variant`` fixes the direction at the named endpoints (in
    order); unnamed strands and closed components run forward from their
    first end.  For closed diagrams ``seed`` gives the orientation of the
    first crossings (used to keep the orientation of a tangle inside one of
    its closures).
    """
    spec = parse_variant(variant) if isinstance(variant, str) else list(variant or [])
    n = len(d.crossings)
    under: list[bool | None] = [None] * n
    over: list[bool | None] = [None] * n
    b_in: list[bool | None] = [None] * 4
    if seed:
        if d.is_tangle:
            raise DiagramError("seeded orientation needs a closed diagram")
        for v, (u, o) in enumerate(seed):
            under[v], over[v] = u, o
        for v, (u, o) in enumerate(seed):
            _walk_closed(d, v, 0 if u else 2, under, over)
            _walk_closed(d, v, 1 if o else 3, under, over)

    def other_end(e, end):
        a, b = d.ends[e]
        return b if a == end else a

    def walk(start_end, forward: bool):
        """Follow a strand from ``start_end`` into its edge."""
        v, k = start_end
        e = d.boundary[k] if v < 0 else d.crossings[v][(k + 2) % 4]
        end = (v, k) if v < 0 else (v, (k + 2) % 4)
        while True:
            nxt = other_end(e, end)
            v2, k2 = nxt
            if v2 < 0:
                b_in[k2] = not forward
                return
            entered = k2 if forward else (k2 + 2) % 4
            if k2 in (0, 2):
                if under[v2] is not None:
                    if under[v2] != (entered == 0):
                        raise OrientationError(f"{d.name}: inconsistent orientation request")
                    return
                under[v2] = entered == 0
            else:
                if over[v2] is not None:
                    if over[v2] != (entered == 1):
                        raise OrientationError(f"{d.name}: inconsistent orientation request")
                    return
                over[v2] = entered == 1
            end = (v2, (k2 + 2) % 4)
            e = d.crossings[v2][end[1]]

    if d.is_tangle:
        for pos, inward in spec:
            if b_in[pos] is not None:
                if b_in[pos] != inward:
                    raise OrientationError(
                        f"{d.name}: {format_variant(spec)} is impossible for this tangle")
                continue
            b_in[pos] = inward
            walk((-1, pos), inward)
        for pos in range(4):
            if b_in[pos] is None:
                b_in[pos] = True
                walk((-1, pos), True)
    for v in range(n):
        if under[v] is None:
            # start a closed component by entering v at slot 0 on the under-strand
            under[v] = True
            _walk_closed(d, v, 0, under, over)
        if over[v] is None:
            over[v] = True
            _walk_closed(d, v, 1, under, over)
    label = format_variant(spec) if d.is_tangle and spec else d.variant
    out = replace(d, orientation=tuple(zip(under, over)),
                  boundary_in=tuple(b_in) if d.is_tangle else None, variant=label,
                  meta=dict(d.meta))
    out.validate()
    return out


def _walk_closed(d: Diagram, v: int, k: int, under, over) -> None:
    """Orient the strand entering crossing ``v`` at slot ``k`` (already recorded)."""
    end = (v, (k + 2) % 4)
    e = d.crossings[v][end[1]]
    while True:
        a, b = d.ends[e]
        v2, k2 = b if a == end else a
        if v2 < 0:
            raise OrientationError("closed walk reached the boundary")
        flags = under if k2 in (0, 2) else over
        want = k2 in (0, 1)
        if flags[v2] is not None:
            if flags[v2] != want:
                raise OrientationError(f"{d.name}: inconsistent orientation")
            return
        flags[v2] = want
        end = (v2, (k2 + 2) % 4)
        e = d.crossings[v2][end[1]]


def with_variant(t: Diagram, variant: str) -> Diagram:
    """Re-orient a tangle to the orientation variant ``variant``."""
    base = replace(t, orientation=None, boundary_in=None, meta=dict(t.meta))
    return orient(base, variant)


def strand_pairs(t: Diagram) -> list[tuple[str, str]]:
    """Which boundary endpoints are joined by a strand."""
    out = []
    seen = set()
    for k in range(4):
        if k in seen:
            continue
        end = (-1, k)
        e = t.boundary[k]
        while True:
            a, b = t.ends[e]
            v, s = b if a == end else a
            if v < 0:
                break
            end = (v, (s + 2) % 4)
            e = t.crossings[v][end[1]]
        seen |= {k, s}
        out.append((POSITIONS[k], POSITIONS[s]))
    return out


def close(t: Diagram, kind: str = "N", extra: Sequence[int] | None = None,
          name: str = "") -> Diagram:
    """``N(T + R(extra))`` or ``D(...)`` with the orientation of ``T`` kept.

    The added rational tangle and the closing arcs are oriented to agree with
    ``T``; an :class:`OrientationError` means no such orientation exists.
    """
    if kind not in ("N", "D"):
        raise DiagramError(f"closure kind must be N or D, not {kind!r}")
    bare = replace(t, orientation=None, boundary_in=None, meta={})
    body = bare if extra is None else tangle_add(bare, rational_tangle(*extra))
    k = numerator(body, name) if kind == "N" else denominator(body, name)
    if not k.crossings:
        return k
    if t.orientation is None:
        return orient(k)
    try:
        return orient(k, seed=t.orientation)
    except OrientationError:
        raise OrientationError(f"{kind}-closure of {t.name} {t.variant} is not orientable "
                               "compatibly with the tangle") from None


def closure(t: Diagram, kind: str, name: str = "") -> Diagram:
    """Closure of an (optionally oriented) tangle; the result is oriented."""
    return close(t, kind, None, name)


# ---------------------------------------------------------------------------
# text format


def format_diagram(d: Diagram) -> str:
    """Serialize in the line format (``knot``/``tangle`` header, ``X`` lines, ``B``)."""
    if d.is_tangle:
        lines = [f"tangle {d.name} {short_variant(d.variant) if d.variant else ''}".rstrip()]
    else:
        lines = [f"knot {d.name}"]
    for a, b, c, e, s in d.pd:
        lines.append(f"X {a} {b} {c} {e} {s:+d}")
    if d.is_tangle:
        parts = [f"{POSITIONS[k]}:{d.boundary[k]}:{'in' if d.boundary_in[k] else 'out'}"
                 for k in range(4)]
        lines.append("B " + " ".join(parts))
    if d.loops:
        lines.append(f"L {d.loops}")
    return "\n".join(lines) + "\n"


def parse_diagram(text: str) -> Diagram:
    """Parse one diagram block (see :func:`format_diagram`) or a ``braid`` line."""
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows:
        raise DiagramError("empty diagram text")
    head = rows[0]
    if head[0] == "braid":
        return from_braid(BraidWord.parse(" ".join(head[1:])))
    if head[0] not in ("knot", "tangle") or len(head) < 2:
        raise DiagramError(f"bad diagram header {' '.join(head)!r}")
    pd, boundary, boundary_in, loops = [], None, None, 0
    for row in rows[1:]:
        try:
            if row[0] == "X" and len(row) == 6:
                pd.append([int(v) for v in row[1:]])
            elif row[0] == "B" and len(row) == 5:
                boundary, boundary_in = [None] * 4, [None] * 4
                for item in row[1:]:
                    pos, edge, way = item.split(":")
                    k = POSITIONS.index(pos)
                    boundary[k], boundary_in[k] = int(edge), way == "in"
            elif row[0] == "L" and len(row) == 2:
                loops = int(row[1])
            else:
                raise ValueError
        except ValueError:
            raise DiagramError(f"bad diagram line {' '.join(row)!r}") from None
    if head[0] == "tangle" and boundary is None:
        raise DiagramError("tangle needs a B line")
    variant = format_variant(parse_variant(head[2])) if head[0] == "tangle" and len(head) > 2 else ""
    return _canonical(from_pd(pd, head[1], boundary, boundary_in, variant, loops))
