"""Bundled knot and tangle tables, and the on-disk invariant cache."""

from __future__ import annotations

import ast
import logging
import os
import random
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable, Iterator

from .algebra import parse_quandle_spec
from .colorings import coloring_count
from .diagrams import (BraidWord, Diagram, DiagramError, OrientationError, close, format_variant,
                       from_braid, mirror, parse_diagram, parse_variant, rational_tangle, rotate,
                       short_variant, tangle_add, with_variant)

log = logging.getLogger(__name__)

CACHE_ENV = "QTANGLE_CACHE"

# Probe quandles used for the coloring cross-check of the tangle table.
PROBES = {
    "A2": "alexander:2:t^2+t+1",
    "A3": "alexander:3:t^2-t+1",
    "A5": "alexander:5:t^2-t+1",
    "A7": "alexander:7:t^2-t+1",
    "R3": "dihedral:3",
    "R5": "dihedral:5",
    "R7": "dihedral:7",
}


class CatalogError(ValueError):
    pass


def _data(name: str) -> str:
    return resources.files("qtangle").joinpath("data", name).read_text()


# ---------------------------------------------------------------------------
# knots


@dataclass(frozen=True)
class KnotEntry:
    name: str
    source: str
    diagram: Diagram
    note: str = ""


@dataclass(frozen=True)
class KnotTable:
    entries: dict[str, KnotEntry]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[KnotEntry]:
        return iter(self.entries.values())

    @property
    def names(self) -> list[str]:
        return list(self.entries)

    def __contains__(self, name: str) -> bool:
        return name.rstrip("*") in self.entries

    def diagram(self, name: str) -> Diagram:
        """Diagram for ``name``; a trailing ``*`` asks for the mirror image."""
        base = name.rstrip("*")
        if base not in self.entries:
            raise KeyError(f"unknown knot {name!r}")
        d = self.entries[base].diagram
        return mirror(d, base + "*") if name.endswith("*") else d

    __getitem__ = diagram


def _knot_block(name: str, lines: list[str], lineno: int) -> KnotEntry:
    text = "\n".join([f"knot {name}"] + lines)
    try:
        d = parse_diagram(text)
        d.validate()
    except DiagramError as exc:
        raise CatalogError(f"line {lineno}: knot {name}: {exc}") from None
    return KnotEntry(name, "pd", d)


def parse_knot_table(source: str) -> KnotTable:
    """Parse ``knot <name> braid <strands> <word>`` lines and ``knot <name>`` PD blocks."""
    entries: dict[str, KnotEntry] = {}
    block: tuple[str, int, list[str]] | None = None

    def add(entry: KnotEntry, lineno: int) -> None:
        if entry.name in entries:
            raise CatalogError(f"line {lineno}: duplicate knot {entry.name}")
        entries[entry.name] = entry

    def flush() -> None:
        nonlocal block
        if block is not None:
            name, start, lines = block
            add(_knot_block(name, lines, start), start)
            block = None

    for lineno, raw in enumerate(source.splitlines(), 1):
        line, _, note = raw.partition("#")
        parts = line.split()
        if not parts:
            flush()
            continue
        if parts[0] == "knot":
            flush()
            if len(parts) < 2:
                raise CatalogError(f"line {lineno}: knot needs a name")
            name = parts[1]
            if len(parts) == 2:
                block = (name, lineno, [])
                continue
            if parts[2] != "braid" or len(parts) < 5:
                raise CatalogError(f"line {lineno}: expected 'knot <name> braid <strands> <word>'")
            try:
                word = BraidWord.parse(" ".join(parts[3:]))
                d = from_braid(word, name=name)
                d.validate()
            except DiagramError as exc:
                raise CatalogError(f"line {lineno}: knot {name}: {exc}") from None
            add(KnotEntry(name, "braid " + " ".join(parts[3:]), d, note.strip()), lineno)
        elif block is not None:
            block[2].append(line)
        else:
            raise CatalogError(f"line {lineno}: unexpected {parts[0]!r}")
    flush()
    return KnotTable(entries)


def load_knot_table(path: str | Path | None = None) -> KnotTable:
    text = Path(path).read_text() if path else _data("knots9.txt")
    return parse_knot_table(text)


# ---------------------------------------------------------------------------
# tangle construction expressions


def _build(node: ast.AST) -> Diagram:
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and not node.keywords:
        fn, args = node.func.id, node.args
        if fn == "R":
            return rational_tangle(*(_int(a) for a in args))
        if fn == "add" and len(args) >= 2:
            out = _build(args[0])
            for a in args[1:]:
                out = tangle_add(out, _build(a))
            return out
        if fn == "rot" and len(args) == 1:
            return rotate(_build(args[0]))
        if fn == "mirror" and len(args) == 1:
            return mirror(_build(args[0]))
    raise CatalogError(f"unsupported tangle expression {ast.unparse(node)!r}")


def _int(node: ast.AST) -> int:
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        return -_int(node.operand)
    if isinstance(node, ast.Constant) and type(node.value) is int:
        return node.value
    raise CatalogError(f"twist counts must be integers, not {ast.unparse(node)!r}")


def build_tangle(text: str, name: str = "") -> Diagram:
    """Evaluate ``add(R(3), R(-3))``-style text; only R, add, rot and mirror are allowed."""
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError:
        raise CatalogError(f"cannot parse tangle expression {text!r}") from None
    t = _build(tree.body)
    return Diagram(t.crossings, boundary=t.boundary, name=name or text.strip())


# ---------------------------------------------------------------------------
# tangles


_IDENTITY = re.compile(r"^(N|D)\(\s*T\s*(?:\+\s*R\(([-\d,\s]+)\))?\s*\)$")


@dataclass(frozen=True)
class ClosureIdentity:
    tangle: str
    variant: str
    knot: str
    kind: str
    extra: tuple[int, ...] | None

    @property
    def text(self) -> str:
        inner = "T" if self.extra is None else f"T + R({','.join(map(str, self.extra))})"
        return f"{self.knot} = {self.kind}({inner})"

    def closure(self, table: "TangleTable") -> Diagram:
        t = table.get(self.tangle, self.variant)
        return close(t, self.kind, self.extra, name=self.text)


def parse_identity(tangle: str, variant: str, text: str) -> ClosureIdentity:
    knot, eq, rhs = text.partition("=")
    m = _IDENTITY.match(rhs.strip())
    if not eq or not m or not knot.strip():
        raise CatalogError(f"bad closure identity {text!r}")
    extra = None if m.group(2) is None else tuple(int(v) for v in m.group(2).split(","))
    return ClosureIdentity(tangle, variant, knot.strip(), m.group(1), extra)


@dataclass
class TangleEntry:
    name: str
    diagram: Diagram               # unoriented
    source: str
    provenance: str
    variants: dict[str, tuple[str, ...]] = field(default_factory=dict)  # variant -> probes


@dataclass
class TangleTable:
    entries: dict[str, TangleEntry]
    identities: list[ClosureIdentity]

    def __contains__(self, name: str) -> bool:
        return name in self.entries

    def variants(self, name: str) -> list[str]:
        return list(self.entries[name].variants)

    def get(self, name: str, variant: str | None = None) -> Diagram:
        """The oriented tangle; ``variant`` may be omitted when only one is declared."""
        if name not in self.entries:
            raise KeyError(f"unknown tangle {name!r}")
        entry = self.entries[name]
        if variant is None:
            if len(entry.variants) != 1:
                raise KeyError(f"tangle {name} has variants {', '.join(entry.variants)}; pick one")
            variant = next(iter(entry.variants))
        t = with_variant(entry.diagram, format_variant(parse_variant(variant)))
        return Diagram(t.crossings, t.orientation, t.boundary, t.boundary_in, t.loops,
                       name, t.variant)

    def lookup(self, token: str) -> Diagram:
        """``6_3:NWin-SWout`` or ``6_3``."""
        name, _, variant = token.partition(":")
        return self.get(name, variant or None)

    def coloring_profile(self, name: str, variant: str) -> tuple[str, ...]:
        t = self.get(name, variant)
        return tuple(k for k, spec in PROBES.items()
                     if coloring_count(t, parse_quandle_spec(spec), 0) > 1)

    def check_colorings(self) -> list[str]:
        """Mismatches between declared and computed coloring profiles."""
        problems = []
        for entry in self.entries.values():
            for variant, declared in entry.variants.items():
                got = self.coloring_profile(entry.name, variant)
                if set(got) != set(declared):
                    problems.append(f"{entry.name} {variant}: declared {' '.join(declared)}, "
                                    f"computed {' '.join(got) or 'none'}")
        return problems


def parse_tangle_file(source: str, strict: bool = True) -> TangleTable:
    entries: dict[str, TangleEntry] = {}
    identities: list[ClosureIdentity] = []
    lines = source.splitlines()
    comment = ""
    i = 0
    while i < len(lines):
        lineno = i + 1
        raw = lines[i]
        parts = raw.split()
        i += 1
        if not parts:
            comment = ""
            continue
        if parts[0].startswith("#"):
            comment = raw.lstrip("# ").strip()
            continue
        try:
            if parts[0] == "tangle" and len(parts) >= 3 and parts[2] == "=":
                name = parts[1]
                expr = raw.split("=", 1)[1]
                entries[name] = TangleEntry(name, build_tangle(expr, name), expr.strip(),
                                            comment or "constructed")
            elif parts[0] == "tangle" and len(parts) == 3:
                block = [raw]
                while i < len(lines) and lines[i].split()[:1] in (["X"], ["B"]):
                    block.append(lines[i])
                    i += 1
                d = parse_diagram("\n".join(block))
                entries[d.name] = TangleEntry(d.name, Diagram(d.crossings, boundary=d.boundary,
                                                              name=d.name),
                                              "diagram", comment or "transcribed")
            elif parts[0] == "variant" and len(parts) >= 4 and parts[3] == "colors":
                name, variant = parts[1], short_variant(format_variant(parse_variant(parts[2])))
                entries[name].variants[variant] = tuple(parts[4:])
                unknown = set(parts[4:]) - set(PROBES)
                if unknown:
                    raise CatalogError(f"unknown probe {sorted(unknown)[0]}")
            elif parts[0] == "identity" and len(parts) >= 5:
                name, variant = parts[1], short_variant(format_variant(parse_variant(parts[2])))
                if name not in entries:
                    raise CatalogError(f"identity for unknown tangle {name}")
                identities.append(parse_identity(name, variant, " ".join(parts[3:])))
            else:
                raise CatalogError(f"unexpected line {raw.strip()!r}")
        except KeyError as exc:
            raise CatalogError(f"line {lineno}: unknown tangle {exc}") from None
        except (CatalogError, DiagramError) as exc:
            raise CatalogError(f"line {lineno}: {exc}") from None
    table = TangleTable(entries, identities)
    for ident in identities:
        try:
            ident.closure(table)
        except OrientationError as exc:
            raise CatalogError(f"{ident.tangle} {ident.variant} {ident.text}: {exc}") from None
    if strict:
        problems = table.check_colorings()
        if problems:
            raise CatalogError("coloring cross-check failed: " + "; ".join(problems))
    return table


def load_tangle_table(path: str | Path | None = None, strict: bool = True) -> TangleTable:
    text = Path(path).read_text() if path else _data("tangles.txt")
    return parse_tangle_file(text, strict)


# ---------------------------------------------------------------------------
# invariant cache


CacheKey = tuple[str, str, str]


class InvariantCache:
    """Tab-separated ``name  quandle  cocycle  value`` lines, appended as computed.

    With ``path=None`` the cache lives in memory only.  Lines that do not
    have four fields are skipped with a warning; later lines win.
    """

    def __init__(self, path: str | Path | None = None):
        self.path = Path(path) if path else None
        self._data: dict[CacheKey, str] = {}
        if self.path is not None and self.path.exists():
            self._load()

    @classmethod
    def from_env(cls, default: str | Path | None = None) -> "InvariantCache":
        return cls(os.environ.get(CACHE_ENV) or default)

    def _load(self) -> None:
        with open(self.path) as fh:
            for lineno, line in enumerate(fh, 1):
                fields = line.rstrip("\n").split("\t")
                if len(fields) != 4 or not all(fields):
                    log.warning("%s:%d: skipping corrupt cache line", self.path, lineno)
                    continue
                self._data[tuple(fields[:3])] = fields[3]

    def __len__(self) -> int:
        return len(self._data)

    def __contains__(self, key: CacheKey) -> bool:
        return key in self._data

    def get(self, key: CacheKey) -> str | None:
        return self._data.get(key)

    def put(self, key: CacheKey, value: str) -> str:
        if any("\t" in k or "\n" in k for k in key) or "\n" in value:
            raise ValueError("cache keys and values must not contain tabs or newlines")
        if self._data.get(key) == value:
            return value
        self._data[key] = value
        if self.path is not None:
            with open(self.path, "a") as fh:
                fh.write("\t".join(key) + "\t" + value + "\n")
        return value

    def keys(self) -> list[CacheKey]:
        return list(self._data)

    def audit(self, recompute: Callable[[CacheKey], str], sample: int = 10,
              seed: int = 0) -> list[CacheKey]:
        """Recompute up to ``sample`` random entries; returns the keys that disagree."""
        keys = sorted(self._data)
        picked = random.Random(seed).sample(keys, min(sample, len(keys)))
        return [k for k in picked if recompute(k) != self._data[k]]
