"""Embedding obstructions: a tangle T inside a knot K forces Phi(T) to be a
sub-multiset of Phi(K), for every quandle and cocycle."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from .algebra import parse_quandle_spec
from .catalog import InvariantCache, KnotTable
from .cocycles import Cocycle, parse_cocycle_spec
from .colorings import coloring_count
from .diagrams import Diagram, format_diagram, parse_diagram, short_variant
from .invariants import (InvariantMultiset, UniformityError, disjoint_union_2, disjoint_union_3,
                         knot_invariant, parse_polynomial, tangle_invariant)


def multiset_included(M: InvariantMultiset, N: InvariantMultiset) -> bool:
    """``M`` is a sub-multiset of ``N``."""
    return M <= N


@dataclass(frozen=True, order=True)
class InvariantSpec:
    quandle: str
    cocycle: str

    @classmethod
    def parse(cls, token: str) -> "InvariantSpec":
        q, sep, c = token.partition("@")
        if not sep or not q.strip() or not c.strip():
            raise ValueError(f"invariant spec must look like <quandle>@<cocycle>, got {token!r}")
        return cls(q.strip(), c.strip())

    @property
    def token(self) -> str:
        return f"{self.quandle}@{self.cocycle}"

    def __str__(self) -> str:
        return self.token

    def resolve(self) -> Cocycle:
        return _resolve(self.quandle, self.cocycle)

    @property
    def arity(self) -> int:
        return self.resolve().arity

    @property
    def size(self) -> int:
        return self.resolve().quandle.size


@lru_cache(maxsize=None)
def _resolve(quandle: str, cocycle: str) -> Cocycle:
    return parse_cocycle_spec(cocycle, parse_quandle_spec(quandle))


def _shadow(p: int) -> InvariantSpec:
    h = "t^2+t+1" if p == 2 else "t^2-t+1"
    return InvariantSpec(f"alexander:{p}:{h}", f"poly3:(x-y)*(y-z)^{p}")


F_SPEC = InvariantSpec("alexander:2:t^2+t+1", "poly2:(x-y)^2*y")

SPEC_SETS: dict[str, list[InvariantSpec]] = {
    "prop2": [_shadow(p) for p in (2, 3, 5, 7)],
    "prop3": [_shadow(5), InvariantSpec("dihedral:3", "mochizuki:3")],
    "f": [F_SPEC],
    "shadow": [_shadow(p) for p in (2, 3, 5, 7)],
    "mochizuki": [InvariantSpec(f"dihedral:{p}", f"mochizuki:{p}") for p in (3, 5, 7)],
}
for _p in (2, 3, 5, 7):
    SPEC_SETS[f"shadow{_p}"] = [_shadow(_p)]
for _p in (3, 5, 7):
    SPEC_SETS[f"mochizuki{_p}"] = [InvariantSpec(f"dihedral:{_p}", f"mochizuki:{_p}")]


def parse_specs(text: str) -> list[InvariantSpec]:
    """A named set (``prop2``) or comma-separated ``quandle@cocycle`` tokens."""
    out: list[InvariantSpec] = []
    for part in text.split(","):
        part = part.strip()
        if part in SPEC_SETS:
            out.extend(SPEC_SETS[part])
        elif part:
            out.append(InvariantSpec.parse(part))
    if not out:
        raise ValueError("no invariant specs given")
    return out


def by_quandle_size(specs: Iterable[InvariantSpec]) -> list[InvariantSpec]:
    return sorted(specs, key=lambda s: (s.size, s.quandle, s.cocycle))


# ---------------------------------------------------------------------------
# invariant values (cached)


def diagram_key(d: Diagram) -> str:
    if d.is_tangle:
        return f"{d.name}:{short_variant(d.variant)}" if d.variant else d.name
    return d.name


def knot_value(K: Diagram, spec: InvariantSpec, cache: InvariantCache | None = None) -> InvariantMultiset:
    c = spec.resolve()
    key = (diagram_key(K), spec.quandle, spec.cocycle)
    hit = cache.get(key) if cache is not None and K.name else None
    if hit is not None:
        return parse_polynomial(hit, c.group)
    value = knot_invariant(K, c)
    if cache is not None and K.name:
        cache.put(key, value.format())
    return value


def tangle_value(T: Diagram, spec: InvariantSpec, cache: InvariantCache | None = None) -> InvariantMultiset:
    c = spec.resolve()
    key = (diagram_key(T), spec.quandle, spec.cocycle)
    hit = cache.get(key) if cache is not None and T.name else None
    if hit is not None:
        return parse_polynomial(hit, c.group)
    value = tangle_invariant(T, c).total
    if cache is not None and T.name:
        cache.put(key, value.format())
    return value


def disjoint_value(tangles: Sequence[Diagram], spec: InvariantSpec, strict: bool = True):
    c = spec.resolve()
    union = disjoint_union_2 if c.arity == 2 else disjoint_union_3
    return union(list(tangles), c, strict)


# ---------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class ObstructionVerdict:
    tangle: str
    variant: str
    knot: str
    witness: InvariantSpec | None = None
    tangle_value: InvariantMultiset | None = field(default=None, compare=False)
    knot_value: InvariantMultiset | None = field(default=None, compare=False)

    @property
    def excluded(self) -> bool:
        return self.witness is not None

    def line(self) -> str:
        head = f"verdict {self.tangle} {self.variant or '-'} {self.knot}"
        return f"{head} excluded {self.witness}" if self.excluded else f"{head} open"

    def recheck(self) -> bool:
        """An exclusion is genuine: the witness multisets violate inclusion."""
        if not self.excluded:
            return True
        if self.knot_value is None:
            # counting shortcut: the knot has fewer colorings than the tangle
            return True
        return not multiset_included(self.tangle_value, self.knot_value)


def _variant(T: Diagram) -> str:
    return short_variant(T.variant) if T.variant else ""


def check_embedding_obstruction(T: Diagram, K: Diagram, specs: Sequence[InvariantSpec],
                                cache: InvariantCache | None = None) -> ObstructionVerdict:
    """First spec (in the given order) whose tangle value is not included in the knot's."""
    for spec in specs:
        tv = tangle_value(T, spec, cache)
        kv = knot_value(K, spec, cache)
        if not multiset_included(tv, kv):
            return ObstructionVerdict(T.name, _variant(T), K.name, spec, tv, kv)
    return ObstructionVerdict(T.name, _variant(T), K.name)


# ---------------------------------------------------------------------------
# table scans


@dataclass
class ScanReport:
    tangle: str
    variant: str
    specs: list[InvariantSpec]
    verdicts: list[ObstructionVerdict]
    # spec -> knots it does not exclude on its own (only in full mode)
    open_by_spec: dict[InvariantSpec, list[str]] | None = None
    notices: list[str] = field(default_factory=list)

    @property
    def open(self) -> list[str]:
        return [v.knot for v in self.verdicts if not v.excluded]

    def lines(self) -> str:
        out = [f"# {n}" for n in self.notices]
        out += [v.line() for v in self.verdicts]
        return "\n".join(out) + "\n"

    def text(self) -> str:
        out = [f"tangle {self.tangle} {self.variant}".rstrip(),
               "specs " + ", ".join(str(s) for s in self.specs)]
        out += [f"note: {n}" for n in self.notices]
        if self.open_by_spec is not None:
            for spec in self.specs:
                knots = self.open_by_spec.get(spec)
                if knots is not None:
                    out.append(f"not excluded by {spec}: {', '.join(knots) or 'none'}")
        width = max((len(v.knot) for v in self.verdicts), default=4)
        for v in self.verdicts:
            out.append(f"  {v.knot:<{width}}  " + (f"excluded by {v.witness}" if v.excluded else "open"))
        out.append(f"may embed in: {', '.join(self.open) or 'none'}")
        return "\n".join(out) + "\n"

    def format(self, kind: str = "text") -> str:
        return self.lines() if kind == "lines" else self.text()


def _knot_size(K: Diagram, spec: InvariantSpec) -> int:
    c = spec.resolve()
    n = coloring_count(K, c.quandle)
    return n * c.quandle.size if c.arity == 3 else n


def _knot_job(text: str, tokens: list[str], tangle_counts: list[dict[int, int]],
              cached: list[str | None], full: bool) -> list[tuple[bool, str | None, bool]]:
    """Per-spec ``(included, knot value or None, freshly computed)``; stops at the first
    exclusion unless ``full``."""
    K = parse_diagram(text)
    out = []
    for token, counts, hit in zip(tokens, tangle_counts, cached):
        spec = InvariantSpec.parse(token)
        c = spec.resolve()
        tv = InvariantMultiset(c.group, counts)
        if hit is not None:
            kv, fresh = parse_polynomial(hit, c.group), False
        elif tv.total > _knot_size(K, spec):
            out.append((False, None, False))
            if not full:
                break
            continue
        else:
            kv, fresh = knot_invariant(K, c), True
        ok = multiset_included(tv, kv)
        out.append((ok, kv.format(), fresh))
        if not ok and not full:
            break
    return out


def _run_jobs(jobs: list[tuple], workers: int | None) -> list:
    workers = workers or os.cpu_count() or 1
    if workers <= 1 or len(jobs) <= 1:
        return [_knot_job(*job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_knot_job, *zip(*jobs)))


def _scan(label: str, variant: str, values: dict[InvariantSpec, InvariantMultiset],
          table: KnotTable, specs: list[InvariantSpec], full: bool,
          workers: int | None, cache: InvariantCache | None, notices: list[str]) -> ScanReport:
    specs = [s for s in specs if s in values]
    tokens = [s.token for s in specs]
    counts = [dict(values[s].counts) for s in specs]
    entries = list(table)
    jobs = []
    for e in entries:
        hits = [cache.get((e.name, s.quandle, s.cocycle)) if cache is not None else None
                for s in specs]
        jobs.append((format_diagram(e.diagram), tokens, counts, hits, full))
    results = _run_jobs(jobs, workers)
    verdicts = []
    open_by_spec: dict[InvariantSpec, list[str]] = {s: [] for s in specs}
    for e, res in zip(entries, results):
        witness = None
        kv_witness = None
        for spec, (ok, kv, fresh) in zip(specs, res):
            if kv is not None and fresh and cache is not None:
                cache.put((e.name, spec.quandle, spec.cocycle), kv)
            if ok:
                open_by_spec[spec].append(e.name)
            elif witness is None:
                witness = spec
                kv_witness = None if kv is None else parse_polynomial(kv, spec.resolve().group)
        verdicts.append(ObstructionVerdict(label, variant, e.name, witness,
                                           values[witness] if witness else None, kv_witness))
    return ScanReport(label, variant, specs, verdicts, open_by_spec if full else None, notices)


def scan_table(T: Diagram, table: KnotTable, specs: Sequence[InvariantSpec], full: bool = False,
               workers: int | None = 1, cache: InvariantCache | None = None) -> ScanReport:
    """Verdict for every knot of ``table``; specs run in ascending quandle size.

    With ``full=True`` every spec is evaluated on every knot, so the report
    also lists the knots each spec leaves open on its own.
    """
    specs = by_quandle_size(specs)
    values = {s: tangle_value(T, s, cache) for s in specs}
    return _scan(T.name, _variant(T), values, table, specs, full, workers, cache, [])


def scan_disjoint(tangles: Sequence[Diagram], table: KnotTable, specs: Sequence[InvariantSpec],
                  full: bool = False, workers: int | None = 1,
                  cache: InvariantCache | None = None) -> ScanReport:
    """As :func:`scan_table` for the split union of ``tangles``.

    Specs for which some tangle has boundary-color dependent pieces are
    skipped with a notice.
    """
    specs = by_quandle_size(specs)
    values: dict[InvariantSpec, InvariantMultiset] = {}
    notices = []
    for s in specs:
        try:
            values[s] = disjoint_value(tangles, s).value
        except UniformityError as exc:
            notices.append(f"skipped {s}: {exc}")
    label = "+".join(diagram_key(t) for t in tangles)
    return _scan(label, "", values, table, specs, full, workers, cache, notices)
