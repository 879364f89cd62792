"""Structural description of an evolved grid.

Singular objects are extracted in a fixed precedence: horizontal strips
(a relation between two rows, measured on a column range), then diagonals of
infinities anchored on the border (with their alternating bands), then
clusters: 8-connected groups of the remaining singular cells.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

from .errors import InconsistentStrip, PrecisionExhausted
from .exactnum import LaurentSeries, add, mul
from .lattice import Grid
from .rules import WeightVector, combine

UNDEFINED = "?"

__all__ = [
    "UNDEFINED",
    "ValuationMap",
    "CellClass",
    "StripProfile",
    "DiagonalSpec",
    "Cluster",
    "Classification",
    "valuation_map",
    "classify_cell",
    "detect_strips",
    "detect_vertical_strips",
    "detect_diagonals",
    "detect_confined_clusters",
    "cell_classes",
    "classify",
    "profiles_vector",
]


@dataclass
class ValuationMap:
    """``values[m][n]``: valuation of ``x[m][n]``, ``None`` outside the domain,
    :data:`UNDEFINED` for cells that are zero up to truncation."""

    M: int
    N: int
    values: list
    border: frozenset = frozenset()
    staircase: int = 0

    def __getitem__(self, mn):
        m, n = mn
        if 0 <= m <= self.M and 0 <= n <= self.N:
            return self.values[m][n]
        return None

    @property
    def undefined(self) -> list[tuple[int, int]]:
        return [(m, n) for m in range(self.M + 1) for n in range(self.N + 1) if self.values[m][n] == UNDEFINED]

    def singular_cells(self) -> list[tuple[int, int]]:
        return [
            (m, n)
            for m in range(self.M + 1)
            for n in range(self.N + 1)
            if self.values[m][n] is not None and self.values[m][n] != 0
        ]

    def to_tsv(self) -> str:
        """Rows from ``n = N`` (top) down to 0; first column is ``n``."""
        lines = ["n\\m\t" + "\t".join(str(m) for m in range(self.M + 1))]
        for n in range(self.N, -1, -1):
            row = []
            for m in range(self.M + 1):
                v = self.values[m][n]
                row.append("" if v is None else str(v))
            lines.append(f"{n}\t" + "\t".join(row))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_tsv(cls, text: str, border: frozenset = frozenset(), staircase: int = 0) -> "ValuationMap":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        M = len(lines[0].split("\t")) - 2
        N = len(lines) - 2
        values = [[None] * (N + 1) for _ in range(M + 1)]
        for ln in lines[1:]:
            parts = ln.split("\t")
            n = int(parts[0])
            for m, tok in enumerate(parts[1:]):
                values[m][n] = None if tok == "" else (UNDEFINED if tok == UNDEFINED else int(tok))
        return cls(M, N, values, border, staircase)

    def __eq__(self, other):
        if not isinstance(other, ValuationMap):
            return NotImplemented
        return (self.M, self.N, self.values) == (other.M, other.N, other.values)


@dataclass(frozen=True)
class CellClass:
    """``Regular``, ``ZeroOfWeight``, ``InfinityOfWeight`` or ``StripMember``."""

    kind: str
    weight: int | None = None
    strip_row: int | None = None

    @classmethod
    def regular(cls):
        return cls("Regular")

    @classmethod
    def zero(cls, w):
        return cls("ZeroOfWeight", weight=w)

    @classmethod
    def infinity(cls, w):
        return cls("InfinityOfWeight", weight=w)

    @classmethod
    def strip(cls, row):
        return cls("StripMember", strip_row=row)


@dataclass(frozen=True)
class StripProfile:
    """Weights of a group of contiguous strips, constant over ``span``.

    Horizontal: ``base`` is a row, ``span`` a column range, and ``weights[i]``
    the valuation of ``x[m][base+i]*x[m][base+i+1] - 1``.  Vertical: ``base``
    is a column, ``span`` a row range, products are ``-1 + O(eps**w)``.
    """

    base: int
    weights: tuple[int, ...]
    span: tuple[int, int]
    orientation: str = "horizontal"

    @property
    def base_row(self) -> int:
        return self.base

    @property
    def column_range(self) -> tuple[int, int]:
        return self.span

    def as_vector(self) -> WeightVector:
        return WeightVector(self.base, self.weights)

    def to_json(self) -> dict:
        return {
            "orientation": self.orientation,
            "base": self.base,
            "weights": list(self.weights),
            "span": list(self.span),
        }


@dataclass(frozen=True)
class DiagonalSpec:
    """A SW/NE line of infinities (or an alternating band of lines) anchored on
    the border.  ``pieces`` lists the ``(start, end)`` cells of each run; a new
    piece starts wherever the line is displaced by an interaction."""

    anchor: tuple[int, int]
    weight: int
    alternating: bool = False
    band_width: int = 1
    pieces: tuple = ()
    reaches_edge: bool = False

    def cells(self) -> set[tuple[int, int]]:
        out = set()
        for (m0, n0), (m1, _) in self.pieces:
            for t in range(m1 - m0 + 1):
                out.add((m0 + t, n0 + t))
        return out

    def to_json(self) -> dict:
        return {
            "anchor": list(self.anchor),
            "weight": self.weight,
            "alternating": self.alternating,
            "band_width": self.band_width,
            "pieces": [[list(a), list(b)] for a, b in self.pieces],
            "reaches_edge": self.reaches_edge,
        }


@dataclass(frozen=True)
class Cluster:
    cells: frozenset
    bbox: tuple[int, int, int, int]  # m_lo, n_lo, m_hi, n_hi
    touches_edge: bool
    surrounded_by_regular: bool

    @property
    def confined(self) -> bool:
        return self.surrounded_by_regular and not self.touches_edge

    @property
    def extent(self) -> tuple[int, int]:
        """Horizontal and vertical extent in lattice spacings."""
        m0, n0, m1, n1 = self.bbox
        return m1 - m0, n1 - n0

    def to_json(self) -> dict:
        return {
            "bbox": list(self.bbox),
            "extent": list(self.extent),
            "size": len(self.cells),
            "touches_edge": self.touches_edge,
            "confined": self.confined,
        }


def valuation_map(grid: Grid) -> ValuationMap:
    values = [[None] * (grid.N + 1) for _ in range(grid.M + 1)]
    for m, n in grid.coords():
        x = grid.cells[m][n]
        if x is None:
            continue
        values[m][n] = UNDEFINED if x.is_truncated_zero else x.valuation
    return ValuationMap(grid.M, grid.N, values, grid.border, grid.staircase)


def classify_cell(v) -> CellClass:
    if v == 0:
        return CellClass.regular()
    if v == UNDEFINED or v is None:
        raise ValueError(f"cannot classify valuation {v!r}")
    return CellClass.zero(v) if v > 0 else CellClass.infinity(-v)


def _product_weight(a: LaurentSeries, b: LaurentSeries, sign: int, coord) -> int:
    d = add(mul(a, b), LaurentSeries.constant(-sign, a.known_order, a.ring))
    if d.is_truncated_zero:
        raise PrecisionExhausted(f"product deviation vanishes below O(eps^{d.known_order + 1})", coord)
    return d.valuation


def _regular(x) -> bool:
    return x is not None and not x.is_truncated_zero and x._v == 0


def _scan_pairs(pairs_by_line: dict, what: str) -> dict[int, int]:
    """Per line, the constant product weight; 0 for masked lines without strips."""
    weights = {}
    for line, entries in pairs_by_line.items():
        ws = {w for w in entries if w is not None}
        masked = any(w is None for w in entries)
        if masked:
            if any(w > 0 for w in ws):
                raise InconsistentStrip(f"{what} {line}: strip crosses singular cells in the measured range")
            weights[line] = 0
            continue
        if len(ws) > 1:
            raise InconsistentStrip(f"{what} {line}: weight varies across the range {sorted(ws)}")
        weights[line] = ws.pop() if ws else 0
    return weights


def _group(weights: dict[int, int], span, orientation) -> list[StripProfile]:
    out = []
    run: list[int] = []
    start = None
    for line in sorted(weights) + [None]:
        w = weights.get(line, 0) if line is not None else 0
        if w > 0 and (start is None or line == start + len(run)):
            if start is None:
                start = line
            run.append(w)
            continue
        if start is not None:
            out.append(StripProfile(start, tuple(run), span, orientation))
            start, run = None, []
        if w > 0:
            start, run = line, [w]
    return out


def detect_strips(grid: Grid, column_range, row_range=None) -> list[StripProfile]:
    """Horizontal strips whose weights are constant over ``column_range``."""
    lo, hi = max(0, column_range[0]), min(grid.M, column_range[1])
    r_lo, r_hi = (0, grid.N - 1) if row_range is None else (max(0, row_range[0]), min(grid.N - 1, row_range[1]))
    entries: dict[int, list] = {}
    cells = grid.cells
    for r in range(r_lo, r_hi + 1):
        row = entries.setdefault(r, [])
        for m in range(lo, hi + 1):
            a, b = cells[m][r], cells[m][r + 1]
            if not (_regular(a) and _regular(b)):
                row.append(None)
                continue
            row.append(_product_weight(a, b, 1, (m, r)))
    return _group(_scan_pairs(entries, "row"), (lo, hi), "horizontal")


def detect_vertical_strips(grid: Grid, row_range, column_range=None) -> list[StripProfile]:
    """Vertical strips (products ``-1 + O(eps**w)`` of horizontal neighbours)."""
    lo, hi = max(0, row_range[0]), min(grid.N, row_range[1])
    c_lo, c_hi = (0, grid.M - 1) if column_range is None else (max(0, column_range[0]), min(grid.M - 1, column_range[1]))
    entries: dict[int, list] = {}
    cells = grid.cells
    for c in range(c_lo, c_hi + 1):
        col = entries.setdefault(c, [])
        for n in range(lo, hi + 1):
            a, b = cells[c][n], cells[c + 1][n]
            if not (_regular(a) and _regular(b)):
                col.append(None)
                continue
            col.append(_product_weight(a, b, -1, (c, n)))
    return _group(_scan_pairs(entries, "column"), (lo, hi), "vertical")


def profiles_vector(profiles: Iterable[StripProfile]) -> WeightVector:
    """All horizontal profiles of one measurement as a single vector."""
    return combine([p.as_vector() for p in profiles if p.orientation == "horizontal"])


# -- diagonals ---------------------------------------------------------------


@dataclass
class _Run:
    start: tuple[int, int]
    length: int
    value: int
    component: int = -1

    @property
    def end(self):
        return self.start[0] + self.length - 1, self.start[1] + self.length - 1

    def cells(self):
        m, n = self.start
        return [(m + t, n + t) for t in range(self.length)]


_NEIGHBOURS = [(dm, dn) for dm in (-1, 0, 1) for dn in (-1, 0, 1) if dm or dn]


def _components(cells: set) -> dict:
    label = {}
    comp = 0
    for c in cells:
        if c in label:
            continue
        label[c] = comp
        queue = deque([c])
        while queue:
            m, n = queue.popleft()
            for dm, dn in _NEIGHBOURS:
                nb = (m + dm, n + dn)
                if nb in cells and nb not in label:
                    label[nb] = comp
                    queue.append(nb)
        comp += 1
    return label


def _runs(vmap: ValuationMap) -> list[_Run]:
    runs = []
    for m in range(vmap.M + 1):
        for n in range(vmap.N + 1):
            v = vmap.values[m][n]
            if v is None or v == 0 or v == UNDEFINED:
                continue
            if vmap[m - 1, n - 1] == v:
                continue
            length = 1
            while vmap[m + length, n + length] == v:
                length += 1
            runs.append(_Run((m, n), length, v))
    return runs


def _chain(run: _Run, runs_by_comp: dict, claimed: set, vmap: ValuationMap):
    pieces = [run]
    claimed.add(id(run))
    while True:
        em, en = pieces[-1].end
        if em == vmap.M or en == vmap.N:
            return pieces, True
        offset = en - em
        best = None
        for cand in runs_by_comp.get(pieces[-1].component, ()):
            if id(cand) in claimed or cand.value != run.value:
                continue
            sm, sn = cand.start
            if sn - sm <= offset or sm + sn < em + en - 2:
                continue
            long_enough = cand.length >= 2 or cand.end[0] == vmap.M or cand.end[1] == vmap.N
            key = (not long_enough, max(abs(sm - em), abs(sn - en)), sn - sm)
            if best is None or key < best[0]:
                best = (key, cand)
        if best is None:
            return pieces, False
        pieces.append(best[1])
        claimed.add(id(best[1]))


def detect_diagonals(vmap: ValuationMap) -> list[DiagonalSpec]:
    """Border-anchored SW/NE lines of infinities, followed across interactions.

    A run that starts in the interior is never a diagonal on its own (it was
    entered from regular values); it may only continue an anchored line.
    Anchored lines of alternating sign on adjacent border sites, with
    infinities outermost, merge into one alternating band.
    """
    runs = _runs(vmap)
    label = _components({c for r in runs for c in r.cells()})
    runs_by_comp: dict[int, list] = {}
    for r in runs:
        r.component = label[r.start]
        runs_by_comp.setdefault(r.component, []).append(r)
    anchored = sorted((r for r in runs if r.start in vmap.border), key=lambda r: r.start)
    claimed: set = set()
    chains = {}
    for r in anchored:
        if id(r) in claimed:
            continue
        chains[r.start] = (r, *_chain(r, runs_by_comp, claimed, vmap))

    # group anchors adjacent along the border into alternating bands
    anchors = set(chains)
    seen = set()
    out = []
    for a in sorted(anchors):
        if a in seen:
            continue
        group = [a]
        seen.add(a)
        for step in ((1, 0), (0, 1)):
            nxt = (a[0] + step[0], a[1] + step[1])
            while nxt in anchors and nxt not in seen and chains[nxt][0].value * chains[group[-1]][0].value < 0:
                group.append(nxt)
                seen.add(nxt)
                nxt = (nxt[0] + step[0], nxt[1] + step[1])
            if len(group) > 1:
                break
        signs = [chains[g][0].value for g in group]
        if len(group) >= 3 and signs[0] < 0 and signs[-1] < 0:
            pieces = tuple((p.start, p.end) for g in group for p in chains[g][1])
            out.append(
                DiagonalSpec(
                    anchor=group[0],
                    weight=max(-s for s in signs if s < 0),
                    alternating=True,
                    band_width=len(group),
                    pieces=pieces,
                    reaches_edge=all(chains[g][2] for g in group),
                )
            )
            continue
        # unpaired lines of zeros are left to the cluster pass
        for g in group:
            first, pieces, edge = chains[g]
            if first.value < 0:
                out.append(
                    DiagonalSpec(
                        anchor=g,
                        weight=-first.value,
                        pieces=tuple((p.start, p.end) for p in pieces),
                        reaches_edge=edge,
                    )
                )
    return out


# -- clusters ----------------------------------------------------------------


def _strip_cells(strips: Iterable[StripProfile]) -> set:
    out = set()
    for s in strips:
        lo, hi = s.span
        for i in range(len(s.weights) + 1):
            for t in range(lo, hi + 1):
                out.add((t, s.base + i) if s.orientation == "horizontal" else (s.base + i, t))
    return out


def detect_confined_clusters(vmap: ValuationMap, strips=(), diagonals=()) -> list[Cluster]:
    claimed = _strip_cells(strips)
    for d in diagonals:
        claimed |= d.cells()
    singular = {c for c in vmap.singular_cells() if c not in claimed}
    label = _components(singular)
    groups: dict[int, set] = {}
    for c, k in label.items():
        groups.setdefault(k, set()).add(c)
    out = []
    for cells in groups.values():
        ms = [m for m, _ in cells]
        ns = [n for _, n in cells]
        touches = any(m == vmap.M or n == vmap.N for m, n in cells)
        surrounded = True
        for m, n in cells:
            for dm, dn in _NEIGHBOURS:
                nb = (m + dm, n + dn)
                if nb in cells:
                    continue
                v = vmap[nb]
                if v is not None and v != 0:
                    surrounded = False
        out.append(Cluster(frozenset(cells), (min(ms), min(ns), max(ms), max(ns)), touches, surrounded))
    out.sort(key=lambda c: (c.bbox[0], c.bbox[1]))
    return out


def cell_classes(vmap: ValuationMap, strips=()) -> list:
    """Per-cell :class:`CellClass`; regular cells on measured strip rows become
    ``StripMember``.  ``None`` outside the domain or for undefined cells."""
    members = {}
    for s in strips:
        if s.orientation != "horizontal":
            continue
        lo, hi = s.span
        for i in range(len(s.weights) + 1):
            for m in range(lo, hi + 1):
                members[(m, s.base + i)] = s.base
    out = [[None] * (vmap.N + 1) for _ in range(vmap.M + 1)]
    for m in range(vmap.M + 1):
        for n in range(vmap.N + 1):
            v = vmap.values[m][n]
            if v is None or v == UNDEFINED:
                continue
            if v == 0 and (m, n) in members:
                out[m][n] = CellClass.strip(members[(m, n)])
            else:
                out[m][n] = classify_cell(v)
    return out


@dataclass
class Classification:
    vmap: ValuationMap
    strips: dict = field(default_factory=dict)  # range name -> list[StripProfile]
    diagonals: list = field(default_factory=list)
    clusters: list = field(default_factory=list)
    errors: dict = field(default_factory=dict)

    def all_strips(self) -> list[StripProfile]:
        return [s for group in self.strips.values() for s in group]

    def to_json(self, valuation_map_ref: str = "valuations.tsv") -> dict:
        return {
            "valuation_map_ref": valuation_map_ref,
            "window": [self.vmap.M, self.vmap.N],
            "staircase": self.vmap.staircase,
            "undefined": [list(c) for c in self.vmap.undefined],
            "strips": {k: [s.to_json() for s in v] for k, v in self.strips.items()},
            "diagonals": [d.to_json() for d in self.diagonals],
            "clusters": [c.to_json() for c in self.clusters],
            "errors": self.errors,
        }


def classify(grid: Grid, column_ranges: dict | None = None, margin: int = 4) -> Classification:
    """Full report.  Strips are measured on ``column_ranges`` (default: the
    ``margin + 1`` westmost and eastmost columns); a range that overlaps an
    interaction is reported under ``errors`` instead of failing."""
    vmap = valuation_map(grid)
    if column_ranges is None:
        column_ranges = {"west": (0, margin), "east": (grid.M - margin, grid.M)}
    strips = {}
    errors = {}
    for name, rng in column_ranges.items():
        try:
            strips[name] = detect_strips(grid, rng)
        except InconsistentStrip as exc:
            errors[name] = str(exc)
    diagonals = detect_diagonals(vmap)
    all_strips = [s for v in strips.values() for s in v]
    clusters = detect_confined_clusters(vmap, all_strips, diagonals)
    return Classification(vmap, strips, diagonals, clusters, errors)
