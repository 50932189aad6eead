"""Read analogous coordinates off a knowledge base and export layouts."""
from __future__ import annotations

import io
import zlib
from dataclasses import dataclass, field
from fractions import Fraction
from xml.sax.saxutils import escape

from .bitvec import band, popcount
from .reasoner import KnowledgeBase

VIEWBOX = 1000
CSV_HEADER = "entity,dimension,raw,normalized,adjusted"


def coordinate(kb: KnowledgeBase, dim: str, x: str) -> int:
    for name in (dim, x):
        if name not in kb.symbols:
            raise KeyError(f"unknown symbol {name!r}")
    return popcount(band(kb.phi, band(kb.symbols[dim], kb.symbols[x])))


@dataclass(frozen=True)
class CoordinateRow:
    entity: str
    dimension: str
    raw: int
    normalized: Fraction
    adjusted: Fraction


@dataclass
class CoordinateTable:
    rows: list = field(default_factory=list)
    kappa: int = 0
    seed: int = 0
    maxima: dict = field(default_factory=dict)
    polarity: dict = field(default_factory=dict)

    def value(self, entity: str, dim: str, adjusted: bool = True) -> Fraction:
        for r in self.rows:
            if r.entity == entity and r.dimension == dim:
                return r.adjusted if adjusted else r.normalized
        raise KeyError((entity, dim))

    def raw(self, entity: str, dim: str) -> int:
        for r in self.rows:
            if r.entity == entity and r.dimension == dim:
                return r.raw
        raise KeyError((entity, dim))

    @property
    def dimensions(self) -> list:
        seen = []
        for r in self.rows:
            if r.dimension not in seen:
                seen.append(r.dimension)
        return seen

    @property
    def entities(self) -> list:
        seen = []
        for r in self.rows:
            if r.entity not in seen:
                seen.append(r.entity)
        return seen


def layout(kb: KnowledgeBase, dims, subjects, polarity: dict | None = None) -> CoordinateTable:
    """Coordinates of every subject on every dimension.

    ``polarity`` maps a dimension to ``-1`` to render larger popcounts as
    smaller axis values; the default is ``+1``.
    """
    dims, subjects = list(dims), list(subjects)
    if not dims:
        raise ValueError("at least one dimension is required")
    polarity = dict(polarity or {})
    table = CoordinateTable(kappa=kb.kappa, seed=kb.seed, polarity={d: polarity.get(d, 1) for d in dims})
    for d in dims:
        if d not in kb.symbols:
            raise KeyError(f"unknown symbol {d!r}")
        top = popcount(band(kb.phi, kb.symbols[d]))
        table.maxima[d] = top
        for x in subjects:
            raw = coordinate(kb, d, x)
            norm = Fraction(raw, top) if top else Fraction(0)
            adj = norm if table.polarity[d] >= 0 else 1 - norm
            table.rows.append(CoordinateRow(x, d, raw, norm, adj))
    return table


def _num(q: Fraction) -> str:
    return f"{float(q):.6f}"


def export_csv(table: CoordinateTable) -> str:
    out = io.StringIO()
    out.write(CSV_HEADER + "\n")
    for r in table.rows:
        out.write(f"{r.entity},{r.dimension},{r.raw},{_num(r.normalized)},{_num(r.adjusted)}\n")
    return out.getvalue()


def _jitter(name: str) -> tuple:
    h = zlib.crc32(name.encode("utf-8"))
    return 8 + (h % 17), -6 - ((h >> 8) % 13)


def svg_point(x: Fraction, y: Fraction) -> tuple:
    """Map unit coordinates into the view box; larger ``y`` is drawn higher."""
    return float(x) * VIEWBOX, (1 - float(y)) * VIEWBOX


def export_svg(table: CoordinateTable, dim_x: str, dim_y: str, title: str = "", captions: dict | None = None) -> str:
    """Scatter of adjusted coordinates; ``captions`` overrides point labels."""
    captions = captions or {}
    dims = table.dimensions
    for d in (dim_x, dim_y):
        if d not in dims:
            raise KeyError(f"dimension {d!r} missing from table")
    if dim_x == dim_y:
        raise ValueError("two distinct dimensions are required")
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="0 0 {VIEWBOX} {VIEWBOX}" '
        f'width="{VIEWBOX}" height="{VIEWBOX}">',
    ]
    if title:
        lines.append(f"  <title>{escape(title)}</title>")
    lines += [
        f'  <rect x="0" y="0" width="{VIEWBOX}" height="{VIEWBOX}" fill="white" stroke="#999"/>',
        f'  <line x1="{VIEWBOX // 2}" y1="0" x2="{VIEWBOX // 2}" y2="{VIEWBOX}" stroke="#ddd"/>',
        f'  <line x1="0" y1="{VIEWBOX // 2}" x2="{VIEWBOX}" y2="{VIEWBOX // 2}" stroke="#ddd"/>',
        f'  <text x="{VIEWBOX - 10}" y="{VIEWBOX - 10}" text-anchor="end" font-size="18">{escape(dim_x)} &#8594;</text>',
        f'  <text x="10" y="24" font-size="18">&#8593; {escape(dim_y)}</text>',
    ]
    for ent in table.entities:
        px, py = svg_point(table.value(ent, dim_x), table.value(ent, dim_y))
        dx, dy = _jitter(ent)
        lines.append(f'  <circle cx="{px:.2f}" cy="{py:.2f}" r="6" fill="#246"/>')
        lines.append(f'  <text x="{px + dx:.2f}" y="{py + dy:.2f}" font-size="16">{escape(captions.get(ent, ent))}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
