"""ASCII and SVG pictures of valuation maps.

Glyphs: ``.`` regular, ``1``-``9`` then ``a``-``z`` for zeros of weight
1-35, ``A``-``Z`` for infinities of weight 1-26, ``=`` for regular cells on a
measured strip, ``?`` for cells that are zero up to truncation and a blank
outside the domain.  Rows are printed from ``n = N`` down to ``n = 0``.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from html import escape

from .classify import UNDEFINED, StripProfile, ValuationMap

__all__ = ["RenderStyle", "glyph", "render_ascii", "parse_ascii", "render_svg"]

_ZERO_GLYPHS = string.digits[1:] + string.ascii_lowercase
_INF_GLYPHS = string.ascii_uppercase

_COLOURS = {"regular": "#f4f4f4", "zero": "#3b6fb6", "infinity": "#c0392b", "strip": "#9bd19b", "undefined": "#888888"}


def glyph(v, strip_member: bool = False) -> str:
    if v is None:
        return " "
    if v == UNDEFINED:
        return "?"
    if v == 0:
        return "=" if strip_member else "."
    if v > 0:
        if v > len(_ZERO_GLYPHS):
            raise ValueError(f"no glyph for a zero of weight {v}")
        return _ZERO_GLYPHS[v - 1]
    if -v > len(_INF_GLYPHS):
        raise ValueError(f"no glyph for an infinity of weight {-v}")
    return _INF_GLYPHS[-v - 1]


def _from_glyph(ch: str):
    if ch == " ":
        return None
    if ch == "?":
        return UNDEFINED
    if ch in ".=":
        return 0
    if ch in _ZERO_GLYPHS:
        return _ZERO_GLYPHS.index(ch) + 1
    if ch in _INF_GLYPHS:
        return -(_INF_GLYPHS.index(ch) + 1)
    raise ValueError(f"unknown glyph {ch!r}")


def _strip_members(strips) -> set:
    out = set()
    for s in strips:
        if s.orientation != "horizontal":
            continue
        lo, hi = s.span
        for i in range(len(s.weights) + 1):
            out.update((m, s.base + i) for m in range(lo, hi + 1))
    return out


@dataclass(frozen=True)
class RenderStyle:
    scale: int = 12
    format: str = "ascii"

    def render(self, vmap: ValuationMap, strips=()) -> str:
        if self.format == "svg":
            return render_svg(vmap, strips, self.scale)
        return render_ascii(vmap, strips)


def render_ascii(vmap: ValuationMap, strips: tuple[StripProfile, ...] | list = ()) -> str:
    members = _strip_members(strips)
    lines = []
    for n in range(vmap.N, -1, -1):
        lines.append("".join(glyph(vmap.values[m][n], (m, n) in members) for m in range(vmap.M + 1)))
    return "\n".join(lines) + "\n"


def parse_ascii(text: str, M: int, N: int, border=frozenset(), staircase: int = 0) -> ValuationMap:
    """Inverse of :func:`render_ascii` (strip membership is not recovered)."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if len(lines) != N + 1:
        raise ValueError(f"expected {N + 1} rows, got {len(lines)}")
    values = [[None] * (N + 1) for _ in range(M + 1)]
    for i, line in enumerate(lines):
        n = N - i
        line = line.ljust(M + 1)
        if len(line) != M + 1:
            raise ValueError(f"row {n} has {len(line)} columns, expected {M + 1}")
        for m, ch in enumerate(line):
            values[m][n] = _from_glyph(ch)
    return ValuationMap(M, N, values, border, staircase)


def _colour(v, member: bool) -> str:
    if v == UNDEFINED:
        return _COLOURS["undefined"]
    if v == 0:
        return _COLOURS["strip" if member else "regular"]
    return _COLOURS["zero" if v > 0 else "infinity"]


def render_svg(vmap: ValuationMap, strips=(), scale: int = 12) -> str:
    members = _strip_members(strips)
    W, H = (vmap.M + 1) * scale, (vmap.N + 1) * scale
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
        f'<g font-family="monospace" font-size="{max(6, scale * 3 // 4)}" text-anchor="middle">',
    ]
    for m in range(vmap.M + 1):
        for n in range(vmap.N + 1):
            v = vmap.values[m][n]
            if v is None:
                continue
            member = (m, n) in members
            x, y = m * scale, (vmap.N - n) * scale
            parts.append(f'<rect x="{x}" y="{y}" width="{scale}" height="{scale}" fill="{_colour(v, member)}"/>')
            if v != 0:
                g = escape(glyph(v))
                parts.append(f'<text x="{x + scale / 2}" y="{y + scale * 0.8}" fill="#ffffff">{g}</text>')
    parts.append("</g></svg>")
    return "\n".join(parts) + "\n"
