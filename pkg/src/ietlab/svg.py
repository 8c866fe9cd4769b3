"""Static SVG diagrams: a two-row piece layout for ``T_N`` and nested Cantor levels."""

from __future__ import annotations

import xml.etree.ElementTree as ET
from fractions import Fraction

from .cantor import CantorSpec, level
from .reversal import ReversalFamilyMap

SVG_NS = "http://www.w3.org/2000/svg"
PALETTE = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
           "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")


def _num(v: float) -> str:
    # fixed precision keeps the output byte-identical across runs
    return f"{v:.4f}".rstrip("0").rstrip(".")


def _root(width: int, height: int) -> ET.Element:
    return ET.Element("svg", xmlns=SVG_NS, version="1.1", width=str(width), height=str(height),
                      viewBox=f"0 0 {width} {height}")


def _rect(parent: ET.Element, x: float, y: float, w: float, h: float, fill: str, title: str) -> None:
    r = ET.SubElement(parent, "rect", x=_num(x), y=_num(y), width=_num(w), height=_num(h),
                      fill=fill, stroke="black")
    r.set("stroke-width", "0.5")
    ET.SubElement(r, "title").text = title


def _text(parent: ET.Element, x: float, y: float, label: str) -> None:
    t = ET.SubElement(parent, "text", x=_num(x), y=_num(y))
    t.set("font-size", "12")
    t.set("font-family", "sans-serif")
    t.text = label


def tostring(root: ET.Element) -> str:
    ET.indent(root)
    return ET.tostring(root, encoding="unicode") + "\n"


def render_tn_layout(N: int, pieces: int, width: int = 800) -> str:
    """Domain pieces of ``T_N`` on the top bar, their images below in the same colours.

    Only the first ``pieces`` pieces are drawn; the remainder up to ``1/N``
    is shown as a grey tail in both rows.
    """
    if pieces < 1:
        raise ValueError("need at least one piece")
    fmap = ReversalFamilyMap(N)
    scale = width * N
    margin, bar, gap = 20, 30, 50
    root = _root(width + 2 * margin, 2 * bar + gap + 2 * margin + 20)
    top, bottom = margin + 15, margin + 15 + bar + gap
    _text(root, margin, margin + 5, f"T_{N}: domain (top), image (bottom), first {pieces} pieces")
    last_hi = Fraction(0)
    first_image_lo = Fraction(1, N)
    for i in range(pieces):
        p = fmap.piece(N + i)
        colour = PALETTE[i % len(PALETTE)]
        title = f"k={N + i}"
        _rect(root, margin + float(p.lo) * scale, top, float(p.length) * scale, bar, colour, title)
        img = p.image
        _rect(root, margin + float(img.lo) * scale, bottom, float(img.length) * scale, bar, colour, title)
        last_hi = p.hi
        first_image_lo = img.lo
    rest = Fraction(1, N) - last_hi
    _rect(root, margin + float(last_hi) * scale, top, float(rest) * scale, bar, "#dddddd", "remaining pieces")
    _rect(root, margin, bottom, float(first_image_lo) * scale, bar, "#dddddd", "remaining pieces")
    return tostring(root)


def render_cantor_levels(spec: CantorSpec, depth: int, width: int = 800) -> str:
    """One row per level ``k = 0..depth`` with the ``2^k`` intervals ``I_w``."""
    span = spec.b0 - spec.a0
    margin, bar, gap = 20, 14, 10
    root = _root(width + 2 * margin, (depth + 1) * (bar + gap) + 2 * margin)
    for k in range(depth + 1):
        y = margin + k * (bar + gap)
        for iv in level(spec, k):
            x = margin + float((iv.lo - spec.a0) / span) * width
            w = max(float((iv.hi - iv.lo) / span) * width, 0.5)
            _rect(root, x, y, w, bar, "#333333", f"I_{iv.word or 'ε'} = [{iv.lo}, {iv.hi}]")
    return tostring(root)
