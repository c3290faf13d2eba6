"""SVG drawing of an embedding dump, optionally with one chain highlighted."""

from __future__ import annotations

from typing import Optional, Sequence
from xml.sax.saxutils import escape

from lislab.model import WeightedPoint

COLORS = {
    "L": "#555555",
    "Lp": "#e08a1e",
    "R": "#2e8b57",
    "A": "#1f5fd6",
    "Ap": "#1f5fd6",
    "B": "#1f5fd6",
}
SPECIAL = ("A", "Ap", "B")
CHAIN_COLOR = "#d62728"

PREAMBLE = """\
<?xml version="1.0" encoding="UTF-8" standalone="no"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">
<rect x="0" y="0" width="{w}" height="{h}" fill="#ffffff"/>
"""


def _label_text(label) -> str:
    fam, i, j = label
    if fam in ("L", "Lp", "R"):
        return f"{fam}({i},{j})"
    if fam == "B":
        return f"B({i})"
    return f"{fam}({j})"


def render_svg(points: Sequence[WeightedPoint], chain: Optional[tuple] = None,
               width: int = 900, height: int = 900, margin: int = 30,
               show_weights: bool = True, title: Optional[str] = None) -> str:
    """Render labelled points (as read from a dump) to an SVG document.

    ``chain`` is ``(weight, [points])``; its points are joined by a polyline
    and circled. Output depends only on the arguments.
    """
    pts = sorted(points, key=lambda p: p.x)
    if pts:
        x0, x1 = min(p.x for p in pts), max(p.x for p in pts)
        y0, y1 = min(p.y for p in pts), max(p.y for p in pts)
    else:
        x0 = x1 = y0 = y1 = 0
    sx = (width - 2 * margin) / max(1, x1 - x0)
    sy = (height - 2 * margin) / max(1, y1 - y0)

    def px(p):
        return margin + (p.x - x0) * sx, height - margin - (p.y - y0) * sy

    out = [PREAMBLE.format(w=width, h=height)]
    if title:
        out.append(f"<title>{escape(title)}</title>\n")
    out.append('<g id="points">\n')
    for p in pts:
        fam = p.label[0]
        cx, cy = px(p)
        special = fam in SPECIAL
        cls = f"point family-{fam}" + (" special" if special else "")
        r = 5 if special else 3.5
        out.append(
            f'<circle class="{cls}" data-label="{_label_text(p.label)}" data-x="{p.x}" '
            f'data-y="{p.y}" data-w="{p.w}" cx="{cx:.2f}" cy="{cy:.2f}" r="{r}" '
            f'fill="{COLORS[fam]}"/>\n')
        if show_weights:
            out.append(f'<text class="weight" x="{cx + 4:.2f}" y="{cy - 4:.2f}" '
                       f'font-size="9" font-family="monospace" fill="#333333">{p.w}</text>\n')
    out.append("</g>\n")

    if chain is not None:
        weight, path = chain
        coords = " ".join(f"{cx:.2f},{cy:.2f}" for cx, cy in map(px, path))
        start, end = _label_text(path[0].label), _label_text(path[-1].label)
        out.append(f'<g id="chain" data-start="{start}" data-end="{end}" data-weight="{weight}">\n')
        out.append(f'<polyline class="chain" points="{coords}" fill="none" '
                   f'stroke="{CHAIN_COLOR}" stroke-width="2"/>\n')
        for p in path:
            cx, cy = px(p)
            out.append(f'<circle class="chain-point" data-label="{_label_text(p.label)}" '
                       f'cx="{cx:.2f}" cy="{cy:.2f}" r="7" fill="none" stroke="{CHAIN_COLOR}"/>\n')
        out.append("</g>\n")

    out.append("</svg>\n")
    return "".join(out)
