"""Minimal SVG drawing of a chamber fan: rays for rank 2, the affine slice for rank 3."""

from __future__ import annotations

from fractions import Fraction
from xml.sax.saxutils import escape

from .cones import ChamberFan, _hull2, _Slice

SIZE = 400
MARGIN = 30


def _fmt(x) -> str:
    return f"{float(x):.3f}"


def _frame(points: list[tuple]) -> tuple:
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    w = max(max(xs) - min(xs), Fraction(1, 1000))
    h = max(max(ys) - min(ys), Fraction(1, 1000))
    s = Fraction(SIZE - 2 * MARGIN) / max(w, h)
    return min(xs), max(ys), s


def _short(label: str) -> str:
    return label[len("rays:"):] if label.startswith("rays:") else label


def fan_to_svg(fan: ChamberFan, names: dict | None = None) -> str:
    """Render the fan; ``names`` maps primitive rays to display names."""
    names = names or {}
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    if fan.support.dim == 2:
        rays = fan.support.rays + [r for ch in fan.chambers for r in ch.rays]
        rays = sorted(set(rays))
        pts = [(Fraction(0), Fraction(0))] + [(Fraction(a), Fraction(b)) for a, b in rays]
        x0, y1, s = _frame(pts)

        def tr(p):
            return (MARGIN + (p[0] - x0) * s, MARGIN + (y1 - p[1]) * s)

        o = tr((0, 0))
        for ray in rays:
            end = tr(ray)
            out.append(
                f'<line x1="{_fmt(o[0])}" y1="{_fmt(o[1])}" x2="{_fmt(end[0])}" '
                f'y2="{_fmt(end[1])}" stroke="black" stroke-width="1"/>'
            )
            label = names.get(tuple(ray), str(list(ray)))
            out.append(
                f'<text x="{_fmt(end[0])}" y="{_fmt(end[1])}" font-size="11">{escape(label)}</text>'
            )
    else:
        sl = _Slice(fan.support)
        polys = [[sl.project(g) for g in ch.rays] for ch in fan.chambers]
        polys = [_hull2(p) for p in polys]
        x0, y1, s = _frame([p for poly in polys for p in poly])

        def tr(p):
            return (MARGIN + (p[0] - x0) * s, MARGIN + (y1 - p[1]) * s)

        for poly, labels in zip(polys, fan.labels):
            pts = " ".join(f"{_fmt(tr(p)[0])},{_fmt(tr(p)[1])}" for p in poly)
            fill = "#cde" if "nef" in labels else ("#eed" if "movable" in labels else "#f4f4f4")
            out.append(f'<polygon points="{pts}" fill="{fill}" stroke="black" stroke-width="1"/>')
            cx = sum(tr(p)[0] for p in poly) / len(poly)
            cy = sum(tr(p)[1] for p in poly) / len(poly)
            text = _short(labels[0]) if labels else ""
            out.append(
                f'<text x="{_fmt(cx)}" y="{_fmt(cy)}" font-size="9" text-anchor="middle">'
                f"{escape(text)}</text>"
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"
