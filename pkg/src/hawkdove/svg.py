"""Minimal deterministic SVG output.

Hand-rolled rather than delegating to a plotting library so that a fixed
seed produces byte-identical files: no timestamps, no hashed ids, fixed
number formatting.
"""

from __future__ import annotations

__all__ = ["Canvas"]


def _fmt(x: float) -> str:
    return f"{x:.6g}"


class Canvas:
    def __init__(self, width: float, height: float):
        self.width = width
        self.height = height
        self._parts: list[str] = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" '
            f'height="{_fmt(height)}" viewBox="0 0 {_fmt(width)} {_fmt(height)}">'
        ]

    def rect(self, x, y, w, h, fill, stroke="none", stroke_width=0.0):
        self._parts.append(
            f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(w)}" height="{_fmt(h)}" '
            f'fill="{fill}" stroke="{stroke}" stroke-width="{_fmt(stroke_width)}"/>')

    def line(self, x1, y1, x2, y2, stroke="black", width=1.0, dash=None):
        d = f' stroke-dasharray="{dash}"' if dash else ""
        self._parts.append(
            f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" '
            f'stroke="{stroke}" stroke-width="{_fmt(width)}"{d}/>')

    def polyline(self, points, stroke="steelblue", width=1.0, opacity=1.0):
        pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in points)
        self._parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{stroke}" '
            f'stroke-width="{_fmt(width)}" stroke-opacity="{_fmt(opacity)}"/>')

    def circle(self, x, y, r, fill="red", stroke="none"):
        self._parts.append(
            f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(r)}" '
            f'fill="{fill}" stroke="{stroke}"/>')

    def cross(self, x, y, size, stroke="red", width=1.5):
        s = size / 2.0
        self.line(x - s, y - s, x + s, y + s, stroke=stroke, width=width)
        self.line(x - s, y + s, x + s, y - s, stroke=stroke, width=width)

    def text(self, x, y, content, size=11, fill="black", anchor="start"):
        self._parts.append(
            f'<text x="{_fmt(x)}" y="{_fmt(y)}" font-size="{_fmt(size)}" '
            f'font-family="sans-serif" fill="{fill}" text-anchor="{anchor}">'
            f'{content}</text>')

    def to_string(self) -> str:
        return "\n".join(self._parts + ["</svg>"]) + "\n"

    def write(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_string())
