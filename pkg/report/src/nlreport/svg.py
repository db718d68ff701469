"""Minimal deterministic SVG canvas.

Writes plain SVG with fixed-precision coordinates so identical inputs yield
byte-identical files (diff-friendly golden tests)."""

from typing import List, Optional, Sequence, Tuple


def _fmt(x: float) -> str:
    return f"{x:.2f}"


class Canvas:
    def __init__(self, width: int = 640, height: int = 480):
        self.width = width
        self.height = height
        self._parts: List[str] = []

    def line(self, x1, y1, x2, y2, color="#000000", width=1.0, dash=None):
        d = f' stroke-dasharray="{dash}"' if dash else ""
        self._parts.append(
            f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" '
            f'y2="{_fmt(y2)}" stroke="{color}" stroke-width="{width}"{d}/>')

    def polyline(self, pts: Sequence[Tuple[float, float]], color="#000000",
                 width=1.5):
        path = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts)
        self._parts.append(
            f'<polyline points="{path}" fill="none" stroke="{color}" '
            f'stroke-width="{width}"/>')

    def circle(self, x, y, r=3.0, color="#000000"):
        self._parts.append(
            f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(r)}" '
            f'fill="{color}" fill-opacity="0.6"/>')

    def text(self, x, y, s, size=12, color="#000000", anchor="start"):
        self._parts.append(
            f'<text x="{_fmt(x)}" y="{_fmt(y)}" font-size="{size}" '
            f'font-family="sans-serif" fill="{color}" '
            f'text-anchor="{anchor}">{s}</text>')

    def to_svg(self) -> str:
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" '
                f'width="{self.width}" height="{self.height}" '
                f'viewBox="0 0 {self.width} {self.height}">\n'
                f'<rect width="{self.width}" height="{self.height}" '
                f'fill="#ffffff"/>\n')
        return head + "\n".join(self._parts) + "\n</svg>\n"
