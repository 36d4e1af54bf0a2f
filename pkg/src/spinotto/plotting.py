"""Minimal SVG line plots; a convenience sidecar to the CSV outputs."""
from __future__ import annotations

import math
from pathlib import Path

_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]
_W, _H, _PAD = 640, 420, 56


def _transform(values: list[float], log: bool, lo: float, hi: float, size: int, pad: int, flip: bool):
    def scale(v: float) -> float:
        if log:
            v, vlo, vhi = math.log10(v), math.log10(lo), math.log10(hi)
        else:
            vlo, vhi = lo, hi
        frac = 0.5 if vhi == vlo else (v - vlo) / (vhi - vlo)
        return pad + (1 - frac if flip else frac) * (size - 2 * pad)

    return [scale(v) for v in values]


def write_svg_lineplot(
    path: str | Path,
    curves: dict[str, tuple[list[float], list[float]]],
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
    logx: bool = False,
    logy: bool = False,
) -> None:
    """Write one SVG with a polyline per named curve.

    Points with non-positive coordinates are dropped on log axes.
    """
    cleaned = {}
    for name, (xs, ys) in curves.items():
        pts = [
            (x, y)
            for x, y in zip(xs, ys)
            if (not logx or x > 0) and (not logy or y > 0)
        ]
        if pts:
            cleaned[name] = pts
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_W // 2}" y="22" text-anchor="middle" font-size="15">{title}</text>',
        f'<text x="{_W // 2}" y="{_H - 10}" text-anchor="middle" font-size="12">{xlabel}</text>',
        f'<text x="16" y="{_H // 2}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 16 {_H // 2})">{ylabel}</text>',
        f'<rect x="{_PAD}" y="{_PAD}" width="{_W - 2 * _PAD}" height="{_H - 2 * _PAD}" '
        f'fill="none" stroke="#999"/>',
    ]
    if cleaned:
        all_x = [x for pts in cleaned.values() for x, _ in pts]
        all_y = [y for pts in cleaned.values() for _, y in pts]
        x_lo, x_hi = min(all_x), max(all_x)
        y_lo, y_hi = min(all_y), max(all_y)
        for k, (name, pts) in enumerate(cleaned.items()):
            xs = _transform([p[0] for p in pts], logx, x_lo, x_hi, _W, _PAD, False)
            ys = _transform([p[1] for p in pts], logy, y_lo, y_hi, _H, _PAD, True)
            coords = " ".join(f"{x:.1f},{y:.1f}" for x, y in zip(xs, ys))
            color = _COLORS[k % len(_COLORS)]
            parts.append(
                f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>'
            )
            parts.append(
                f'<text x="{_W - _PAD + 4}" y="{_PAD + 14 * (k + 1)}" font-size="11" '
                f'fill="{color}">{name}</text>'
            )
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts), encoding="utf-8")
