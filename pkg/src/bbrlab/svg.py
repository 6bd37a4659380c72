"""Minimal SVG writers for curve and box-trajectory figures.

Everything is assembled from f-strings with fixed number formatting, so
a given input always produces the same bytes.  No plotting libraries.
"""

from __future__ import annotations

import numpy as np

COLORS = (
    "#1f77b4",
    "#d62728",
    "#2ca02c",
    "#9467bd",
    "#ff7f0e",
    "#8c564b",
    "#e377c2",
    "#17becf",
    "#bcbd22",
    "#7f7f7f",
)


def _esc(text: str) -> str:
    return (
        str(text)
        .replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
    )


def render_line_chart(
    series: list[tuple[str, np.ndarray]],
    x: np.ndarray | None = None,
    title: str = "",
    x_label: str = "",
    y_label: str = "",
    width: int = 860,
    height: int = 520,
) -> str:
    """Multi-series line chart; series is a list of (label, y-values)."""
    if not series:
        raise ValueError("no series to plot")
    ys = [np.asarray(y, dtype=np.float64) for _, y in series]
    n_pts = max(len(y) for y in ys)
    if x is None:
        x = np.arange(n_pts)
    x = np.asarray(x, dtype=np.float64)

    x_min, x_max = float(x.min()), float(x.max())
    y_min = min(0.0, min(float(y.min()) for y in ys))
    y_max = max(float(y.max()) for y in ys)
    if y_max <= y_min:
        y_max = y_min + 1.0
    y_pad = 0.05 * (y_max - y_min)
    y_max += y_pad
    if x_max <= x_min:
        x_max = x_min + 1.0

    ml, mr, mt, mb = 70, 160, 42, 48
    pw = width - ml - mr
    ph = height - mt - mb

    def xp(v):
        return ml + (v - x_min) / (x_max - x_min) * pw

    def yp(v):
        return mt + ph - (v - y_min) / (y_max - y_min) * ph

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="Helvetica, Arial, sans-serif">',
        f'<text x="{width / 2:.1f}" y="24" text-anchor="middle" font-size="16">{_esc(title)}</text>',
        f'<line x1="{ml}" y1="{mt}" x2="{ml}" y2="{mt + ph}" stroke="#333" stroke-width="1"/>',
        f'<line x1="{ml}" y1="{mt + ph}" x2="{ml + pw}" y2="{mt + ph}" stroke="#333" stroke-width="1"/>',
    ]

    for i in range(6):
        tv = y_min + (y_max - y_min) * i / 5
        py = yp(tv)
        parts.append(
            f'<line x1="{ml - 4}" y1="{py:.2f}" x2="{ml}" y2="{py:.2f}" stroke="#333" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{ml - 8}" y="{py + 4:.2f}" text-anchor="end" font-size="11">{tv:.4g}</text>'
        )
        if i > 0:
            parts.append(
                f'<line x1="{ml}" y1="{py:.2f}" x2="{ml + pw}" y2="{py:.2f}" stroke="#ddd" stroke-width="0.5"/>'
            )
    for i in range(7):
        tv = x_min + (x_max - x_min) * i / 6
        px = xp(tv)
        parts.append(
            f'<line x1="{px:.2f}" y1="{mt + ph}" x2="{px:.2f}" y2="{mt + ph + 4}" stroke="#333" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{px:.2f}" y="{mt + ph + 18}" text-anchor="middle" font-size="11">{tv:.4g}</text>'
        )

    if x_label:
        parts.append(
            f'<text x="{ml + pw / 2:.1f}" y="{height - 10}" text-anchor="middle" font-size="12">{_esc(x_label)}</text>'
        )
    if y_label:
        parts.append(
            f'<text x="18" y="{mt + ph / 2:.1f}" text-anchor="middle" font-size="12" '
            f'transform="rotate(-90 18 {mt + ph / 2:.1f})">{_esc(y_label)}</text>'
        )

    for idx, (label, y) in enumerate(series):
        color = COLORS[idx % len(COLORS)]
        y = np.asarray(y, dtype=np.float64)
        pts = " ".join(f"{xp(x[i]):.2f},{yp(y[i]):.2f}" for i in range(len(y)))
        parts.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1.6" points="{pts}"/>'
        )
        ly = mt + 14 + 16 * idx
        lx = ml + pw + 12
        parts.append(
            f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 18}" y2="{ly - 4}" stroke="{color}" stroke-width="2"/>'
        )
        parts.append(
            f'<text x="{lx + 24}" y="{ly}" font-size="11">{_esc(label)}</text>'
        )

    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render_box_trajectory(
    boxes,
    target,
    title: str = "",
    size: int = 640,
) -> str:
    """Draw a descent as rectangles: start black, intermediates blue,
    final green, target red.

    Emits exactly len(boxes) + 1 rect elements (every visited box plus
    the target); the legend deliberately uses lines, not rects.
    """
    all_boxes = list(boxes) + [target]
    xs = []
    ys = []
    for b in all_boxes:
        x1, y1, x2, y2 = b.corners()
        xs += [x1, x2]
        ys += [y1, y2]
    x_min, x_max = min(xs), max(xs)
    y_min, y_max = min(ys), max(ys)
    span = max(x_max - x_min, y_max - y_min, 1e-9)
    pad = 0.05 * span
    x_min -= pad
    y_min -= pad
    span += 2 * pad
    margin = 30

    scale = (size - 2 * margin) / span

    def rect(b, color, sw, opacity=1.0):
        x1, y1, x2, y2 = b.corners()
        px = margin + (x1 - x_min) * scale
        # flip y so larger data y draws higher
        py = margin + (y_min + span - y2) * scale
        return (
            f'<rect x="{px:.2f}" y="{py:.2f}" width="{(x2 - x1) * scale:.2f}" '
            f'height="{(y2 - y1) * scale:.2f}" fill="none" stroke="{color}" '
            f'stroke-width="{sw}" stroke-opacity="{opacity}"/>'
        )

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size + 40}" '
        f'viewBox="0 0 {size} {size + 40}" font-family="Helvetica, Arial, sans-serif">',
        f'<text x="{size / 2:.1f}" y="20" text-anchor="middle" font-size="14">{_esc(title)}</text>',
    ]
    for b in boxes[1:-1]:
        parts.append(rect(b, "#1f77b4", 0.8, 0.35))
    if len(boxes) > 1:
        parts.append(rect(boxes[-1], "#2ca02c", 2.0))
    parts.append(rect(boxes[0], "#000000", 1.6))
    parts.append(rect(target, "#d62728", 2.0))

    legend = (
        ("#000000", "start"),
        ("#1f77b4", "intermediate"),
        ("#2ca02c", "final"),
        ("#d62728", "target"),
    )
    lx = 12
    for color, label in legend:
        parts.append(
            f'<line x1="{lx}" y1="{size + 26}" x2="{lx + 16}" y2="{size + 26}" '
            f'stroke="{color}" stroke-width="3"/>'
        )
        parts.append(
            f'<text x="{lx + 20}" y="{size + 30}" font-size="11">{label}</text>'
        )
        lx += 26 + 9 * len(label)
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
