"""Axis-aligned bounding-box arithmetic in center-size form.

All boxes live in normalized image units: a box is (cx, cy, w, h) with
strictly positive sizes.  These primitives are pure float math; the loss
and gradient modules rebuild the same formulas generically so they can
run on dual numbers and on whole batches at once, and the tests pin the
two paths against each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# Smallest admissible width/height.  The optimizer clamps sizes up to this
# after every update so degenerate boxes cannot enter the geometry.
SIZE_FLOOR = 1e-8


@dataclass(frozen=True, slots=True)
class Box:
    """Axis-aligned box: center (cx, cy), width w > 0, height h > 0."""

    cx: float
    cy: float
    w: float
    h: float

    def __post_init__(self):
        for name in ("cx", "cy", "w", "h"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"Box.{name} must be finite, got {v!r}")
        if self.w <= 0.0 or self.h <= 0.0:
            raise ValueError(f"Box sizes must be positive, got w={self.w}, h={self.h}")

    @classmethod
    def from_corners(cls, x1: float, y1: float, x2: float, y2: float) -> "Box":
        """Build from corner form; requires x1 < x2 and y1 < y2."""
        return cls((x1 + x2) / 2.0, (y1 + y2) / 2.0, x2 - x1, y2 - y1)

    @classmethod
    def floored(cls, cx: float, cy: float, w: float, h: float) -> "Box":
        """Build with sizes clamped up to SIZE_FLOOR."""
        return cls(cx, cy, max(w, SIZE_FLOOR), max(h, SIZE_FLOOR))

    def corners(self) -> tuple[float, float, float, float]:
        """(x1, y1, x2, y2) corner view of the same box."""
        hw = self.w / 2.0
        hh = self.h / 2.0
        return (self.cx - hw, self.cy - hh, self.cx + hw, self.cy + hh)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.cx, self.cy, self.w, self.h)


@dataclass(frozen=True, slots=True)
class GeomPair:
    """Joint geometry of a box pair, everything the penalty terms consume.

    gap_x and gap_y are per-axis edge-to-edge distances
    ``|c_a - c_b| - (l_a + l_b) / 2``: positive when the boxes are
    separated on that axis, negative when their projections overlap.
    """

    intersection: float
    union: float
    enclose_w: float
    enclose_h: float
    center_dist: float
    enclose_diag: float
    gap_x: float
    gap_y: float


def area(b: Box) -> float:
    """Box area w * h."""
    return b.w * b.h


def _overlap_1d(lo_a: float, hi_a: float, lo_b: float, hi_b: float) -> float:
    return max(0.0, min(hi_a, hi_b) - max(lo_a, lo_b))


def iou(a: Box, b: Box) -> float:
    """Intersection over union in [0, 1].

    Boxes that only share an edge or a corner have zero-measure overlap
    and get IoU exactly 0.
    """
    ax1, ay1, ax2, ay2 = a.corners()
    bx1, by1, bx2, by2 = b.corners()
    inter = _overlap_1d(ax1, ax2, bx1, bx2) * _overlap_1d(ay1, ay2, by1, by2)
    union = area(a) + area(b) - inter
    return inter / union


def geom_pair(a: Box, b: Box) -> GeomPair:
    """All pairwise geometry in one pass."""
    ax1, ay1, ax2, ay2 = a.corners()
    bx1, by1, bx2, by2 = b.corners()
    inter = _overlap_1d(ax1, ax2, bx1, bx2) * _overlap_1d(ay1, ay2, by1, by2)
    union = area(a) + area(b) - inter
    enclose_w = max(ax2, bx2) - min(ax1, bx1)
    enclose_h = max(ay2, by2) - min(ay1, by1)
    dx = a.cx - b.cx
    dy = a.cy - b.cy
    return GeomPair(
        intersection=inter,
        union=union,
        enclose_w=enclose_w,
        enclose_h=enclose_h,
        center_dist=math.hypot(dx, dy),
        enclose_diag=math.hypot(enclose_w, enclose_h),
        gap_x=abs(dx) - (a.w + b.w) / 2.0,
        gap_y=abs(dy) - (a.h + b.h) / 2.0,
    )


def interpolate(pred: Box, gt: Box, alpha: float) -> Box:
    """Componentwise affine blend ``(1 - alpha) * pred + alpha * gt``.

    alpha must lie in (0, 1]; alpha = 1 returns gt exactly.
    """
    if not (0.0 < alpha <= 1.0):
        raise ValueError(f"alpha must be in (0, 1], got {alpha}")
    keep = 1.0 - alpha
    return Box(
        keep * pred.cx + alpha * gt.cx,
        keep * pred.cy + alpha * gt.cy,
        keep * pred.w + alpha * gt.w,
        keep * pred.h + alpha * gt.h,
    )
