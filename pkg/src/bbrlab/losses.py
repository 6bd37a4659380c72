"""IoU-family regression losses behind one evaluation interface.

Every loss is written once over generic scalars: plain floats, numpy
arrays (whole batches of box pairs), or Dual4 values for forward-mode
gradients.  A box is the 4-tuple (cx, cy, w, h) inside this module;
the public wrappers take Box objects.

Composition conventions, fixed here and relied on by the tests:

* diou adds the squared-center-distance ratio to the IoU loss.
* ciou gates its aspect term off when IoU < 0.5.
* eiou keeps the center-distance ratio alongside its width/height terms.
* wiou multiplies the IoU loss by exp(d^2 / diag^2) with the squared
  enclosing diagonal treated as a constant during differentiation.
* siou measures center offsets as squared ratios against the enclosing
  box sides; its angle cost is defined as 1 at zero center distance.
* piou averages the four edge discrepancies in corner form, each
  normalized by the matching ground-truth side.
* dinterpiou clamps (1 - IoU) into [clamp_low, clamp_high] and treats
  the clamped value as a constant during differentiation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np

from .boxes import Box, geom_pair, iou as box_iou
from .dual import gabs, gatan, gclamp, gexp, gmax, gmin, gpow, gwhere, value_of

KINDS = (
    "l1",
    "iou",
    "giou",
    "diou",
    "ciou",
    "eiou",
    "wiou",
    "siou",
    "piou",
    "interpiou",
    "dinterpiou",
)

DEFAULT_ALPHA = 0.98
DEFAULT_CLAMP_LOW = 0.5
DEFAULT_CLAMP_HIGH = 0.99
DEFAULT_THETA = 4.0

# Guard for denominators that are provably positive whenever their branch
# is selected; keeps masked-out lanes free of division warnings.
_TINY = 1e-300

_FOUR_OVER_PI2 = 4.0 / (math.pi * math.pi)


@dataclass(frozen=True, slots=True)
class LossSpec:
    """A loss kind plus the hyperparameters that kind consumes.

    alpha drives interpiou, (clamp_low, clamp_high) drive dinterpiou,
    theta drives siou; the rest of the kinds ignore all three.
    """

    kind: str
    alpha: float = DEFAULT_ALPHA
    clamp_low: float = DEFAULT_CLAMP_LOW
    clamp_high: float = DEFAULT_CLAMP_HIGH
    theta: float = DEFAULT_THETA

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown loss kind {self.kind!r}; expected one of {KINDS}")
        if self.kind == "interpiou" and not (0.0 < self.alpha <= 1.0):
            raise ValueError(f"interpiou alpha must be in (0, 1], got {self.alpha}")
        if self.kind == "dinterpiou" and not (
            0.0 <= self.clamp_low <= self.clamp_high <= 0.99
        ):
            raise ValueError(
                "dinterpiou clamp must satisfy 0 <= low <= high <= 0.99, "
                f"got ({self.clamp_low}, {self.clamp_high})"
            )
        if self.kind == "siou" and not (2.0 <= self.theta <= 4.0):
            raise ValueError(f"siou theta must be in [2, 4], got {self.theta}")

    def label(self) -> str:
        """Short name safe for filenames and CSV column headers."""
        if self.kind == "interpiou":
            return f"interpiou_a{self.alpha:g}"
        if self.kind == "dinterpiou":
            return f"dinterpiou_{self.clamp_low:g}_{self.clamp_high:g}"
        if self.kind == "siou" and self.theta != DEFAULT_THETA:
            return f"siou_t{self.theta:g}"
        return self.kind


@dataclass(frozen=True)
class PenaltyBreakdown:
    """Every tracked term evaluated at one box pair.

    terms holds r_giou, r_diou_dist, r_eiou_wh, r_siou, r_piou and
    r_interp; total is the composed loss for the spec the breakdown was
    asked about (the bare IoU loss when no spec is given).
    """

    l_iou: float
    l1: float
    terms: dict = field(default_factory=dict)
    total: float = 0.0


# ----------------------------------------------------------------------
# generic core over (cx, cy, w, h) tuples
# ----------------------------------------------------------------------

def _sq(x):
    return x * x


def _corners4(b):
    cx, cy, w, h = b
    hw = w * 0.5
    hh = h * 0.5
    return cx - hw, cx + hw, cy - hh, cy + hh


def _inter_union(p, g):
    px1, px2, py1, py2 = _corners4(p)
    gx1, gx2, gy1, gy2 = _corners4(g)
    iw = gmax(gmin(px2, gx2) - gmax(px1, gx1), 0.0)
    ih = gmax(gmin(py2, gy2) - gmax(py1, gy1), 0.0)
    inter = iw * ih
    union = p[2] * p[3] + g[2] * g[3] - inter
    return inter, union


def _iou4(p, g):
    inter, union = _inter_union(p, g)
    return inter / union


def _iou_loss4(p, g):
    return 1.0 - _iou4(p, g)


def _enclose4(p, g):
    px1, px2, py1, py2 = _corners4(p)
    gx1, gx2, gy1, gy2 = _corners4(g)
    return gmax(px2, gx2) - gmin(px1, gx1), gmax(py2, gy2) - gmin(py1, gy1)


def _l1_4(p, g):
    return gabs(p[0] - g[0]) + gabs(p[1] - g[1]) + gabs(p[2] - g[2]) + gabs(p[3] - g[3])


def _interp4(p, g, alpha):
    keep = 1.0 - alpha
    return tuple(keep * p[i] + alpha * g[i] for i in range(4))


def _giou_term(p, g, union):
    ew, eh = _enclose4(p, g)
    enclose_area = ew * eh
    return (enclose_area - union) / enclose_area


def _center_term(p, g):
    dx = p[0] - g[0]
    dy = p[1] - g[1]
    ew, eh = _enclose4(p, g)
    return (dx * dx + dy * dy) / (ew * ew + eh * eh)


def _eiou_wh_term(p, g):
    ew, eh = _enclose4(p, g)
    return _sq(p[2] - g[2]) / _sq(ew) + _sq(p[3] - g[3]) / _sq(eh)


def _siou_costs(p, g, theta):
    dx = g[0] - p[0]
    dy = g[1] - p[1]
    adx = gabs(dx)
    ady = gabs(dy)
    d2 = adx * adx + ady * ady
    # Angle cost 1 - 2 sin^2(arcsin(|dy|/d) - pi/4), written in the
    # algebraically identical form 2|dx||dy|/d^2 so it stays
    # differentiable when the centers align on an axis; 1 at d = 0.
    lam = gwhere(value_of(d2) > 0.0, 2.0 * adx * ady / gmax(d2, _TINY), 1.0)
    gamma = 2.0 - lam
    ew, eh = _enclose4(p, g)
    dist = 2.0 - gexp(-gamma * _sq(dx / ew)) - gexp(-gamma * _sq(dy / eh))
    om_w = gabs(p[2] - g[2]) / gmax(p[2], g[2])
    om_h = gabs(p[3] - g[3]) / gmax(p[3], g[3])
    shape = gpow(1.0 - gexp(-om_w), theta) + gpow(1.0 - gexp(-om_h), theta)
    return dist, shape


def _piou_term(p, g):
    px1, px2, py1, py2 = _corners4(p)
    gx1, gx2, gy1, gy2 = _corners4(g)
    gw = g[2]
    gh = g[3]
    k = (
        gabs(px1 - gx1) / gw
        + gabs(px2 - gx2) / gw
        + gabs(py1 - gy1) / gh
        + gabs(py2 - gy2) / gh
    ) * 0.25
    return 1.0 - gexp(-(k * k))


def _ciou4(p, g):
    i = _iou4(p, g)
    one_minus = 1.0 - i
    v = _FOUR_OVER_PI2 * _sq(gatan(g[2] / g[3]) - gatan(p[2] / p[3]))
    # Trade-off weight: off below the IoU gate, v/((1 - IoU) + v) above it.
    denom = gmax(one_minus + v, _TINY)
    alpha_c = gwhere(value_of(i) >= 0.5, v / denom, 0.0)
    return one_minus + _center_term(p, g) + alpha_c * v


def _wiou4(p, g, frozen):
    if frozen is not None and "wiou_enclose_sq" in frozen:
        dd = frozen["wiou_enclose_sq"]
    else:
        ew, eh = _enclose4(p, g)
        ewv = value_of(ew)
        ehv = value_of(eh)
        dd = ewv * ewv + ehv * ehv
    dx = p[0] - g[0]
    dy = p[1] - g[1]
    return gexp((dx * dx + dy * dy) / dd) * _iou_loss4(p, g)


def _interpiou4(p, g, alpha):
    # At alpha = 1 the blend is gt itself and the second term is exactly
    # zero; short-circuiting keeps the reduction to the bare IoU loss
    # bitwise instead of leaving corner-rounding residue.
    if isinstance(alpha, float) and alpha == 1.0:
        return _iou_loss4(p, g)
    return _iou_loss4(p, g) + _iou_loss4(_interp4(p, g, alpha), g)


def _dinterpiou4(p, g, lo, hi, frozen):
    i = _iou4(p, g)
    if frozen is not None and "alpha_dyn" in frozen:
        a = frozen["alpha_dyn"]
    else:
        a = np.clip(1.0 - value_of(i), lo, hi)
    return (1.0 - i) + _iou_loss4(_interp4(p, g, a), g)


def _loss_value(spec: LossSpec, p, g, frozen=None):
    """Evaluate spec at a generic box pair; the single dispatch point."""
    k = spec.kind
    if k == "l1":
        return _l1_4(p, g)
    if k == "iou":
        return _iou_loss4(p, g)
    if k == "giou":
        inter, union = _inter_union(p, g)
        return (1.0 - inter / union) + _giou_term(p, g, union)
    if k == "diou":
        return _iou_loss4(p, g) + _center_term(p, g)
    if k == "ciou":
        return _ciou4(p, g)
    if k == "eiou":
        return _iou_loss4(p, g) + _center_term(p, g) + _eiou_wh_term(p, g)
    if k == "wiou":
        return _wiou4(p, g, frozen)
    if k == "siou":
        dist, shape = _siou_costs(p, g, spec.theta)
        return _iou_loss4(p, g) + (dist + shape) * 0.5
    if k == "piou":
        return _iou_loss4(p, g) + _piou_term(p, g)
    if k == "interpiou":
        return _interpiou4(p, g, spec.alpha)
    if k == "dinterpiou":
        return _dinterpiou4(p, g, spec.clamp_low, spec.clamp_high, frozen)
    raise ValueError(f"unknown loss kind {k!r}")


def _frozen_for_fd(spec: LossSpec, p, g):
    """Detached subterms evaluated at the base point.

    Finite differencing must perturb the same function the gradient is
    defined for, so quantities the losses detach are frozen here and
    passed back into _loss_value at the perturbed points.
    """
    if spec.kind == "dinterpiou":
        a = np.clip(1.0 - _iou4(p, g), spec.clamp_low, spec.clamp_high)
        return {"alpha_dyn": a}
    if spec.kind == "wiou":
        ew, eh = _enclose4(p, g)
        return {"wiou_enclose_sq": ew * ew + eh * eh}
    return None


def _breakdown_values(p, g, alpha):
    """All tracked metric terms at once, value path only.

    Returns a dict of arrays (or scalars) keyed by metric name; r_interp
    uses the supplied interpolation factor.
    """
    inter, union = _inter_union(p, g)
    iou_v = inter / union
    ew, eh = _enclose4(p, g)
    enclose_area = ew * eh
    dx = p[0] - g[0]
    dy = p[1] - g[1]
    d2 = dx * dx + dy * dy
    diag2 = ew * ew + eh * eh
    dist, shape = _siou_costs(p, g, DEFAULT_THETA)
    # Metrics that are nonnegative in exact arithmetic are clamped at 0
    # here: corner round-trips can leave a -1e-16 residue (e.g. r_giou
    # under containment), which would be noise in reports.  The loss
    # compositions themselves are left untouched.
    return {
        "l_iou": np.maximum(1.0 - iou_v, 0.0),
        "l1": _l1_4(p, g),
        "r_giou": np.maximum((enclose_area - union) / enclose_area, 0.0),
        "r_diou_dist": d2 / diag2,
        "r_eiou_wh": _sq(p[2] - g[2]) / _sq(ew) + _sq(p[3] - g[3]) / _sq(eh),
        "r_siou": (dist + shape) * 0.5,
        "r_piou": _piou_term(p, g),
        "r_interp": np.maximum(_iou_loss4(_interp4(p, g, alpha), g), 0.0),
    }


# ----------------------------------------------------------------------
# public wrappers over Box
# ----------------------------------------------------------------------

def _box4(b: Box):
    return (
        np.float64(b.cx),
        np.float64(b.cy),
        np.float64(b.w),
        np.float64(b.h),
    )


def eval_loss(spec: LossSpec, pred: Box, gt: Box) -> float:
    """Loss value for one box pair.

    Coincident pairs return exactly 0.0: every supported loss vanishes
    there in exact arithmetic, and snapping removes the +-1e-16 residue
    the corner round-trip would otherwise leave.
    """
    if pred == gt:
        return 0.0
    return float(_loss_value(spec, _box4(pred), _box4(gt)))


def penalty_breakdown(
    pred: Box,
    gt: Box,
    alpha: float = DEFAULT_ALPHA,
    spec: LossSpec | None = None,
) -> PenaltyBreakdown:
    """Evaluate every penalty term at one pair, whatever loss is driving.

    total is eval_loss(spec, ...) when a spec is given, otherwise the
    bare IoU loss.
    """
    vals = _breakdown_values(_box4(pred), _box4(gt), alpha)
    l_iou = float(vals.pop("l_iou"))
    l1 = float(vals.pop("l1"))
    terms = {k: float(v) for k, v in vals.items()}
    total = eval_loss(spec, pred, gt) if spec is not None else l_iou
    return PenaltyBreakdown(l_iou=l_iou, l1=l1, terms=terms, total=total)


def min_alpha(pred: Box, gt: Box) -> float:
    """Smallest interpolation factor guaranteeing the blend overlaps gt.

    Per axis: gap / (gap + gt_side) when the boxes are separated on that
    axis, else 0; the bound is the max over both axes.  Any factor
    strictly above it yields an interpolated box with positive IoU
    against gt.
    """
    gp = geom_pair(pred, gt)
    ax = 0.0 if gp.gap_x <= 0.0 else gp.gap_x / (gp.gap_x + gt.w)
    ay = 0.0 if gp.gap_y <= 0.0 else gp.gap_y / (gp.gap_y + gt.h)
    return max(ax, ay)


def dynamic_alpha(pred: Box, gt: Box, low: float, high: float) -> float:
    """(1 - IoU) clamped into [low, high] with 0 <= low <= high <= 0.99."""
    if not (0.0 <= low <= high <= 0.99):
        raise ValueError(f"clamp must satisfy 0 <= low <= high <= 0.99, got ({low}, {high})")
    return float(np.clip(1.0 - box_iou(pred, gt), low, high))
