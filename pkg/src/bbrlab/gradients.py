"""Three gradient routes for the loss zoo, kept deliberately independent.

* grad_autodiff: forward-mode dual numbers through the shared loss core.
* grad_analytic_iou: the closed-form IoU-loss gradient, derived from the
  clamped-overlap geometry, written from the formula rather than from
  the autodiff computation order.
* grad_fd: central finite differences of the loss values.

The batch variants take (4, n) arrays of (cx, cy, w, h) columns and
return (4, n) gradients; the scalar variants wrap single Box pairs.
Gradients are always with respect to the prediction box only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .boxes import Box
from .dual import Dual4, seed_box
from .losses import LossSpec, _box4, _frozen_for_fd, _loss_value


@dataclass(frozen=True, slots=True)
class Grad4:
    """Gradient of a scalar loss with respect to (cx, cy, w, h)."""

    d_cx: float
    d_cy: float
    d_w: float
    d_h: float

    def as_array(self) -> np.ndarray:
        return np.array([self.d_cx, self.d_cy, self.d_w, self.d_h])


class NonDifferentiableError(ValueError):
    """Raised on request when a pair sits on a subgradient boundary."""


def edges_coincide(pred: Box, gt: Box, tol: float = 0.0) -> bool:
    """True when any pred edge coordinate meets any gt edge coordinate.

    These are the configurations where the overlap min/max kinks sit; the
    gradient there is a one-sided convention rather than a derivative.
    """
    px1, py1, px2, py2 = pred.corners()
    gx1, gy1, gx2, gy2 = gt.corners()
    for a in (px1, px2):
        for b in (gx1, gx2):
            if abs(a - b) <= tol:
                return True
    for a in (py1, py2):
        for b in (gy1, gy2):
            if abs(a - b) <= tol:
                return True
    return False


def edge_coincidence_mask(pred: np.ndarray, gt: np.ndarray, tol: float = 0.0) -> np.ndarray:
    """Vectorized edges_coincide over (4, n) batches; True marks a kink."""
    phw = pred[2] * 0.5
    phh = pred[3] * 0.5
    ghw = gt[2] * 0.5
    ghh = gt[3] * 0.5
    pe_x = (pred[0] - phw, pred[0] + phw)
    ge_x = (gt[0] - ghw, gt[0] + ghw)
    pe_y = (pred[1] - phh, pred[1] + phh)
    ge_y = (gt[1] - ghh, gt[1] + ghh)
    hit = np.zeros(np.shape(pred[0]), dtype=bool)
    for a in pe_x:
        for b in ge_x:
            hit |= np.abs(a - b) <= tol
    for a in pe_y:
        for b in ge_y:
            hit |= np.abs(a - b) <= tol
    return hit


# ----------------------------------------------------------------------
# forward mode
# ----------------------------------------------------------------------

def loss_and_grad_batch(spec: LossSpec, pred: np.ndarray, gt) -> tuple[np.ndarray, np.ndarray]:
    """One dual-number pass: loss values (n,) and gradients (4, n).

    Lanes where pred equals gt in all four parameters get exactly zero
    loss and gradient: that point is the global minimum of every
    supported loss, where zero is the canonical subgradient (and what
    central differences report), while the raw evaluation would leave
    corner-rounding residue and pick an arbitrary side of the min/max
    kink.
    """
    pred = np.asarray(pred, dtype=np.float64)
    out = _loss_value(spec, seed_box(pred), tuple(gt))
    if isinstance(out, Dual4):
        val = np.asarray(out.val)
        tan = np.asarray(out.tan)
    else:
        val = np.asarray(out)
        tan = np.zeros((4,) + val.shape)
    same = np.all(pred == np.broadcast_to(np.asarray(gt, dtype=np.float64), pred.shape), axis=0)
    if val.ndim == 0:
        if bool(same):
            val = np.zeros(())
            tan = np.zeros_like(tan)
    elif np.any(same):
        val = val.copy()
        tan = tan.copy()
        val[same] = 0.0
        tan[:, same] = 0.0
    return val, tan


def grad_autodiff_batch(spec: LossSpec, pred: np.ndarray, gt) -> np.ndarray:
    _, tan = loss_and_grad_batch(spec, pred, gt)
    return tan


def grad_autodiff(spec: LossSpec, pred: Box, gt: Box, *, check_kinks: bool = False) -> Grad4:
    """Forward-mode gradient for one pair.

    With check_kinks=True, an exactly edge-coincident pair raises
    NonDifferentiableError instead of silently returning the one-sided
    convention value; callers that care can perturb and retry.
    """
    if check_kinks and edges_coincide(pred, gt):
        raise NonDifferentiableError(
            f"pred and gt share an edge coordinate exactly: {pred} vs {gt}"
        )
    tan = grad_autodiff_batch(spec, np.asarray(pred.as_tuple()), _box4(gt))
    return Grad4(*(float(t) for t in tan))


# ----------------------------------------------------------------------
# closed form for the IoU loss
# ----------------------------------------------------------------------

def grad_analytic_iou_batch(pred: np.ndarray, gt: np.ndarray) -> np.ndarray:
    """Closed-form gradient of 1 - IoU over a (4, n) batch.

    Written from the piecewise formula: with S the pred area, S_g the gt
    area and U the union, d(1-IoU)/dt = -(S + S_g)/U^2 * dI/dt plus, for
    the size parameters, I/U^2 times the area derivative (h for w, w for
    h).  dI/dt follows the clamped-overlap selection with the same tie
    conventions the dual ops use (left operand wins).
    """
    pcx, pcy, pw, ph = pred
    gcx, gcy, gw, gh = gt
    px1, px2 = pcx - pw * 0.5, pcx + pw * 0.5
    py1, py2 = pcy - ph * 0.5, pcy + ph * 0.5
    gx1, gx2 = gcx - gw * 0.5, gcx + gw * 0.5
    gy1, gy2 = gcy - gh * 0.5, gcy + gh * 0.5

    iw_raw = np.minimum(px2, gx2) - np.maximum(px1, gx1)
    ih_raw = np.minimum(py2, gy2) - np.maximum(py1, gy1)
    iw = np.maximum(iw_raw, 0.0)
    ih = np.maximum(ih_raw, 0.0)
    inter = iw * ih
    s_p = pw * ph
    s_g = gw * gh
    union = s_p + s_g - inter

    rx = (px2 <= gx2).astype(np.float64)
    lx = (px1 >= gx1).astype(np.float64)
    ry = (py2 <= gy2).astype(np.float64)
    ly = (py1 >= gy1).astype(np.float64)
    ax = (iw_raw >= 0.0).astype(np.float64)
    ay = (ih_raw >= 0.0).astype(np.float64)

    di_dcx = ax * (rx - lx) * ih
    di_dw = ax * (rx + lx) * 0.5 * ih
    di_dcy = ay * (ry - ly) * iw
    di_dh = ay * (ry + ly) * 0.5 * iw

    neg_coef = -(s_p + s_g) / (union * union)
    area_coef = inter / (union * union)
    return np.stack(
        [
            neg_coef * di_dcx,
            neg_coef * di_dcy,
            neg_coef * di_dw + area_coef * ph,
            neg_coef * di_dh + area_coef * pw,
        ]
    )


def grad_analytic_iou(pred: Box, gt: Box) -> Grad4:
    g = grad_analytic_iou_batch(
        np.asarray(pred.as_tuple(), dtype=np.float64)[:, None],
        np.asarray(gt.as_tuple(), dtype=np.float64)[:, None],
    )
    return Grad4(*(float(t) for t in g[:, 0]))


# ----------------------------------------------------------------------
# finite differences
# ----------------------------------------------------------------------

FD_STEP = 1e-6


def grad_fd_batch(spec: LossSpec, pred: np.ndarray, gt, step: float = FD_STEP) -> np.ndarray:
    """Central differences over a (4, n) batch, 8 value passes.

    Detached subterms (the dynamic interpolation factor, the wiou
    normalizer) are frozen at the base point so the difference quotient
    probes the same function forward mode differentiates.  Box sizes
    must stay well above the step or the perturbed geometry degenerates.
    """
    pred = np.asarray(pred, dtype=np.float64)
    gt = tuple(gt)
    frozen = _frozen_for_fd(spec, tuple(pred), gt)
    out = np.empty_like(pred)
    for i in range(4):
        hi = pred.copy()
        hi[i] += step
        lo = pred.copy()
        lo[i] -= step
        f_hi = _loss_value(spec, tuple(hi), gt, frozen)
        f_lo = _loss_value(spec, tuple(lo), gt, frozen)
        out[i] = (f_hi - f_lo) / (2.0 * step)
    return out


def grad_fd(spec: LossSpec, pred: Box, gt: Box, step: float = FD_STEP) -> Grad4:
    g = grad_fd_batch(
        spec,
        np.asarray(pred.as_tuple(), dtype=np.float64)[:, None],
        np.asarray(gt.as_tuple(), dtype=np.float64)[:, None],
        step,
    )
    return Grad4(*(float(t) for t in g[:, 0]))
