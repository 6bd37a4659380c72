"""Adam descent over raw box parameters, plus the loss-landscape sweep.

The stepper is hand-rolled bias-corrected Adam operating directly on
(cx, cy, w, h); sizes are clamped up to the box floor after every
update.  One vectorized engine drives both the single-case regress and
the batched simulation harness, so a case behaves identically however
it is run.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np

from .boxes import Box, SIZE_FLOOR
from .gradients import loss_and_grad_batch
from .losses import LossSpec, _loss_value

if TYPE_CHECKING:
    from .simulate import RegressionCase


@dataclass(frozen=True, slots=True)
class AdamConfig:
    lr: float = 0.01
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    steps: int = 200

    def __post_init__(self):
        if not self.lr > 0.0:
            raise ValueError(f"lr must be positive, got {self.lr}")
        if not (0.0 <= self.beta1 < 1.0 and 0.0 <= self.beta2 < 1.0):
            raise ValueError(f"betas must lie in [0, 1), got {self.beta1}, {self.beta2}")
        if not self.eps > 0.0:
            raise ValueError(f"eps must be positive, got {self.eps}")
        if self.steps < 1:
            raise ValueError(f"steps must be >= 1, got {self.steps}")


class OptimizerError(RuntimeError):
    """Non-finite loss or gradient during descent."""

    def __init__(self, step: int, lanes: list[int]):
        self.step = step
        self.lanes = lanes
        super().__init__(f"non-finite loss/gradient at step {step}, batch lanes {lanes}")


@dataclass(frozen=True)
class Trajectory:
    """One descent: the visited boxes plus per-step diagnostics.

    boxes has steps + 1 entries (start included); losses[t] and
    grads[t] are evaluated at boxes[t], grads holding (cx, cy, w, h)
    partials row-wise.
    """

    boxes: list[Box]
    losses: np.ndarray
    grads: np.ndarray


def descend(spec: LossSpec, pred0: np.ndarray, gt, cfg: AdamConfig):
    """Yield (t, params, loss, grad) for t = 0..steps over a (4, n) batch.

    params at t are the boxes before the t-th update; the final yield is
    the post-run state.  Raises OptimizerError on non-finite values.
    """
    p = np.array(pred0, dtype=np.float64, copy=True)
    m = np.zeros_like(p)
    v = np.zeros_like(p)
    lr, b1, b2, eps = cfg.lr, cfg.beta1, cfg.beta2, cfg.eps
    for t in range(cfg.steps + 1):
        loss, grad = loss_and_grad_batch(spec, p, gt)
        ok = np.isfinite(loss) & np.all(np.isfinite(grad), axis=0)
        if not np.all(ok):
            raise OptimizerError(t, np.nonzero(~np.atleast_1d(ok))[0].tolist())
        yield t, p, loss, grad
        if t == cfg.steps:
            break
        m = b1 * m + (1.0 - b1) * grad
        v = b2 * v + (1.0 - b2) * grad * grad
        m_hat = m / (1.0 - b1 ** (t + 1))
        v_hat = v / (1.0 - b2 ** (t + 1))
        p = p - lr * m_hat / (np.sqrt(v_hat) + eps)
        # fresh array each step, so the floor can go in place without
        # touching previously yielded params
        np.maximum(p[2:], SIZE_FLOOR, out=p[2:])
    return


def regress(case: "RegressionCase", spec: LossSpec, cfg: AdamConfig) -> Trajectory:
    """Run one case to completion and keep the whole trajectory."""
    pred0 = np.asarray(case.anchor.as_tuple(), dtype=np.float64)[:, None]
    gt_col = np.asarray(case.gt.as_tuple(), dtype=np.float64)[:, None]
    boxes: list[Box] = []
    losses: list[float] = []
    grads: list[np.ndarray] = []
    for _, p, loss, grad in descend(spec, pred0, tuple(gt_col), cfg):
        boxes.append(Box(float(p[0, 0]), float(p[1, 0]), float(p[2, 0]), float(p[3, 0])))
        losses.append(float(loss[0]))
        grads.append(grad[:, 0].copy())
    return Trajectory(boxes=boxes, losses=np.asarray(losses), grads=np.stack(grads))


def landscape_sweep(
    start: Box, gt: Box, losses: Sequence[LossSpec], k: int
) -> np.ndarray:
    """Loss values along the straight blend from start to gt.

    Point t sits at interpolation fraction t / k for t = 0..k; the
    return has one row per requested loss, k + 1 columns.  The endpoint
    is gt exactly, so IoU-family rows always end at 0.
    """
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    f = np.arange(k + 1) / k
    s = np.asarray(start.as_tuple(), dtype=np.float64)[:, None]
    g = np.asarray(gt.as_tuple(), dtype=np.float64)[:, None]
    params = (1.0 - f) * s + f * g
    out = np.empty((len(losses), k + 1))
    for j, spec in enumerate(losses):
        out[j] = np.asarray(_loss_value(spec, tuple(params), tuple(g)), dtype=np.float64)
    # The final column is gt bitwise; every supported loss is exactly 0
    # there, so snap away the corner-rounding residue.
    out[:, np.all(params == g, axis=0)] = 0.0
    return out
