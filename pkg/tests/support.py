"""Shared samplers, independent reference math, and the property battery.

Everything here is deliberately written against public package entry
points plus straight-line reference formulas (the polygon library
supplies intersection areas), so the tests never reuse the code paths
they are checking.
"""

from __future__ import annotations

import numpy as np
from shapely.geometry import box as _poly_box

from bbrlab import (
    Box,
    LossSpec,
    geom_pair,
    interpolate,
    iou,
    loss_and_grad_batch,
)
from bbrlab.cli import sample_box_pairs
from bbrlab.losses import _breakdown_values, _interp4, _iou4, _loss_value, _siou_costs

SEED = 20260821


def random_pairs(rng: np.random.Generator, n: int):
    """Generic kink-free (pred, gt) batches, each (4, n)."""
    return sample_box_pairs(rng, n)


def uniform_pairs(rng: np.random.Generator, n: int):
    """Unfiltered pairs over the unit image; may include disjoint pairs."""
    pred = np.stack(
        [
            rng.uniform(0.0, 1.0, n),
            rng.uniform(0.0, 1.0, n),
            rng.uniform(0.02, 0.5, n),
            rng.uniform(0.02, 0.5, n),
        ]
    )
    gt = np.stack(
        [
            rng.uniform(0.0, 1.0, n),
            rng.uniform(0.0, 1.0, n),
            rng.uniform(0.02, 0.5, n),
            rng.uniform(0.02, 0.5, n),
        ]
    )
    return pred, gt


def moderate_pairs(rng: np.random.Generator, n: int):
    """Pairs with bounded normalized corner discrepancies.

    Centers inside (0.25, 0.75) and sizes in (0.15, 0.4) keep the mean
    corner discrepancy below ~4.2 ground-truth sides, so exponential
    penalty terms stay clear of float saturation.
    """
    pred = np.stack(
        [
            rng.uniform(0.25, 0.75, n),
            rng.uniform(0.25, 0.75, n),
            rng.uniform(0.15, 0.4, n),
            rng.uniform(0.15, 0.4, n),
        ]
    )
    gt = np.stack(
        [
            rng.uniform(0.25, 0.75, n),
            rng.uniform(0.25, 0.75, n),
            rng.uniform(0.15, 0.4, n),
            rng.uniform(0.15, 0.4, n),
        ]
    )
    return pred, gt


def disjoint_pairs(rng: np.random.Generator, n: int):
    """Pairs with a guaranteed positive edge gap on one axis.

    Sizes stay above 0.05 and gaps below 0.8, which keeps the overlap
    bound below 0.95: an interpolation factor of 0.98 therefore always
    produces a box that overlaps gt.
    """
    sizes = rng.uniform(0.05, 0.4, (4, n))
    pw, ph, gw, gh = sizes
    gcx = rng.uniform(0.3, 0.7, n)
    gcy = rng.uniform(0.3, 0.7, n)
    gap = rng.uniform(0.02, 0.8, n)
    off = rng.uniform(-0.2, 0.2, n)
    sign = np.where(rng.random(n) < 0.5, -1.0, 1.0)
    horizontal = rng.random(n) < 0.5
    sep_x = np.where(horizontal, sign * ((pw + gw) * 0.5 + gap), off)
    sep_y = np.where(horizontal, off, sign * ((ph + gh) * 0.5 + gap))
    pred = np.stack([gcx + sep_x, gcy + sep_y, pw, ph])
    gt = np.stack([gcx, gcy, gw, gh])
    return pred, gt


def boxes_of(batch: np.ndarray) -> list[Box]:
    """Columns of a (4, n) array as Box values."""
    return [Box(*(float(v) for v in batch[:, i])) for i in range(batch.shape[1])]


# ----------------------------------------------------------------------
# independent references
# ----------------------------------------------------------------------

def poly_iou(p, g) -> float:
    """IoU computed by the polygon library, not by this package."""
    a = _poly_box(p[0] - p[2] / 2, p[1] - p[3] / 2, p[0] + p[2] / 2, p[1] + p[3] / 2)
    b = _poly_box(g[0] - g[2] / 2, g[1] - g[3] / 2, g[0] + g[2] / 2, g[1] + g[3] / 2)
    inter = a.intersection(b).area
    return inter / (a.area + b.area - inter)


def poly_inter_union(p, g) -> tuple[float, float]:
    a = _poly_box(p[0] - p[2] / 2, p[1] - p[3] / 2, p[0] + p[2] / 2, p[1] + p[3] / 2)
    b = _poly_box(g[0] - g[2] / 2, g[1] - g[3] / 2, g[0] + g[2] / 2, g[1] + g[3] / 2)
    inter = a.intersection(b).area
    return inter, a.area + b.area - inter


# ----------------------------------------------------------------------
# property battery (each entry takes an rng and a batch size)
# ----------------------------------------------------------------------

def prop_iou_symmetric(rng, n):
    """iou(a, b) equals iou(b, a) bitwise."""
    pred, gt = uniform_pairs(rng, n)
    for a, b in zip(boxes_of(pred[:, : n // 20]), boxes_of(gt[:, : n // 20])):
        assert iou(a, b) == iou(b, a)
    fwd = np.asarray(_iou4(tuple(pred), tuple(gt)))
    rev = np.asarray(_iou4(tuple(gt), tuple(pred)))
    np.testing.assert_array_equal(fwd, rev)


def prop_translation_invariance(rng, n):
    """Joint translation leaves iou and all pair geometry unchanged."""
    pred, gt = uniform_pairs(rng, n)
    t = rng.uniform(-2.0, 2.0, (2, n))
    shift = np.concatenate([t, np.zeros((2, n))])
    base = _iou4(tuple(pred), tuple(gt))
    moved = _iou4(tuple(pred + shift), tuple(gt + shift))
    np.testing.assert_allclose(moved, base, rtol=1e-9, atol=1e-12)
    for i in rng.integers(0, n, 64):
        a = Box(*(float(v) for v in pred[:, i]))
        b = Box(*(float(v) for v in gt[:, i]))
        tx, ty = float(t[0, i]), float(t[1, i])
        a2 = Box(a.cx + tx, a.cy + ty, a.w, a.h)
        b2 = Box(b.cx + tx, b.cy + ty, b.w, b.h)
        g1, g2 = geom_pair(a, b), geom_pair(a2, b2)
        for name in (
            "intersection",
            "union",
            "enclose_w",
            "enclose_h",
            "center_dist",
            "enclose_diag",
            "gap_x",
            "gap_y",
        ):
            np.testing.assert_allclose(
                getattr(g2, name), getattr(g1, name), rtol=1e-9, atol=1e-12
            )


def prop_scale_covariance(rng, n):
    """Scaling by s scales areas by s^2, lengths by s, iou not at all."""
    pred, gt = uniform_pairs(rng, n)
    s = rng.uniform(0.1, 10.0, n)
    base = _iou4(tuple(pred), tuple(gt))
    scaled = _iou4(tuple(pred * s), tuple(gt * s))
    np.testing.assert_allclose(scaled, base, rtol=1e-9, atol=1e-12)
    for i in rng.integers(0, n, 64):
        a = Box(*(float(v) for v in pred[:, i]))
        b = Box(*(float(v) for v in gt[:, i]))
        si = float(s[i])
        a2 = Box(a.cx * si, a.cy * si, a.w * si, a.h * si)
        b2 = Box(b.cx * si, b.cy * si, b.w * si, b.h * si)
        g1, g2 = geom_pair(a, b), geom_pair(a2, b2)
        np.testing.assert_allclose(g2.intersection, g1.intersection * si * si, rtol=1e-9, atol=1e-12)
        np.testing.assert_allclose(g2.union, g1.union * si * si, rtol=1e-9)
        for name in ("enclose_w", "enclose_h", "center_dist", "enclose_diag", "gap_x", "gap_y"):
            np.testing.assert_allclose(
                getattr(g2, name), getattr(g1, name) * si, rtol=1e-9, atol=1e-12
            )


def prop_interpolation_commutes_with_corners(rng, n):
    """Blending centers and sizes equals blending the corner coordinates."""
    pred, gt = uniform_pairs(rng, n)
    alpha = rng.uniform(0.01, 1.0, n)

    def corners(b):
        return np.stack([b[0] - b[2] / 2, b[1] - b[3] / 2, b[0] + b[2] / 2, b[1] + b[3] / 2])

    blended = np.stack(_interp4(tuple(pred), tuple(gt), alpha))
    expect = (1.0 - alpha) * corners(pred) + alpha * corners(gt)
    np.testing.assert_allclose(corners(blended), expect, rtol=1e-12, atol=1e-15)
    for i in rng.integers(0, n, 64):
        a = Box(*(float(v) for v in pred[:, i]))
        b = Box(*(float(v) for v in gt[:, i]))
        got = interpolate(a, b, float(alpha[i])).corners()
        want = [
            (1.0 - alpha[i]) * ca + alpha[i] * cb
            for ca, cb in zip(a.corners(), b.corners())
        ]
        np.testing.assert_allclose(got, want, rtol=1e-12, atol=1e-15)


def prop_term_ranges(rng, n):
    """Loss and penalty terms stay inside their defined ranges."""
    pred, gt = uniform_pairs(rng, n)
    vals = _breakdown_values(tuple(pred), tuple(gt), 0.98)
    l_iou = np.asarray(vals["l_iou"])
    assert np.all((l_iou >= 0.0) & (l_iou <= 1.0))
    r_giou = np.asarray(vals["r_giou"])
    assert np.all((r_giou >= 0.0) & (r_giou < 1.0))
    r_piou = np.asarray(vals["r_piou"])
    assert np.all((r_piou >= 0.0) & (r_piou <= 1.0))
    dist, shape = _siou_costs(tuple(pred), tuple(gt), 4.0)
    dist = np.asarray(dist)
    shape = np.asarray(shape)
    assert np.all((dist >= 0.0) & (dist <= 2.0))
    assert np.all((shape >= 0.0) & (shape <= 2.0))
    # The strict upper bound of the exponential corner penalty is only
    # representable while exp(-k^2) stays above float resolution;
    # moderate geometry keeps it there.
    mpred, mgt = moderate_pairs(rng, n)
    r_piou_m = np.asarray(_breakdown_values(tuple(mpred), tuple(mgt), 0.98)["r_piou"])
    assert np.all(r_piou_m < 1.0)


def prop_scale_invariance_of_iou_losses(rng, n):
    """eval(iou) and eval(interpiou) ignore joint rescaling; l1 does not."""
    pred, gt = random_pairs(rng, n)
    s = np.where(rng.random(n) < 0.5, rng.uniform(0.2, 0.7, n), rng.uniform(1.5, 3.0, n))
    for spec in (LossSpec("iou"), LossSpec("interpiou", alpha=0.98)):
        base, _ = loss_and_grad_batch(spec, pred, tuple(gt))
        scaled, _ = loss_and_grad_batch(spec, pred * s, tuple(gt * s))
        np.testing.assert_allclose(scaled, base, rtol=1e-9, atol=1e-12)
    l1, _ = loss_and_grad_batch(LossSpec("l1"), pred, tuple(gt))
    l1s, _ = loss_and_grad_batch(LossSpec("l1"), pred * s, tuple(gt * s))
    np.testing.assert_allclose(l1s, l1 * s, rtol=1e-9)
    assert np.all(np.abs(l1s - l1) > 0.0)


def prop_alpha_one_reduction(rng, n):
    """interpiou at factor 1 degenerates to the bare IoU loss, bitwise."""
    pred, gt = uniform_pairs(rng, n)
    full, _ = loss_and_grad_batch(LossSpec("interpiou", alpha=1.0), pred, tuple(gt))
    bare, _ = loss_and_grad_batch(LossSpec("iou"), pred, tuple(gt))
    np.testing.assert_array_equal(full, bare)


def prop_objective_alignment(rng, n):
    """interpiou dominates the IoU loss and vanishes only at coincidence."""
    pred, gt = random_pairs(rng, n)
    spec = LossSpec("interpiou", alpha=0.98)
    full, _ = loss_and_grad_batch(spec, pred, tuple(gt))
    bare, _ = loss_and_grad_batch(LossSpec("iou"), pred, tuple(gt))
    assert np.all(full >= bare)
    assert np.all(full > 0.0)
    same, _ = loss_and_grad_batch(spec, gt.copy(), tuple(gt))
    np.testing.assert_array_equal(same, np.zeros(n))


def prop_overlap_guarantee(rng, n):
    """Any factor strictly above the overlap bound yields positive IoU."""
    pred, gt = uniform_pairs(rng, n)
    gap_x = np.abs(pred[0] - gt[0]) - (pred[2] + gt[2]) * 0.5
    gap_y = np.abs(pred[1] - gt[1]) - (pred[3] + gt[3]) * 0.5
    bx = np.where(gap_x > 0.0, gap_x / (gap_x + gt[2]), 0.0)
    by = np.where(gap_y > 0.0, gap_y / (gap_y + gt[3]), 0.0)
    bound = np.maximum(bx, by)
    alpha = bound + rng.uniform(1e-6, 1.0, n) * (1.0 - bound)
    blended = _interp4(tuple(pred), tuple(gt), alpha)
    got = np.asarray(_iou4(blended, tuple(gt)))
    assert np.all(got > 0.0)


def prop_interp_chain_rule(rng, n):
    """The interpiou gradient splits into the bare IoU gradient plus the
    scaled gradient taken at the blended box."""
    pred, gt = random_pairs(rng, n)
    iou_spec = LossSpec("iou")
    g_pred = np.asarray(loss_and_grad_batch(iou_spec, pred, tuple(gt))[1])
    for alpha in (0.3, 0.98, 1.0):
        spec = LossSpec("interpiou", alpha=alpha)
        total = np.asarray(loss_and_grad_batch(spec, pred, tuple(gt))[1])
        blended = np.stack(_interp4(tuple(pred), tuple(gt), alpha))
        g_mid = np.asarray(loss_and_grad_batch(iou_spec, blended, tuple(gt))[1])
        expect = g_pred + (1.0 - alpha) * g_mid
        np.testing.assert_allclose(total, expect, rtol=0.0, atol=1e-12)


def prop_dynamic_alpha_detached(rng, n):
    """dinterpiou differentiates as if its factor were a constant."""
    pred, gt = random_pairs(rng, n)
    iou_spec = LossSpec("iou")
    iou_vals = np.asarray(_iou4(tuple(pred), tuple(gt)))
    a = np.clip(1.0 - iou_vals, 0.5, 0.99)
    total = np.asarray(
        loss_and_grad_batch(LossSpec("dinterpiou", clamp_low=0.5, clamp_high=0.99), pred, tuple(gt))[1]
    )
    g_pred = np.asarray(loss_and_grad_batch(iou_spec, pred, tuple(gt))[1])
    blended = np.stack(_interp4(tuple(pred), tuple(gt), a))
    g_mid = np.asarray(loss_and_grad_batch(iou_spec, blended, tuple(gt))[1])
    np.testing.assert_allclose(total, g_pred + (1.0 - a) * g_mid, rtol=0.0, atol=1e-12)


def prop_area_ratio_floor(rng, n):
    """The relative area difference never reaches -1 for valid boxes."""
    pred, gt = uniform_pairs(rng, n)
    ratio = (pred[2] * pred[3] - gt[2] * gt[3]) / (gt[2] * gt[3])
    assert np.all(ratio > -1.0)


PROPERTIES = [
    ("iou-symmetry", prop_iou_symmetric),
    ("translation-invariance", prop_translation_invariance),
    ("scale-covariance", prop_scale_covariance),
    ("interpolation-commutation", prop_interpolation_commutes_with_corners),
    ("term-ranges", prop_term_ranges),
    ("scale-invariance-of-iou-losses", prop_scale_invariance_of_iou_losses),
    ("alpha-one-reduction", prop_alpha_one_reduction),
    ("objective-alignment", prop_objective_alignment),
    ("overlap-guarantee", prop_overlap_guarantee),
    ("interp-chain-rule", prop_interp_chain_rule),
    ("dynamic-alpha-detachment", prop_dynamic_alpha_detached),
    ("area-ratio-floor", prop_area_ratio_floor),
]


def all_loss_specs() -> list[LossSpec]:
    """One spec per supported kind with its default hyperparameters."""
    from bbrlab.losses import KINDS

    return [LossSpec(kind) for kind in KINDS]


def eval_batch(spec: LossSpec, pred: np.ndarray, gt: np.ndarray) -> np.ndarray:
    """Loss values only, over (4, n) batches."""
    return np.asarray(_loss_value(spec, tuple(pred), tuple(gt)), dtype=np.float64)
