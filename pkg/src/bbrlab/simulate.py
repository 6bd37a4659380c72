"""Synthetic box-regression scenarios.

Dense anchor sweeps (anchors sampled uniformly in a disk, crossed with
scale and aspect-ratio grids), the controlled enlargement case, and the
small-target comparison.  Batches run through one vectorized descent;
work is split into fixed-size chunks whose partial sums are reduced in
chunk order, so serial and multi-threaded runs produce byte-identical
aggregates.
"""

from __future__ import annotations

import dataclasses
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .adam import AdamConfig, OptimizerError, Trajectory, descend, regress
from .boxes import Box, area
from .losses import DEFAULT_ALPHA, LossSpec, _breakdown_values

DEFAULT_SCALES = (1 / 32, 1 / 24, 3 / 64, 1 / 16, 1 / 12, 3 / 32, 1 / 8)
DEFAULT_ASPECT_RATIOS = (0.25, 1 / 3, 0.5, 1.0, 2.0, 3.0, 4.0)

METRICS = (
    "l_iou",
    "l1",
    "r_diff",
    "r_giou",
    "r_diou_dist",
    "r_eiou_wh",
    "r_siou",
    "r_piou",
    "r_interp",
)

# Fixed batch split; chunk boundaries never depend on the thread count.
CHUNK = 16384

THREADS_ENV = "BBRLAB_THREADS"


def resolve_threads(threads: int | None = None) -> int:
    """Explicit argument, else the BBRLAB_THREADS variable, else all cores."""
    if threads is None:
        env = os.environ.get(THREADS_ENV, "").strip()
        threads = int(env) if env else (os.cpu_count() or 1)
    if threads < 1:
        raise ValueError(f"thread count must be >= 1, got {threads}")
    return threads


@dataclass(frozen=True)
class ScenarioConfig:
    """Anchor population and ground-truth grid for a batch scenario.

    scales are box areas unless scales_are_sides is set, in which case
    they are side lengths.  single_gt restricts the ground-truth side to
    the square aspect ratio instead of crossing every prediction with
    every gt aspect ratio.
    """

    n_anchors: int = 500
    radius: float = 0.5
    center: tuple[float, float] = (0.5, 0.5)
    scales: tuple[float, ...] = DEFAULT_SCALES
    aspect_ratios: tuple[float, ...] = DEFAULT_ASPECT_RATIOS
    gt_area: float = 1 / 64
    gt_aspect_ratios: tuple[float, ...] = DEFAULT_ASPECT_RATIOS
    seed: int = 12345
    single_gt: bool = False
    scales_are_sides: bool = False

    def __post_init__(self):
        if self.n_anchors < 1:
            raise ValueError(f"n_anchors must be >= 1, got {self.n_anchors}")
        if not self.radius > 0.0:
            raise ValueError(f"radius must be positive, got {self.radius}")
        if not self.gt_area > 0.0:
            raise ValueError(f"gt_area must be positive, got {self.gt_area}")
        for name in ("scales", "aspect_ratios", "gt_aspect_ratios"):
            vals = getattr(self, name)
            if len(vals) == 0 or any(not v > 0.0 for v in vals):
                raise ValueError(f"{name} must be non-empty and positive, got {vals}")


@dataclass(frozen=True)
class RegressionCase:
    """One prediction box, its target, and where it came from.

    ids = (anchor index, scale index, aspect index, gt aspect index).
    """

    anchor: Box
    gt: Box
    ids: tuple[int, int, int, int]


class CaseBatch(Sequence):
    """Column-major case storage: (4, n) parameter arrays plus id rows.

    Behaves as a sequence of RegressionCase while keeping the arrays the
    batch engine consumes directly.
    """

    def __init__(self, pred: np.ndarray, gt: np.ndarray, ids: np.ndarray):
        self.pred = np.asarray(pred, dtype=np.float64)
        self.gt = np.asarray(gt, dtype=np.float64)
        self.ids = np.asarray(ids)
        if self.pred.shape != self.gt.shape or self.pred.shape[0] != 4:
            raise ValueError("pred and gt must both be (4, n)")
        if self.ids.shape != (self.pred.shape[1], 4):
            raise ValueError("ids must be (n, 4)")

    @classmethod
    def from_cases(cls, cases: Iterable[RegressionCase]) -> "CaseBatch":
        cases = list(cases)
        pred = np.array([c.anchor.as_tuple() for c in cases], dtype=np.float64).T
        gt = np.array([c.gt.as_tuple() for c in cases], dtype=np.float64).T
        ids = np.array([c.ids for c in cases], dtype=np.int64)
        return cls(pred.reshape(4, -1), gt.reshape(4, -1), ids.reshape(-1, 4))

    def __len__(self) -> int:
        return self.pred.shape[1]

    def __getitem__(self, i):
        if isinstance(i, slice):
            return CaseBatch(self.pred[:, i], self.gt[:, i], self.ids[i])
        p = self.pred[:, i]
        g = self.gt[:, i]
        return RegressionCase(
            anchor=Box(float(p[0]), float(p[1]), float(p[2]), float(p[3])),
            gt=Box(float(g[0]), float(g[1]), float(g[2]), float(g[3])),
            ids=tuple(int(v) for v in self.ids[i]),
        )


def _sizes_for(scales: np.ndarray, ratios: np.ndarray, as_sides: bool):
    """Widths/heights for scale-ratio pairs; ratio is w over h."""
    if as_sides:
        w = scales * np.sqrt(ratios)
        h = scales / np.sqrt(ratios)
    else:
        w = np.sqrt(scales * ratios)
        h = np.sqrt(scales / ratios)
    return w, h


def generate_cases(cfg: ScenarioConfig) -> CaseBatch:
    """Build the full anchor x scale x aspect (x gt aspect) case grid.

    Anchor centers are uniform over the configured disk (square-root
    radial sampling); every draw comes from one seeded generator so the
    batch is reproducible and independent of how it is later chunked.
    """
    rng = np.random.default_rng(cfg.seed)
    rad = cfg.radius * np.sqrt(rng.random(cfg.n_anchors))
    ang = rng.random(cfg.n_anchors) * (2.0 * math.pi)
    ax = cfg.center[0] + rad * np.cos(ang)
    ay = cfg.center[1] + rad * np.sin(ang)

    scales = np.asarray(cfg.scales, dtype=np.float64)
    ratios = np.asarray(cfg.aspect_ratios, dtype=np.float64)
    gt_ratios = (
        np.asarray([1.0]) if cfg.single_gt else np.asarray(cfg.gt_aspect_ratios, dtype=np.float64)
    )

    ia, isc, iar, igt = (
        m.ravel()
        for m in np.meshgrid(
            np.arange(cfg.n_anchors),
            np.arange(len(scales)),
            np.arange(len(ratios)),
            np.arange(len(gt_ratios)),
            indexing="ij",
        )
    )
    pw, ph = _sizes_for(scales[isc], ratios[iar], cfg.scales_are_sides)
    gw, gh = _sizes_for(
        np.full(igt.shape, cfg.gt_area), gt_ratios[igt], as_sides=False
    )
    n = ia.shape[0]
    pred = np.stack([ax[ia], ay[ia], pw, ph])
    gt = np.stack(
        [np.full(n, cfg.center[0]), np.full(n, cfg.center[1]), gw, gh]
    )
    ids = np.stack([ia, isc, iar, igt], axis=1).astype(np.int64)
    return CaseBatch(pred, gt, ids)


def r_diff(pred: Box, gt: Box) -> float:
    """Relative area difference (pred_area - gt_area) / gt_area."""
    return (area(pred) - area(gt)) / area(gt)


@dataclass(frozen=True)
class StepSeries:
    """Per-step means of every tracked metric over a case batch.

    Each metrics entry has steps + 1 values: the state before each
    update plus the final state.
    """

    metrics: dict
    n_cases: int


class SimulationError(RuntimeError):
    """Batch descent failed; carries the step and the offending case ids."""

    def __init__(self, step: int, case_ids: list[tuple[int, int, int, int]]):
        self.step = step
        self.case_ids = case_ids
        super().__init__(f"non-finite values at step {step} for cases {case_ids[:8]}")


def _chunk_sums(
    spec: LossSpec,
    pred: np.ndarray,
    gt: np.ndarray,
    ids: np.ndarray,
    cfg: AdamConfig,
    balpha: float,
) -> np.ndarray:
    """Metric sums (len(METRICS), steps + 1) for one chunk of cases."""
    gt_cols = tuple(gt)
    gt_area_v = gt[2] * gt[3]
    sums = np.empty((len(METRICS), cfg.steps + 1))
    try:
        for t, p, _, _ in descend(spec, pred, gt_cols, cfg):
            vals = _breakdown_values(tuple(p), gt_cols, balpha)
            vals["r_diff"] = (p[2] * p[3] - gt_area_v) / gt_area_v
            for j, name in enumerate(METRICS):
                s = float(np.sum(vals[name]))
                if not math.isfinite(s):
                    bad = np.nonzero(~np.isfinite(vals[name]))[0]
                    raise OptimizerError(t, bad.tolist())
                sums[j, t] = s
    except OptimizerError as err:
        raise SimulationError(
            err.step, [tuple(int(v) for v in ids[lane]) for lane in err.lanes]
        ) from err
    return sums


def run_batch(
    cases: CaseBatch,
    spec: LossSpec,
    cfg: AdamConfig,
    *,
    threads: int | None = None,
    breakdown_alpha: float | None = None,
) -> StepSeries:
    """Descend every case under one loss and average the tracked metrics.

    The interpolation metric r_interp uses breakdown_alpha, defaulting
    to the driving loss's own factor when it has one.  Thread count only
    affects wall time, never the numbers.
    """
    if not isinstance(cases, CaseBatch):
        cases = CaseBatch.from_cases(cases)
    n = len(cases)
    if n == 0:
        raise ValueError("case batch is empty")
    if breakdown_alpha is None:
        breakdown_alpha = spec.alpha if spec.kind == "interpiou" else DEFAULT_ALPHA
    threads = resolve_threads(threads)

    spans = [(lo, min(lo + CHUNK, n)) for lo in range(0, n, CHUNK)]

    def one(span):
        lo, hi = span
        return _chunk_sums(
            spec,
            cases.pred[:, lo:hi],
            cases.gt[:, lo:hi],
            cases.ids[lo:hi],
            cfg,
            breakdown_alpha,
        )

    if threads == 1 or len(spans) == 1:
        parts = [one(s) for s in spans]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(one, spans))

    total = parts[0]
    for part in parts[1:]:
        total = total + part
    return StepSeries(
        metrics={name: total[j] / n for j, name in enumerate(METRICS)},
        n_cases=n,
    )


# Controlled enlargement case: elongated start centered in the unit
# image, equally elongated target rotated 90 degrees at the origin,
# both with area 1/4.
ENLARGE_START = Box(0.5, 0.5, math.sqrt(1 / 12), math.sqrt(3) / 2)
ENLARGE_TARGET = Box(0.0, 0.0, math.sqrt(3) / 2, math.sqrt(1 / 12))


@dataclass(frozen=True)
class EnlargementResult:
    spec: LossSpec
    trajectory: Trajectory
    area_ratio: np.ndarray  # r_diff of every visited box against the target


def enlargement_study(
    losses: Sequence[LossSpec], cfg: AdamConfig | None = None
) -> list[EnlargementResult]:
    """Drive the controlled elongated case under each loss.

    The area ratio series exposes how far each loss inflates the box on
    its way to the target.
    """
    cfg = cfg or AdamConfig()
    case = RegressionCase(anchor=ENLARGE_START, gt=ENLARGE_TARGET, ids=(0, 0, 0, 0))
    out = []
    for spec in losses:
        traj = regress(case, spec, cfg)
        ratios = np.array([r_diff(b, case.gt) for b in traj.boxes])
        out.append(EnlargementResult(spec=spec, trajectory=traj, area_ratio=ratios))
    return out


@dataclass(frozen=True)
class SmallTargetResult:
    gt_area: float
    spec: LossSpec
    series: StepSeries


def small_target_sweep(
    gt_areas: Sequence[float],
    losses: Sequence[LossSpec],
    scenario: ScenarioConfig,
    cfg: AdamConfig,
    *,
    threads: int | None = None,
) -> list[SmallTargetResult]:
    """Rerun the batch scenario at each ground-truth area.

    The anchor population is regenerated from the same seed every time,
    so only the target size varies between sweeps.
    """
    out = []
    for gt_area in gt_areas:
        cases = generate_cases(dataclasses.replace(scenario, gt_area=gt_area))
        for spec in losses:
            series = run_batch(cases, spec, cfg, threads=threads)
            out.append(SmallTargetResult(gt_area=gt_area, spec=spec, series=series))
    return out
