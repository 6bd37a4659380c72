"""Workbench for IoU-family bounding-box regression losses.

Implements the classical overlap-based losses (iou, giou, diou, ciou,
eiou, wiou, siou, piou) next to two interpolation-based ones: a fixed
blend of the prediction toward the target before scoring (interpiou)
and a variant that picks the blend factor from the current overlap
(dinterpiou).  Ships exact forward-mode gradients, a from-scratch Adam
loop, synthetic anchor populations, and a CLI that writes deterministic
CSV/JSON reports plus standalone SVG charts.
"""

__version__ = "0.1.0"

from .adam import AdamConfig, OptimizerError, Trajectory, descend, landscape_sweep, regress
from .boxes import SIZE_FLOOR, Box, GeomPair, area, geom_pair, interpolate, iou
from .gradients import (
    FD_STEP,
    Grad4,
    NonDifferentiableError,
    edge_coincidence_mask,
    edges_coincide,
    grad_analytic_iou,
    grad_analytic_iou_batch,
    grad_autodiff,
    grad_autodiff_batch,
    grad_fd,
    grad_fd_batch,
    loss_and_grad_batch,
)
from .losses import (
    DEFAULT_ALPHA,
    DEFAULT_CLAMP_HIGH,
    DEFAULT_CLAMP_LOW,
    DEFAULT_THETA,
    KINDS,
    LossSpec,
    PenaltyBreakdown,
    dynamic_alpha,
    eval_loss,
    min_alpha,
    penalty_breakdown,
)
from .simulate import (
    ENLARGE_START,
    ENLARGE_TARGET,
    METRICS,
    CaseBatch,
    EnlargementResult,
    RegressionCase,
    ScenarioConfig,
    SimulationError,
    SmallTargetResult,
    StepSeries,
    enlargement_study,
    generate_cases,
    r_diff,
    run_batch,
    small_target_sweep,
)

__all__ = [
    "__version__",
    "AdamConfig",
    "Box",
    "CaseBatch",
    "DEFAULT_ALPHA",
    "DEFAULT_CLAMP_HIGH",
    "DEFAULT_CLAMP_LOW",
    "DEFAULT_THETA",
    "ENLARGE_START",
    "ENLARGE_TARGET",
    "EnlargementResult",
    "FD_STEP",
    "GeomPair",
    "Grad4",
    "KINDS",
    "LossSpec",
    "METRICS",
    "NonDifferentiableError",
    "OptimizerError",
    "PenaltyBreakdown",
    "RegressionCase",
    "SIZE_FLOOR",
    "ScenarioConfig",
    "SimulationError",
    "SmallTargetResult",
    "StepSeries",
    "Trajectory",
    "area",
    "descend",
    "dynamic_alpha",
    "edge_coincidence_mask",
    "edges_coincide",
    "enlargement_study",
    "eval_loss",
    "generate_cases",
    "geom_pair",
    "grad_analytic_iou",
    "grad_analytic_iou_batch",
    "grad_autodiff",
    "grad_autodiff_batch",
    "grad_fd",
    "grad_fd_batch",
    "interpolate",
    "iou",
    "landscape_sweep",
    "loss_and_grad_batch",
    "min_alpha",
    "penalty_breakdown",
    "r_diff",
    "regress",
    "run_batch",
    "small_target_sweep",
]
