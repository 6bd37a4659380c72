"""Command-line front end: scenario runs, reports, and self-checks.

Commands: simulate, enlargement, landscape, gradcheck, alpha-bound.
Configuration comes from defaults, then an optional JSON config file,
then flags; flags win.  Every command writes a manifest.json capturing
the fully resolved configuration, and a run can be reproduced from that
manifest byte-for-byte with ``--config manifest.json``.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .adam import AdamConfig, landscape_sweep
from .boxes import Box
from .gradients import (
    edge_coincidence_mask,
    grad_analytic_iou_batch,
    grad_autodiff_batch,
    grad_fd_batch,
)
from .losses import (
    DEFAULT_ALPHA,
    DEFAULT_CLAMP_HIGH,
    DEFAULT_CLAMP_LOW,
    DEFAULT_THETA,
    KINDS,
    LossSpec,
    _interp4,
    _iou4,
)
from .simulate import (
    ENLARGE_TARGET,
    METRICS,
    ScenarioConfig,
    enlargement_study,
    generate_cases,
    run_batch,
)
from .svg import render_box_trajectory, render_line_chart

FD_TOL_REL = 1e-4
FD_TOL_ABS = 1e-8
ANALYTIC_TOL_ABS = 1e-12


# ----------------------------------------------------------------------
# value parsing
# ----------------------------------------------------------------------

def parse_number(text) -> float:
    """Parse a decimal or an exact fraction like ``3/64``."""
    if isinstance(text, (int, float)):
        return float(text)
    s = str(text).strip()
    if "/" in s:
        num, _, den = s.partition("/")
        d = float(den)
        if d == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return float(num) / d
    return float(s)


_PARAM_KEYS = {
    "alpha": "alpha",
    "low": "clamp_low",
    "high": "clamp_high",
    "theta": "theta",
}


def _build_spec(kind: str, params: dict) -> LossSpec:
    kwargs = {}
    for key, value in params.items():
        if key not in _PARAM_KEYS:
            raise ValueError(f"unknown loss parameter {key!r} for kind {kind!r}")
        kwargs[_PARAM_KEYS[key]] = parse_number(value)
    return LossSpec(kind, **kwargs)


def parse_loss_list(text: str) -> list[LossSpec]:
    """Parse the comma grammar, e.g.
    ``iou,giou,interpiou:alpha=0.98,dinterpiou:low=0.9,high=0.99``.

    A bare name or a ``name:key=value`` token starts a new loss; a plain
    ``key=value`` token attaches to the loss started last.
    """
    specs: list[LossSpec] = []
    kind = None
    params: dict = {}
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        if ":" in token:
            if kind is not None:
                specs.append(_build_spec(kind, params))
            kind, _, rest = token.partition(":")
            key, _, value = rest.partition("=")
            params = {key.strip(): value.strip()}
        elif "=" in token:
            if kind is None:
                raise ValueError(f"loss parameter {token!r} appears before any loss name")
            key, _, value = token.partition("=")
            params[key.strip()] = value.strip()
        else:
            if kind is not None:
                specs.append(_build_spec(kind, params))
            kind = token.lower()
            params = {}
    if kind is not None:
        specs.append(_build_spec(kind, params))
    if not specs:
        raise ValueError(f"no losses in {text!r}")
    return specs


def loss_spec_to_kv(spec: LossSpec) -> str:
    """Flat key-value form, e.g. ``kind=interpiou alpha=0.98``."""
    parts = [f"kind={spec.kind}"]
    if spec.kind == "interpiou":
        parts.append(f"alpha={spec.alpha:g}")
    elif spec.kind == "dinterpiou":
        parts.append(f"low={spec.clamp_low:g}")
        parts.append(f"high={spec.clamp_high:g}")
    elif spec.kind == "siou":
        parts.append(f"theta={spec.theta:g}")
    return " ".join(parts)


def loss_spec_from_kv(text: str) -> LossSpec:
    kind = None
    params = {}
    for token in text.split():
        key, _, value = token.partition("=")
        if key == "kind":
            kind = value
        else:
            params[key] = value
    if kind is None:
        raise ValueError(f"missing kind= in {text!r}")
    return _build_spec(kind, params)


def _losses_from_config(value) -> list[LossSpec]:
    if isinstance(value, str):
        return parse_loss_list(value)
    specs = []
    for item in value:
        if isinstance(item, LossSpec):
            specs.append(item)
        elif "kind=" in item:
            specs.append(loss_spec_from_kv(item))
        else:
            specs.extend(parse_loss_list(item))
    return specs


# ----------------------------------------------------------------------
# output writers
# ----------------------------------------------------------------------

def fmt17(x) -> str:
    """Decimal with 17 significant digits; round-trips every double."""
    return format(float(x), ".17g")


def write_table(path: Path, names: list[str], columns: list) -> None:
    """CSV with a header row; integer-typed columns print as integers."""
    lines = [",".join(names)]
    cols = [np.asarray(c) for c in columns]
    n = len(cols[0])
    for i in range(n):
        cells = []
        for c in cols:
            v = c[i]
            if np.issubdtype(c.dtype, np.integer):
                cells.append(str(int(v)))
            else:
                cells.append(fmt17(v))
        lines.append(",".join(cells))
    path.write_text("\n".join(lines) + "\n")


def write_json_table(path: Path, names: list[str], columns: list) -> None:
    payload = {}
    for name, col in zip(names, columns):
        arr = np.asarray(col)
        if np.issubdtype(arr.dtype, np.integer):
            payload[name] = [int(v) for v in arr]
        else:
            payload[name] = [float(v) for v in arr]
    path.write_text(json.dumps(payload, indent=1) + "\n")


def _write_series(out_dir, stem, names, columns, fmt, outputs):
    if fmt == "json":
        fn = f"{stem}.json"
        write_json_table(out_dir / fn, names, columns)
    else:
        fn = f"{stem}.csv"
        write_table(out_dir / fn, names, columns)
    outputs.append(fn)
    return fn


def write_manifest(out_dir: Path, command: str, config: dict, outputs: list[str], t0: float) -> None:
    manifest = {
        "command": command,
        "version": __version__,
        "seed": config.get("seed"),
        "config": config,
        "outputs": outputs,
        "duration_seconds": round(time.perf_counter() - t0, 3),
    }
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")


# ----------------------------------------------------------------------
# configuration
# ----------------------------------------------------------------------

_COMMON_DEFAULTS = {
    "seed": 12345,
    "out_dir": "bbrlab_out",
    "format": "csv",
    "plot": False,
    "threads": None,
    "steps": 200,
    "lr": 0.01,
}

_SIM_LOSSES = "giou,diou,ciou,eiou,wiou,siou,piou,interpiou:alpha=0.98"
_LANDSCAPE_LOSSES = (
    "iou,interpiou:alpha=0.5,interpiou:alpha=0.7,interpiou:alpha=0.9,"
    "interpiou:alpha=0.99,dinterpiou:low=0,high=0.99,dinterpiou:low=0.9,high=0.99"
)

_DEFAULTS = {
    "simulate": {
        **_COMMON_DEFAULTS,
        "losses": _SIM_LOSSES,
        "anchors": 500,
        "radius": 0.5,
        "center": (0.5, 0.5),
        "scales": None,
        "aspect_ratios": None,
        "gt_area": 1 / 64,
        "gt_aspect_ratios": None,
        "single_gt": False,
        "scales_are_sides": False,
    },
    "enlargement": {**_COMMON_DEFAULTS, "losses": _SIM_LOSSES},
    "landscape": {
        **_COMMON_DEFAULTS,
        "losses": _LANDSCAPE_LOSSES,
        "points": 101,
        "start": (0.85, 0.85, 0.2, 0.2),
        "gt_box": (0.15, 0.15, 0.3, 0.3),
    },
    "gradcheck": {**_COMMON_DEFAULTS, "losses": ",".join(KINDS), "pairs": 1000, "fd_step": 1e-6},
    "alpha-bound": {**_COMMON_DEFAULTS, "pairs": 10000, "margin": 1e-3},
}


def _load_config_file(path: str) -> dict:
    obj = json.loads(Path(path).read_text())
    if not isinstance(obj, dict):
        raise ValueError(f"config file {path} must hold a JSON object")
    if "command" in obj and "config" in obj:
        obj = obj["config"]
    return obj


def resolve_config(command: str, args: argparse.Namespace) -> dict:
    """defaults < config file < explicit flags."""
    cfg = dict(_DEFAULTS[command])
    if getattr(args, "config", None):
        file_cfg = _load_config_file(args.config)
        for key, value in file_cfg.items():
            norm = key.replace("-", "_")
            if norm not in cfg and norm != "losses":
                raise ValueError(f"unknown config key {key!r} for {command}")
            cfg[norm] = value
    for key in cfg:
        flag = getattr(args, key, None)
        if flag is not None:
            cfg[key] = flag
    # normalize values that may arrive as strings or lists from JSON
    for key in ("gt_area", "lr", "margin", "fd_step", "radius"):
        if key in cfg and cfg[key] is not None:
            cfg[key] = parse_number(cfg[key])
    for key in ("scales", "aspect_ratios", "gt_aspect_ratios"):
        if cfg.get(key) is not None:
            cfg[key] = tuple(parse_number(v) for v in cfg[key])
    for key in ("center", "start", "gt_box"):
        if key in cfg:
            cfg[key] = tuple(parse_number(v) for v in cfg[key])
    for key in ("seed", "steps", "anchors", "points", "pairs"):
        if key in cfg and cfg[key] is not None:
            cfg[key] = int(cfg[key])
    if cfg.get("threads") is not None:
        cfg["threads"] = int(cfg["threads"])
    if cfg.get("format") not in ("csv", "json"):
        raise ValueError(f"format must be csv or json, got {cfg.get('format')!r}")
    return cfg


def _scenario_from(cfg: dict) -> ScenarioConfig:
    kwargs = dict(
        n_anchors=cfg["anchors"],
        radius=cfg["radius"],
        center=tuple(cfg["center"]),
        gt_area=cfg["gt_area"],
        seed=cfg["seed"],
        single_gt=bool(cfg["single_gt"]),
        scales_are_sides=bool(cfg["scales_are_sides"]),
    )
    if cfg["scales"] is not None:
        kwargs["scales"] = tuple(cfg["scales"])
    if cfg["aspect_ratios"] is not None:
        kwargs["aspect_ratios"] = tuple(cfg["aspect_ratios"])
    if cfg["gt_aspect_ratios"] is not None:
        kwargs["gt_aspect_ratios"] = tuple(cfg["gt_aspect_ratios"])
    return ScenarioConfig(**kwargs)


def _adam_from(cfg: dict) -> AdamConfig:
    return AdamConfig(lr=cfg["lr"], steps=cfg["steps"])


def _manifest_config(cfg: dict, losses: list[LossSpec] | None) -> dict:
    out = {}
    for key, value in cfg.items():
        if key == "losses" and losses is not None:
            out[key] = [loss_spec_to_kv(s) for s in losses]
        elif isinstance(value, tuple):
            out[key] = list(value)
        else:
            out[key] = value
    return out


# ----------------------------------------------------------------------
# pair sampling shared by the self-check commands
# ----------------------------------------------------------------------

def sample_box_pairs(rng: np.random.Generator, n: int, kink_tol: float = 1e-4):
    """Seeded random (pred, gt) batches, (4, n) each, avoiding the loci
    where the losses are not differentiable: coincident edges, matching
    centers or sizes, and the ciou gate boundary."""
    pred = np.empty((4, n))
    gt = np.empty((4, n))
    filled = 0
    while filled < n:
        need = n - filled
        p = np.stack(
            [
                rng.uniform(0.1, 0.9, need),
                rng.uniform(0.1, 0.9, need),
                rng.uniform(0.05, 0.5, need),
                rng.uniform(0.05, 0.5, need),
            ]
        )
        g = np.stack(
            [
                rng.uniform(0.1, 0.9, need),
                rng.uniform(0.1, 0.9, need),
                rng.uniform(0.05, 0.5, need),
                rng.uniform(0.05, 0.5, need),
            ]
        )
        ok = ~edge_coincidence_mask(p, g, kink_tol)
        for i in range(4):
            ok &= np.abs(p[i] - g[i]) > 1e-5
        ok &= np.abs(np.asarray(_iou4(tuple(p), tuple(g))) - 0.5) > 1e-5
        k = int(np.sum(ok))
        pred[:, filled : filled + k] = p[:, ok]
        gt[:, filled : filled + k] = g[:, ok]
        filled += k
    return pred, gt


# ----------------------------------------------------------------------
# commands
# ----------------------------------------------------------------------

def cmd_simulate(cfg: dict) -> int:
    t0 = time.perf_counter()
    losses = _losses_from_config(cfg["losses"])
    out_dir = Path(cfg["out_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    scen = _scenario_from(cfg)
    acfg = _adam_from(cfg)
    cases = generate_cases(scen)
    steps_col = np.arange(acfg.steps + 1)

    outputs: list[str] = []
    comparison: list[tuple[str, np.ndarray]] = []
    all_series = []
    for spec in losses:
        series = run_batch(cases, spec, acfg, threads=cfg["threads"])
        names = ["step"] + list(METRICS)
        cols = [steps_col] + [series.metrics[m] for m in METRICS]
        _write_series(out_dir, f"series_{spec.label()}", names, cols, cfg["format"], outputs)
        comparison.append((spec.label(), series.metrics["l_iou"]))
        all_series.append((spec, series))

    names = ["step"] + [label for label, _ in comparison]
    cols = [steps_col] + [y for _, y in comparison]
    _write_series(out_dir, "comparison", names, cols, cfg["format"], outputs)

    if cfg["plot"]:
        for metric in METRICS:
            fig = render_line_chart(
                [(spec.label(), series.metrics[metric]) for spec, series in all_series],
                x=steps_col,
                title=f"mean {metric} per step ({len(cases)} cases)",
                x_label="step",
                y_label=metric,
            )
            fn = f"curves_{metric}.svg"
            (out_dir / fn).write_text(fig)
            outputs.append(fn)

    write_manifest(out_dir, "simulate", _manifest_config(cfg, losses), outputs, t0)
    print(f"simulate: {len(cases)} cases x {len(losses)} losses -> {out_dir}")
    return 0


def cmd_enlargement(cfg: dict) -> int:
    t0 = time.perf_counter()
    losses = _losses_from_config(cfg["losses"])
    out_dir = Path(cfg["out_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    acfg = _adam_from(cfg)
    results = enlargement_study(losses, acfg)
    steps_col = np.arange(acfg.steps + 1)

    outputs: list[str] = []
    peak = {}
    for res in results:
        boxes = res.trajectory.boxes
        names = ["step", "cx", "cy", "w", "h", "loss", "r_diff"]
        cols = [
            steps_col,
            np.array([b.cx for b in boxes]),
            np.array([b.cy for b in boxes]),
            np.array([b.w for b in boxes]),
            np.array([b.h for b in boxes]),
            res.trajectory.losses,
            res.area_ratio,
        ]
        label = res.spec.label()
        _write_series(out_dir, f"trajectory_{label}", names, cols, cfg["format"], outputs)
        fig = render_box_trajectory(
            boxes,
            ENLARGE_TARGET,
            title=f"{label}: box descent, peak r_diff {np.max(res.area_ratio):.2f}",
        )
        fn = f"boxes_{label}.svg"
        (out_dir / fn).write_text(fig)
        outputs.append(fn)
        peak[label] = float(np.max(res.area_ratio))

    write_manifest(out_dir, "enlargement", _manifest_config(cfg, losses), outputs, t0)
    for label, value in peak.items():
        print(f"enlargement {label}: max r_diff {value:.3f}")
    return 0


def cmd_landscape(cfg: dict) -> int:
    t0 = time.perf_counter()
    losses = _losses_from_config(cfg["losses"])
    out_dir = Path(cfg["out_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    if cfg["points"] < 3:
        raise ValueError(f"points must be >= 3, got {cfg['points']}")
    k = cfg["points"] - 1
    start = Box(*cfg["start"])
    gt = Box(*cfg["gt_box"])
    values = landscape_sweep(start, gt, losses, k)
    steps_col = np.arange(k + 1)
    fracs = steps_col / k

    outputs: list[str] = []
    names = ["step", "fraction"] + [s.label() for s in losses]
    cols = [steps_col, fracs] + [values[i] for i in range(len(losses))]
    _write_series(out_dir, "landscape", names, cols, cfg["format"], outputs)

    if cfg["plot"]:
        fig = render_line_chart(
            [(s.label(), values[i]) for i, s in enumerate(losses)],
            x=fracs,
            title="loss along the straight path to the target",
            x_label="interpolation fraction",
            y_label="loss",
        )
        (out_dir / "landscape.svg").write_text(fig)
        outputs.append("landscape.svg")

    write_manifest(out_dir, "landscape", _manifest_config(cfg, losses), outputs, t0)
    print(f"landscape: {cfg['points']} points x {len(losses)} losses -> {out_dir}")
    return 0


def cmd_gradcheck(cfg: dict) -> int:
    t0 = time.perf_counter()
    losses = _losses_from_config(cfg["losses"])
    out_dir = Path(cfg["out_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(cfg["seed"])
    pred, gt = sample_box_pairs(rng, cfg["pairs"])
    step = cfg["fd_step"]

    rows = []
    failed = False
    for spec in losses:
        ad = grad_autodiff_batch(spec, pred, gt)
        fd = grad_fd_batch(spec, pred, gt, step)
        diff = np.abs(ad - fd)
        scale = np.maximum(np.maximum(np.abs(ad), np.abs(fd)), FD_TOL_ABS / FD_TOL_REL)
        rel = diff / scale
        max_rel = float(np.max(rel))
        ok = max_rel <= FD_TOL_REL
        analytic_max = float("nan")
        if spec.kind == "iou":
            an = grad_analytic_iou_batch(pred, gt)
            analytic_max = float(np.max(np.abs(ad - an)))
            ok = ok and analytic_max <= ANALYTIC_TOL_ABS
        failed = failed or not ok
        rows.append((spec.label(), float(np.max(diff)), max_rel, analytic_max, ok))

    print(f"{'loss':<22} {'max |ad-fd|':>14} {'max rel':>12} {'analytic':>12}  status")
    for label, max_abs, max_rel, analytic_max, ok in rows:
        an_txt = f"{analytic_max:.3e}" if np.isfinite(analytic_max) else "-"
        print(
            f"{label:<22} {max_abs:>14.3e} {max_rel:>12.3e} {an_txt:>12}  "
            + ("ok" if ok else "FAIL")
        )

    names = ["loss", "max_abs_diff", "max_rel_err", "analytic_abs_diff", "passed"]
    if cfg["format"] == "csv":
        fn = "gradcheck.csv"
        lines = [",".join(names)]
        for r in rows:
            lines.append(
                ",".join([r[0], fmt17(r[1]), fmt17(r[2]), fmt17(r[3]), str(int(r[4]))])
            )
        (out_dir / fn).write_text("\n".join(lines) + "\n")
    else:
        fn = "gradcheck.json"
        payload = {
            "loss": [r[0] for r in rows],
            "max_abs_diff": [r[1] for r in rows],
            "max_rel_err": [r[2] for r in rows],
            "analytic_abs_diff": [r[3] for r in rows],
            "passed": [bool(r[4]) for r in rows],
        }
        (out_dir / fn).write_text(json.dumps(payload, indent=1) + "\n")
    outputs = [fn]
    write_manifest(out_dir, "gradcheck", _manifest_config(cfg, losses), outputs, t0)
    return 1 if failed else 0


def cmd_alpha_bound(cfg: dict) -> int:
    t0 = time.perf_counter()
    out_dir = Path(cfg["out_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(cfg["seed"])
    n = cfg["pairs"]
    margin = cfg["margin"]
    # wider spread than gradcheck so disjoint pairs dominate
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
    gap_x = np.abs(pred[0] - gt[0]) - (pred[2] + gt[2]) * 0.5
    gap_y = np.abs(pred[1] - gt[1]) - (pred[3] + gt[3]) * 0.5
    bx = np.where(gap_x > 0.0, gap_x / (gap_x + gt[2]), 0.0)
    by = np.where(gap_y > 0.0, gap_y / (gap_y + gt[3]), 0.0)
    bound = np.maximum(bx, by)

    a_above = np.minimum(bound + margin, 1.0)
    iou_above = np.asarray(_iou4(_interp4(tuple(pred), tuple(gt), a_above), tuple(gt)))
    above_ok = iou_above > 0.0

    below_mask = bound > margin
    a_below = np.where(below_mask, bound - margin, 0.0)
    iou_below = np.asarray(_iou4(_interp4(tuple(pred), tuple(gt), a_below), tuple(gt)))
    below_ok = ~below_mask | (iou_below == 0.0)

    ok = bool(np.all(above_ok) and np.all(below_ok))
    n_disjoint = int(np.sum(bound > 0.0))

    names = ["pair", "pred_cx", "pred_cy", "pred_w", "pred_h", "gt_cx", "gt_cy",
             "gt_w", "gt_h", "bound", "iou_above", "iou_below"]
    cols = [np.arange(n), pred[0], pred[1], pred[2], pred[3], gt[0], gt[1], gt[2], gt[3],
            bound, iou_above, np.where(below_mask, iou_below, np.nan)]
    outputs: list[str] = []
    _write_series(out_dir, "alpha_bound", names, cols, cfg["format"], outputs)
    write_manifest(out_dir, "alpha-bound", _manifest_config(cfg, None), outputs, t0)
    print(
        f"alpha-bound: {n} pairs ({n_disjoint} disjoint), margin {margin:g}: "
        + ("all pairs behave as bounded" if ok else "VIOLATION")
    )
    return 0 if ok else 1


# ----------------------------------------------------------------------
# argument parsing
# ----------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file (or a manifest.json)")
    p.add_argument("--seed", type=int)
    p.add_argument("--out-dir", dest="out_dir")
    p.add_argument("--steps", type=int)
    p.add_argument("--lr", type=parse_number)
    p.add_argument("--losses", help="comma list, e.g. iou,giou,interpiou:alpha=0.98")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--plot", action="store_true", default=None)
    p.add_argument("--threads", type=int, help="worker threads (default: all cores)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="bbrlab",
        description="Workbench for IoU-family box-regression losses",
    )
    ap.add_argument("--version", action="version", version=f"bbrlab {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="batch descent over an anchor population")
    _add_common(p)
    p.add_argument("--anchors", type=int)
    p.add_argument("--gt-area", dest="gt_area", type=parse_number)
    p.add_argument("--single-gt", dest="single_gt", action="store_true", default=None)

    p = sub.add_parser("enlargement", help="controlled elongated-box case")
    _add_common(p)

    p = sub.add_parser("landscape", help="losses along the straight path to the target")
    _add_common(p)
    p.add_argument("--points", type=int)

    p = sub.add_parser("gradcheck", help="cross-check the three gradient routes")
    _add_common(p)
    p.add_argument("--pairs", type=int)
    p.add_argument("--fd-step", dest="fd_step", type=parse_number)

    p = sub.add_parser("alpha-bound", help="verify the overlap-guarantee bound")
    _add_common(p)
    p.add_argument("--pairs", type=int)
    p.add_argument("--margin", type=parse_number)
    return ap


_COMMANDS = {
    "simulate": cmd_simulate,
    "enlargement": cmd_enlargement,
    "landscape": cmd_landscape,
    "gradcheck": cmd_gradcheck,
    "alpha-bound": cmd_alpha_bound,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args.command, args)
        return _COMMANDS[args.command](cfg)
    except (ValueError, OSError) as err:
        print(f"bbrlab {args.command}: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
