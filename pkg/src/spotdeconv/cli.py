"""Command-line pipeline: synth, solve, detect, evaluate, pipeline.

Configuration is a single JSON file; see README for the schema. All
subcommands exit 0 on success and nonzero with a diagnostic naming the
offending field or file on any error.
"""

import argparse
import csv
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import codec
from .detection import detect
from .evaluation import best_threshold, threshold_sweep
from .kernels import DEFAULT_TRUNCATION, build_kernel_bank, make_scale_grid
from .solver import BECK, CHAMBOLLE, NO_MOMENTUM, SolverConfig, apg_solve
from .synth import GENERATOR_NAME, SceneSpec, generate_scene, render_observation


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    sigma_max: float
    delta_pix: float
    num_scales: int
    truncation: float
    lam: float
    weights_uniform: Optional[float]
    weights_file: Optional[str]
    momentum: str
    chambolle_a: float
    rel_tol: float
    max_iters: int
    seed: int
    scene: dict = field(default_factory=dict)

    @property
    def sigma_max_pixels(self):
        return self.sigma_max / self.delta_pix


def _require(cfg, key, kind):
    if key not in cfg:
        raise ConfigError(f"config field {key!r} is missing")
    value = cfg[key]
    try:
        return kind(value)
    except (TypeError, ValueError):
        raise ConfigError(f"config field {key!r} has invalid value {value!r}")


def load_config(path):
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}")

    sigma_max = _require(raw, "sigma_max", float)
    delta_pix = float(raw.get("delta_pix", 1.0))
    if delta_pix <= 0:
        raise ConfigError(f"config field 'delta_pix' must be > 0, got {delta_pix}")
    if sigma_max <= 0:
        raise ConfigError(f"config field 'sigma_max' must be > 0, got {sigma_max}")
    num_scales = _require(raw, "K", int)
    if num_scales < 1:
        raise ConfigError(f"config field 'K' must be >= 1, got {num_scales}")
    lam = _require(raw, "lambda", float)
    if lam < 0:
        raise ConfigError(f"config field 'lambda' must be >= 0, got {lam}")

    weights = raw.get("weights", {"uniform": 1.0})
    if not isinstance(weights, dict) or len(weights) != 1 or not (
        "uniform" in weights or "file" in weights
    ):
        raise ConfigError(
            "config field 'weights' must be {\"uniform\": value} or {\"file\": path}"
        )
    weights_uniform = float(weights["uniform"]) if "uniform" in weights else None
    weights_file = str(weights["file"]) if "file" in weights else None

    momentum = str(raw.get("momentum", BECK)).lower()
    if momentum not in (BECK, CHAMBOLLE, NO_MOMENTUM):
        raise ConfigError(
            f"config field 'momentum' must be one of beck/chambolle/none, got {momentum!r}"
        )

    return RunConfig(
        sigma_max=sigma_max,
        delta_pix=delta_pix,
        num_scales=num_scales,
        truncation=float(raw.get("truncation", DEFAULT_TRUNCATION)),
        lam=lam,
        weights_uniform=weights_uniform,
        weights_file=weights_file,
        momentum=momentum,
        chambolle_a=float(raw.get("chambolle_a", 3.0)),
        rel_tol=float(raw.get("rel_tol", 1e-6)),
        max_iters=int(raw.get("max_iters", 5000)),
        seed=int(raw.get("seed", 0)),
        scene=raw.get("scene", {}),
    )


def _kernel_bank(cfg):
    grid = make_scale_grid(cfg.sigma_max_pixels, cfg.num_scales)
    return build_kernel_bank(grid, cfg.truncation)


def _weights_image(cfg, shape):
    if cfg.weights_file is not None:
        w = codec.read_tensor(cfg.weights_file)
        if w.shape != shape:
            raise ConfigError(
                f"weights file shape {w.shape} does not match observation {shape}"
            )
        return w
    return np.full(shape, cfg.weights_uniform)


def _scene_spec(cfg):
    scene = cfg.scene
    if not scene:
        raise ConfigError("config field 'scene' is missing")
    amplitude = scene.get("amplitude", [1.0, 1.0])
    if not (isinstance(amplitude, (list, tuple)) and len(amplitude) == 2):
        raise ConfigError("scene field 'amplitude' must be a [lo, hi] pair")
    return SceneSpec(
        rows=_require(scene, "rows", int),
        cols=_require(scene, "cols", int),
        depth=cfg.num_scales,
        n_sources=_require(scene, "n_sources", int),
        min_separation=float(scene.get("min_separation", 1.0)),
        amplitude_lo=float(amplitude[0]),
        amplitude_hi=float(amplitude[1]),
        noise_sigma=float(scene.get("noise_sigma", 0.0)),
        seed=cfg.seed,
        scale_profile=scene.get("scale_profile"),
    )


def run_synth(cfg, out_dir):
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    spec = _scene_spec(cfg)
    bank = _kernel_bank(cfg)
    a_true, gt = generate_scene(spec)

    clean = render_observation(a_true, bank, 0.0, spec.seed)
    noise_sigma = spec.noise_sigma
    noise_rel = cfg.scene.get("noise_sigma_rel")
    if noise_rel is not None:
        noise_sigma = float(noise_rel) * float(np.max(clean))
    d_obs = render_observation(a_true, bank, noise_sigma, spec.seed + 1)

    codec.write_tensor(out_dir / "a_true.f64t", a_true)
    codec.write_tensor(out_dir / "d_obs.f64t", d_obs)
    codec.write_ground_truth_csv(out_dir / "gt.csv", gt)
    meta = {
        "generator": GENERATOR_NAME,
        "seed": spec.seed,
        "noise_seed": spec.seed + 1,
        "rows": spec.rows,
        "cols": spec.cols,
        "K": spec.depth,
        "n_sources": spec.n_sources,
        "min_separation": spec.min_separation,
        "amplitude": [spec.amplitude_lo, spec.amplitude_hi],
        "noise_sigma": noise_sigma,
    }
    with open(out_dir / "meta.json", "w") as fh:
        json.dump(meta, fh, indent=2)
    return d_obs, gt


def run_solve(cfg, d_obs, trace_path=None):
    bank = _kernel_bank(cfg)
    weights = _weights_image(cfg, d_obs.shape)
    solver_cfg = SolverConfig(
        lam=cfg.lam,
        weights=weights,
        momentum=cfg.momentum,
        chambolle_a=cfg.chambolle_a,
        max_iters=cfg.max_iters,
        rel_tol=cfg.rel_tol,
        record_objective=trace_path is not None,
    )
    result = apg_solve(d_obs, bank, solver_cfg)
    if trace_path is not None:
        with open(trace_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["iteration", "objective"])
            for i, obj in enumerate(result.objective_trace, start=1):
                writer.writerow([i, repr(obj)])
    return result


def run_evaluate(dets, gt, tol, report_path, sweep_path):
    report = best_threshold(dets, gt, tol)
    with open(report_path, "w") as fh:
        json.dump(
            {
                "threshold": report.threshold,
                "TP": report.tp,
                "FP": report.fp,
                "FN": report.fn,
                "precision": report.precision,
                "recall": report.recall,
                "f1": report.f1,
                "tolerance": tol,
            },
            fh,
            indent=2,
        )
    with open(sweep_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["threshold", "TP", "FP", "FN", "precision", "recall", "f1"])
        for rep in threshold_sweep(dets, gt, tol):
            writer.writerow(
                [repr(rep.threshold), rep.tp, rep.fp, rep.fn,
                 repr(rep.precision), repr(rep.recall), repr(rep.f1)]
            )
    return report


def _cmd_synth(args):
    cfg = load_config(args.config)
    run_synth(cfg, args.out_dir)
    print(f"scene written to {args.out_dir}")


def _cmd_solve(args):
    cfg = load_config(args.config)
    d_obs = codec.read_tensor(args.obs)
    if d_obs.ndim != 2:
        raise ConfigError(f"observation {args.obs} must be 2-D, got ndim={d_obs.ndim}")
    result = run_solve(cfg, d_obs, args.trace)
    codec.write_tensor(args.out, result.a_opt)
    print(
        f"solved in {result.iterations} iterations "
        f"(final rel change {result.final_rel_change:.3e})"
    )


def _cmd_detect(args):
    a = codec.read_tensor(args.volume)
    if a.ndim != 3:
        raise ConfigError(f"volume {args.volume} must be 3-D, got ndim={a.ndim}")
    dets = detect(a)
    codec.write_detections_csv(args.out, dets)
    print(f"{len(dets)} detections written to {args.out}")


def _cmd_evaluate(args):
    dets = codec.read_detections_csv(args.detections)
    gt = codec.read_ground_truth_csv(args.ground_truth)
    sweep = args.sweep or str(Path(args.out).with_suffix("")) + "_sweep.csv"
    report = run_evaluate(dets, gt, args.tol, args.out, sweep)
    print(
        f"best F1 {report.f1:.4f} at threshold {report.threshold:.6g} "
        f"(TP={report.tp} FP={report.fp} FN={report.fn})"
    )


def _cmd_pipeline(args):
    cfg = load_config(args.config)
    out_dir = Path(args.out_dir)
    d_obs, gt = run_synth(cfg, out_dir)
    result = run_solve(cfg, d_obs, out_dir / "trace.csv")
    codec.write_tensor(out_dir / "a_opt.f64t", result.a_opt)
    dets = detect(result.a_opt)
    codec.write_detections_csv(out_dir / "detections.csv", dets)
    report = run_evaluate(
        dets, gt, args.tol, out_dir / "report.json", out_dir / "sweep.csv"
    )
    print(
        f"pipeline done: {result.iterations} iterations, {len(dets)} detections, "
        f"best F1 {report.f1:.4f} at threshold {report.threshold:.6g}"
    )


def build_parser():
    parser = argparse.ArgumentParser(
        prog="spotdeconv",
        description="Group-sparse multi-kernel deconvolution and spot detection.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic scene")
    p.add_argument("--config", required=True)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("solve", help="reconstruct a volume from an observation")
    p.add_argument("--config", required=True)
    p.add_argument("--obs", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--trace", default=None)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("detect", help="extract detections from a volume")
    p.add_argument("--volume", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_detect)

    p = sub.add_parser("evaluate", help="score detections against ground truth")
    p.add_argument("--detections", required=True)
    p.add_argument("--ground-truth", required=True)
    p.add_argument("--tol", type=float, default=3.0)
    p.add_argument("--out", required=True)
    p.add_argument("--sweep", default=None)
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("pipeline", help="synth + solve + detect + evaluate")
    p.add_argument("--config", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--tol", type=float, default=3.0)
    p.set_defaults(func=_cmd_pipeline)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (ConfigError, codec.CodecError, ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
