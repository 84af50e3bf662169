"""Command-line interface: filter, rollout, baseline, eval, report."""

from __future__ import annotations

import functools
import json
import os
import sys
from pathlib import Path

import click

from . import __version__
from .errors import (
    ConfigError,
    EmptyCorpus,
    InteractionEvalError,
    NoCollapse,
    ParseError,
)
from .filtering import filter_scene_with_rejections
from .pipeline import (
    DEFAULT_ORACLE_K,
    _load_scene_dir,
    emit_histograms,
    evaluate_scene,
    run_fixture,
    run_pipeline,
    write_filter_csv,
)
from .rollout import interaction_timeline
from .sceneio import save_predictions
from .types import EvalConfig

EXIT_CONFIG = 2
EXIT_PARSE = 3
EXIT_EMPTY = 4


def _fail(err: Exception) -> None:
    code = 1
    if isinstance(err, ConfigError):
        code = EXIT_CONFIG
    elif isinstance(err, ParseError):
        code = EXIT_PARSE
    elif isinstance(err, EmptyCorpus):
        code = EXIT_EMPTY
    click.echo(json.dumps({"error": type(err).__name__, "message": str(err)}), err=True)
    sys.exit(code)


def config_options(f):
    @click.option("--d-collision", type=float, default=1.5, show_default=True,
                  help="Path-sharing distance threshold [m].")
    @click.option("--dt-ps-max", type=float, default=6.0, show_default=True,
                  help="Max gap between first shared-path times [s].")
    @click.option("--a-lon-max", type=float, default=1.47, show_default=True,
                  help="Longitudinal acceleration limit [m/s^2].")
    @click.option("--a-lat-max", type=float, default=1.18, show_default=True,
                  help="Lateral acceleration limit [m/s^2].")
    @click.option("--horizon", type=float, default=6.0, show_default=True,
                  help="Prediction horizon [s].")
    @click.option("--theta-hat", type=float, default=0.0, show_default=True,
                  help="Static-class winding threshold [rad].")
    @click.option("--interp-factor", type=int, default=4, show_default=True,
                  help="Trajectory interpolation factor.")
    @click.option("--t-min", type=float, default=None,
                  help="Path-sharing start threshold [s]; default: first co-observed time.")
    @functools.wraps(f)
    def wrapper(*args, **kwargs):
        return f(*args, **kwargs)

    return wrapper


def _make_config(d_collision, dt_ps_max, a_lon_max, a_lat_max, horizon,
                 theta_hat, interp_factor, t_min) -> EvalConfig:
    return EvalConfig(d_collision=d_collision, dt_ps_max=dt_ps_max,
                      a_lon_max=a_lon_max, a_lat_max=a_lat_max, t_p=horizon,
                      theta_hat=theta_hat, interp_factor=interp_factor, t_min=t_min)


def _jobs_option(jobs: int | None) -> int:
    env = os.environ.get("INTERACTION_EVAL_JOBS")
    if env is not None:
        return int(env)
    return jobs if jobs else 1


@click.group()
@click.version_option(__version__, prog_name="interaction-eval")
def main():
    """Evaluate interaction-mode prediction in joint trajectory forecasts."""


@main.command("filter")
@click.option("--scene-dir", type=click.Path(exists=True), required=True)
@click.option("--out", "out_path", type=click.Path(), required=True,
              help="Output CSV of accepted safety-critical pairs.")
@config_options
def cmd_filter(scene_dir, out_path, **cfg_kw):
    """Find safety-critical interaction pairs in a scene directory."""
    try:
        cfg = _make_config(**cfg_kw)
        rows = []
        for scene in _load_scene_dir(scene_dir):
            accepted, rejected = filter_scene_with_rejections(scene, cfg)
            rows.extend((scene.scene_id, p) for p in accepted)
            for rej in rejected:
                click.echo(f"{scene.scene_id}: rejected ({rej.agent_a}, {rej.agent_b}): "
                           f"{rej.reason.value} {rej.detail}".rstrip(), err=True)
        write_filter_csv(Path(out_path), rows)
        click.echo(f"{len(rows)} pair(s) accepted -> {out_path}")
    except InteractionEvalError as e:
        _fail(e)


@main.command("rollout")
@click.option("--scene-dir", type=click.Path(exists=True), required=True)
@click.option("--out", "out_path", type=click.Path(), required=True,
              help="Output CSV of per-frame feasible classes and IHS summary.")
@config_options
def cmd_rollout(scene_dir, out_path, **cfg_kw):
    """Enumerate feasible interaction classes and locate the IHS per pair."""
    import csv

    try:
        cfg = _make_config(**cfg_kw)
        with open(out_path, "w", newline="", encoding="utf-8") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(["scene_id", "agent_a", "agent_b", "row", "frame_t",
                        "feasible_classes", "gt_class", "is_ihs",
                        "t_h_collapse", "t_h_final", "t_h_start"])
            for scene in _load_scene_dir(scene_dir):
                accepted, _ = filter_scene_with_rejections(scene, cfg)
                for pair in accepted:
                    try:
                        tl = interaction_timeline(scene, pair, cfg)
                    except NoCollapse:
                        w.writerow([scene.scene_id, pair.agent_a, pair.agent_b,
                                    "summary", "", "", "", "", "NoCollapse", "", ""])
                        continue
                    for i, feas in enumerate(tl.h_feas):
                        w.writerow([scene.scene_id, pair.agent_a, pair.agent_b,
                                    "frame", f"{tl.t[i]:.6g}",
                                    " ".join(sorted(str(c) for c in feas)),
                                    str(tl.h_gt[i]), int(i == tl.collapse_idx),
                                    "", "", ""])
                    w.writerow([scene.scene_id, pair.agent_a, pair.agent_b,
                                "summary", "", "", "", "",
                                f"{tl.t_h_collapse:.6g}", f"{tl.t_h_final:.6g}",
                                f"{tl.t_h_start:.6g}"])
        click.echo(f"rollout timelines -> {out_path}")
    except InteractionEvalError as e:
        _fail(e)


@main.command("baseline")
@click.option("--scene-dir", type=click.Path(exists=True), required=True)
@click.option("--model", type=click.Choice(["cv", "oracle"]), required=True)
@click.option("--out-dir", type=click.Path(), required=True,
              help="Directory for standard prediction files (<scene_id>.json).")
@click.option("--k", type=int, default=DEFAULT_ORACLE_K, show_default=True,
              help="Prediction count for the oracle model.")
@config_options
def cmd_baseline(scene_dir, model, out_dir, k, **cfg_kw):
    """Write baseline predictions in the standard prediction file format."""
    try:
        cfg = _make_config(**cfg_kw)
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for scene in _load_scene_dir(scene_dir):
            result = evaluate_scene(scene, cfg, baseline=model, oracle_k=k)
            save_predictions(scene.scene_id, cfg.t_p, result.predictions,
                             out / f"{scene.scene_id}.json")
            click.echo(f"{scene.scene_id}: {len(result.predictions)} frame(s)")
    except InteractionEvalError as e:
        _fail(e)


@main.command("eval")
@click.option("--scene-dir", type=click.Path(exists=True),
              help="Scene directory (required unless --fixture is used).")
@click.option("--pred", "pred_source", default=None,
              help="Prediction directory, or baseline name: cv | oracle.")
@click.option("--out-dir", type=click.Path(), required=True)
@click.option("--fixture", type=click.Path(exists=True), default=None,
              help="Pre-computed per-frame mode table (skips geometry).")
@click.option("--k", type=int, default=DEFAULT_ORACLE_K, show_default=True)
@click.option("--substitute-static", is_flag=True,
              help="Fill missing agent predictions with static ground truth.")
@click.option("--jobs", type=int, default=None,
              help="Concurrent scenes (env INTERACTION_EVAL_JOBS overrides).")
@config_options
def cmd_eval(scene_dir, pred_source, out_dir, fixture, k, substitute_static,
             jobs, **cfg_kw):
    """Run the full evaluation and write report.json plus CSV outputs."""
    try:
        if fixture is not None:
            report = run_fixture(fixture, out_dir)
        else:
            if scene_dir is None or pred_source is None:
                raise ConfigError("--scene-dir and --pred are required without --fixture")
            cfg = _make_config(**cfg_kw)
            report = run_pipeline(scene_dir, pred_source, out_dir, cfg,
                                  jobs=_jobs_option(jobs), oracle_k=k,
                                  substitute_static=substitute_static)
        click.echo(json.dumps(report.to_dict(), indent=1, sort_keys=True))
    except InteractionEvalError as e:
        _fail(e)


@main.command("report")
@click.option("--scene-dir", type=click.Path(exists=True), required=True)
@click.option("--out-dir", type=click.Path(), required=True)
@config_options
def cmd_report(scene_dir, out_dir, **cfg_kw):
    """Emit plot-data CSVs (closeness heatmap, time-to-IHS histogram)."""
    try:
        cfg = _make_config(**cfg_kw)
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        pairs, tls = [], []
        scenes = _load_scene_dir(scene_dir)
        for scene in scenes:
            accepted, _ = filter_scene_with_rejections(scene, cfg)
            for pair in accepted:
                pairs.append((scene.scene_id, pair))
                try:
                    tls.append((scene.scene_id, pair, interaction_timeline(scene, pair, cfg)))
                except NoCollapse:
                    pass
        emit_histograms(pairs, tls, out, scenes[0].dt)
        click.echo(f"heatmap.csv and ihs_hist.csv -> {out_dir}")
    except InteractionEvalError as e:
        _fail(e)


if __name__ == "__main__":
    main()
