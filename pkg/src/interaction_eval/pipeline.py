"""End-to-end evaluation: ingestion, filtering, rollouts, metrics, reports."""

from __future__ import annotations

import csv
import json
import time
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .baselines import cv_predict, oracle_predict, scene_time_origin
from .errors import (
    DegenerateInterval,
    EmptyCorpus,
    NoCollapse,
    ParseError,
)
from .filtering import CriticalPair, PairRejection, filter_scene_with_rejections
from .homotopy import HomotopyClass, classify_pair_windows
from .metrics import (
    AggregateReport,
    DisplacementMetrics,
    FrameModeFlags,
    FrameRecord,
    PairRecord,
    aggregate,
    displacement_metrics,
    frame_flags,
    pair_time_metrics,
)
from .rollout import InteractionTimeline, interaction_timeline
from .sceneio import load_predictions, load_scene
from .types import EvalConfig, JointPredictionSet, Scene, Trajectory

BASELINE_MODELS = ("cv", "oracle")
DEFAULT_ORACLE_K = 5


@dataclass
class PairEvaluation:
    pair: CriticalPair
    timeline: InteractionTimeline | None
    skipped: str | None  # reason when the pair is excluded from time metrics
    flags: list[FrameModeFlags] = field(default_factory=list)
    frame_records: list[FrameRecord] = field(default_factory=list)
    record: PairRecord | None = None


@dataclass
class SceneEvaluation:
    scene: Scene
    pairs: list[PairEvaluation]
    rejections: list[PairRejection]
    predictions: dict[int, JointPredictionSet]


def _window_frame_offset(scene: Scene, timeline: InteractionTimeline) -> int:
    return int(round((timeline.t[0] - scene_time_origin(scene)) / scene.dt))


def _prediction_classes(pset: JointPredictionSet, pair: CriticalPair, t0: float,
                        dt: float, theta_hat: float):
    """(h_ml, h_pred) of a joint prediction set for one pair; None if unusable."""
    h_ml = None
    classes = []
    for idx, sample in enumerate(pset.samples):
        fa = sample.trajs.get(pair.agent_a)
        fb = sample.trajs.get(pair.agent_b)
        if fa is None or fb is None:
            continue
        h = min(len(fa), len(fb))
        if h < 2:
            continue
        tgrid = t0 + dt * np.arange(1, h + 1)
        ta = Trajectory(t=tgrid, xy=np.asarray(fa)[:h], dt=dt)
        tb = Trajectory(t=tgrid, xy=np.asarray(fb)[:h], dt=dt)
        cls = classify_pair_windows(ta, tb, theta_hat)
        classes.append(cls)
        if idx == 0:
            h_ml = cls
    if h_ml is None or not classes:
        return None
    return h_ml, frozenset(classes)


def _baseline_predictions(scene: Scene, model: str, frames: set[int],
                          pairs: list[CriticalPair], cfg: EvalConfig,
                          k: int = DEFAULT_ORACLE_K) -> dict[int, JointPredictionSet]:
    out: dict[int, JointPredictionSet] = {}
    for fr in sorted(frames):
        if model == "cv":
            out[fr] = cv_predict(scene, fr, cfg)
        elif model == "oracle":
            out[fr] = oracle_predict(scene, fr, pairs, k, cfg)
        else:
            raise EmptyCorpus(f"unknown baseline model {model!r}")
    return out


def evaluate_scene(scene: Scene, cfg: EvalConfig,
                   predictions: dict[int, JointPredictionSet] | None = None,
                   baseline: str | None = None,
                   oracle_k: int = DEFAULT_ORACLE_K) -> SceneEvaluation:
    """Filter pairs, locate their IHS, and grade predictions frame by frame."""
    pairs, rejections = filter_scene_with_rejections(scene, cfg)
    evals: list[PairEvaluation] = []
    timelines: list[tuple[CriticalPair, InteractionTimeline]] = []
    for pair in pairs:
        try:
            tl = interaction_timeline(scene, pair, cfg)
        except NoCollapse:
            evals.append(PairEvaluation(pair, None, skipped="NoCollapse"))
            continue
        except DegenerateInterval:
            evals.append(PairEvaluation(pair, None, skipped="DegenerateInterval"))
            continue
        timelines.append((pair, tl))

    needed_frames: set[int] = set()
    for pair, tl in timelines:
        off = _window_frame_offset(scene, tl)
        needed_frames.update(range(off + tl.start_idx, off + tl.final_idx + 1))
    if baseline is not None:
        predictions = _baseline_predictions(scene, baseline, needed_frames,
                                            pairs, cfg, oracle_k)
    predictions = predictions or {}

    for pair, tl in timelines:
        off = _window_frame_offset(scene, tl)
        ev = PairEvaluation(pair, tl, skipped=None)
        for i in range(tl.start_idx, tl.final_idx + 1):
            g = off + i
            pset = predictions.get(g)
            if pset is None:
                continue
            if len(tl.h_feas[i]) == 0:
                continue  # both rollouts collide: excluded, surfaced via timeline
            got = _prediction_classes(pset, pair, float(tl.t[i]), scene.dt, cfg.theta_hat)
            if got is None:
                continue
            h_ml, h_pred = got
            ff = frame_flags(g, tl.h_gt[i], h_ml, h_pred, tl.h_feas[i])
            ev.flags.append(ff)
            ev.frame_records.append(FrameRecord(
                scene_id=scene.scene_id, agent_a=pair.agent_a, agent_b=pair.agent_b,
                t=float(tl.t[i]), dt_collapse=float(tl.t_h_collapse - tl.t[i]), flags=ff))
        if not ev.flags:
            ev.skipped = "NoPredictionFrames"
        else:
            ev.record = PairRecord(
                scene_id=scene.scene_id, agent_a=pair.agent_a, agent_b=pair.agent_b,
                t_h_start=float(tl.t[tl.start_idx]), t_h_final=float(tl.t[tl.final_idx]),
                t_h_collapse=tl.t_h_collapse,
                metrics=pair_time_metrics(ev.flags, scene.dt))
        evals.append(ev)
    return SceneEvaluation(scene=scene, pairs=evals, rejections=rejections,
                           predictions=predictions)


# ---------------------------------------------------------------------------
# corpus-level pipeline and file emission


def _load_scene_dir(scene_dir: str | Path) -> list[Scene]:
    paths = sorted(Path(scene_dir).glob("*.json"))
    if not paths:
        raise EmptyCorpus(f"no scene files in {scene_dir}")
    return [load_scene(p) for p in paths]


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _dt_cell(v: float | None) -> str:
    return "FromStart" if v is None else f"{v:.6g}"


def write_pair_csv(path: Path, records: list[PairRecord]) -> None:
    rows = [[r.scene_id, r.agent_a, r.agent_b,
             f"{r.t_h_start:.6g}", f"{r.t_h_final:.6g}", f"{r.t_h_collapse:.6g}",
             _dt_cell(r.metrics.dt_correct), _dt_cell(r.metrics.dt_covered),
             int(r.metrics.consistent), f"{r.metrics.collapse_rate:.6g}",
             r.metrics.n_frames, r.metrics.n_two_feasible]
            for r in records]
    _write_csv(path, ["scene_id", "agent_a", "agent_b", "t_h_start", "t_h_final",
                      "t_h_collapse", "dt_correct", "dt_covered", "consistent",
                      "collapse_rate", "n_frames", "n_two_feasible"], rows)


def write_frames_csv(path: Path, records: list[FrameRecord]) -> None:
    rows = [[r.scene_id, r.agent_a, r.agent_b, r.flags.frame, f"{r.t:.6g}",
             f"{r.dt_collapse:.6g}", str(r.flags.h_gt), str(r.flags.h_ml),
             " ".join(sorted(str(c) for c in r.flags.h_pred)),
             " ".join(sorted(str(c) for c in r.flags.h_feas)),
             int(r.flags.correct), int(r.flags.covered), int(r.flags.collapse)]
            for r in records]
    _write_csv(path, ["scene_id", "agent_a", "agent_b", "frame", "t", "dt_collapse",
                      "gt_class", "ml_class", "pred_classes", "feasible_classes",
                      "correct", "covered", "collapse"], rows)


def write_curves_csv(path: Path, report: AggregateReport) -> None:
    rows = [[f"{c['dt_collapse']:.6g}", c["n"], f"{c['correct_rate']:.6g}",
             f"{c['covered_rate']:.6g}", f"{c['collapse_rate']:.6g}"]
            for c in report.curves]
    _write_csv(path, ["dt_collapse", "n", "correct_rate", "covered_rate",
                      "collapse_rate"], rows)


def write_filter_csv(path: Path, rows_in: list[tuple[str, CriticalPair]]) -> None:
    """CSV of accepted pairs: sharing times, time gap and closest approach."""
    rows = [[scene_id, p.agent_a, p.agent_b,
             f"{p.sharing.t_ps_a:.6g}", f"{p.sharing.t_ps_b:.6g}",
             f"{p.sharing.dt_ps:.6g}", f"{p.min_distance:.6g}"]
            for scene_id, p in rows_in]
    _write_csv(path, ["scene_id", "agent_a", "agent_b", "t_ps_a", "t_ps_b",
                      "dt_ps", "min_distance"], rows)


def emit_histograms(pairs: list[tuple[str, CriticalPair]],
                    timelines: list[tuple[str, CriticalPair, InteractionTimeline]],
                    out_dir: str | Path, dt: float,
                    heatmap_time_bin: float = 0.5,
                    heatmap_dist_bin: float = 1.0) -> None:
    """Plot-data CSVs: closeness heatmap and time-to-IHS histogram."""
    out = Path(out_dir)
    cells: dict[tuple[int, int], int] = {}
    for _, p in pairs:
        key = (int(p.sharing.dt_ps // heatmap_time_bin),
               int(p.min_distance // heatmap_dist_bin))
        cells[key] = cells.get(key, 0) + 1
    rows = [[f"{kt * heatmap_time_bin:.6g}", f"{kd * heatmap_dist_bin:.6g}", n]
            for (kt, kd), n in sorted(cells.items())]
    _write_csv(out / "heatmap.csv", ["dt_ps_bin", "min_distance_bin", "count"], rows)

    hist: dict[int, int] = {}
    for _, _, tl in timelines:
        for i in range(tl.start_idx, tl.final_idx + 1):
            b = int(round((tl.t_h_collapse - float(tl.t[i])) / dt))
            hist[b] = hist.get(b, 0) + 1
    rows = [[f"{b * dt:.6g}", n] for b, n in sorted(hist.items())]
    _write_csv(out / "ihs_hist.csv", ["dt_collapse", "count"], rows)


def run_pipeline(scene_dir: str | Path, pred_source: str | Path, out_dir: str | Path,
                 cfg: EvalConfig, jobs: int = 1,
                 oracle_k: int = DEFAULT_ORACLE_K,
                 substitute_static: bool = False) -> AggregateReport:
    """Evaluate a scene directory against a prediction directory or baseline.

    ``pred_source`` is either a baseline name ("cv" / "oracle") or a
    directory of prediction files named <scene_id>.json. Writes manifest,
    pairs.csv, frames.csv, curves.csv, report.json and the histogram CSVs.
    """
    t_start = time.time()
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    scenes = _load_scene_dir(scene_dir)
    baseline = str(pred_source) if str(pred_source) in BASELINE_MODELS else None

    def run_one(scene: Scene) -> SceneEvaluation:
        preds = None
        if baseline is None:
            pred_path = Path(pred_source) / f"{scene.scene_id}.json"
            if not pred_path.exists():
                raise ParseError(pred_path, "missing prediction file for scene")
            preds = load_predictions(pred_path, scene, substitute_static)
        return evaluate_scene(scene, cfg, predictions=preds, baseline=baseline,
                              oracle_k=oracle_k)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run_one, scenes))
    else:
        results = [run_one(s) for s in scenes]

    pair_records = [ev.record for r in results for ev in r.pairs if ev.record]
    frame_records = [fr for r in results for ev in r.pairs for fr in ev.frame_records]
    if not pair_records:
        raise EmptyCorpus("no evaluable interaction pairs in corpus")
    dt = scenes[0].dt
    disp = None
    all_preds = [pset for r in results for pset in r.predictions.values()]
    if all_preds:
        per_scene = []
        for r in results:
            if r.predictions:
                per_scene.append(displacement_metrics(
                    sorted(r.predictions.values(), key=lambda p: p.frame), r.scene))
        disp = DisplacementMetrics(
            ml_ade=float(np.mean([d.ml_ade for d in per_scene])),
            ml_fde=float(np.mean([d.ml_fde for d in per_scene])),
            joint_min_ade=float(np.mean([d.joint_min_ade for d in per_scene])),
            joint_min_fde=float(np.mean([d.joint_min_fde for d in per_scene])),
        )
    report = aggregate(pair_records, frame_records, bin_width=dt, displacement=disp)

    write_pair_csv(out / "pairs.csv", pair_records)
    write_frames_csv(out / "frames.csv", frame_records)
    write_curves_csv(out / "curves.csv", report)
    (out / "report.json").write_text(
        json.dumps(report.to_dict(), indent=1, sort_keys=True), encoding="utf-8")
    accepted = [(r.scene.scene_id, ev.pair) for r in results for ev in r.pairs]
    tls = [(r.scene.scene_id, ev.pair, ev.timeline)
           for r in results for ev in r.pairs if ev.timeline is not None]
    emit_histograms(accepted, tls, out, dt)
    write_filter_csv(out / "filter.csv", accepted)

    manifest = {
        "tool": "interaction-eval",
        "version": __version__,
        "config": {k: getattr(cfg, k) for k in (
            "d_collision", "dt_ps_max", "a_lon_max", "a_lat_max", "t_p",
            "theta_hat", "interp_factor", "t_min")},
        "inputs": {"scene_dir": str(scene_dir), "pred_source": str(pred_source),
                   "oracle_k": oracle_k, "substitute_static": substitute_static},
        "scenes": {r.scene.scene_id: {
            "n_agents": len(r.scene.agents),
            "n_accepted_pairs": len(r.pairs),
            "n_rejected_pairs": len(r.rejections),
            "skipped": dict(Counter(ev.skipped for ev in r.pairs if ev.skipped)),
        } for r in results},
        "timing_s": round(time.time() - t_start, 3),
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=1, sort_keys=True),
                                       encoding="utf-8")
    return report


# ---------------------------------------------------------------------------
# fixture ingestion: pre-computed per-frame mode tables


def load_mode_fixture(path: str | Path) -> tuple[float, list[PairRecord], list[FrameRecord]]:
    """Read a fixture of per-frame mode tables and fold it into records.

    Fixture shape::

        { "dt": 0.5,
          "pairs": [ { "scene_id": str, "agent_a": str, "agent_b": str,
                       "frames": [ { "frame": int, "gt": "CW", "ml": "CW",
                                     "pred": ["CW"], "feas": ["CCW", "CW"] } ] } ] }

    Listed frames are the evaluation interval; the IHS sits one frame after
    the last listed frame.
    """
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
        dt = float(data["dt"])
        pair_records, frame_records = [], []
        for p in data["pairs"]:
            flags: list[FrameModeFlags] = []
            frames = sorted(p["frames"], key=lambda f: int(f["frame"]))
            final = int(frames[-1]["frame"])
            collapse_t = (final + 1) * dt
            for f in frames:
                ff = frame_flags(
                    int(f["frame"]), HomotopyClass(f["gt"]), HomotopyClass(f["ml"]),
                    frozenset(HomotopyClass(c) for c in f["pred"]),
                    frozenset(HomotopyClass(c) for c in f["feas"]))
                flags.append(ff)
                frame_records.append(FrameRecord(
                    scene_id=str(p["scene_id"]), agent_a=str(p["agent_a"]),
                    agent_b=str(p["agent_b"]), t=int(f["frame"]) * dt,
                    dt_collapse=collapse_t - int(f["frame"]) * dt, flags=ff))
            pair_records.append(PairRecord(
                scene_id=str(p["scene_id"]), agent_a=str(p["agent_a"]),
                agent_b=str(p["agent_b"]), t_h_start=int(frames[0]["frame"]) * dt,
                t_h_final=final * dt, t_h_collapse=collapse_t,
                metrics=pair_time_metrics(flags, dt)))
    except (KeyError, TypeError, ValueError, IndexError) as e:
        raise ParseError(path, f"malformed mode fixture: {e!r}")
    return dt, pair_records, frame_records


def run_fixture(path: str | Path, out_dir: str | Path) -> AggregateReport:
    """Metrics-only evaluation from a pre-computed mode table fixture."""
    dt, pair_records, frame_records = load_mode_fixture(path)
    report = aggregate(pair_records, frame_records, bin_width=dt)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_pair_csv(out / "pairs.csv", pair_records)
    write_frames_csv(out / "frames.csv", frame_records)
    write_curves_csv(out / "curves.csv", report)
    (out / "report.json").write_text(
        json.dumps(report.to_dict(), indent=1, sort_keys=True), encoding="utf-8")
    return report
