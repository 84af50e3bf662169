"""Reference predictors: constant-velocity and the mode-covering oracle."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .collision import VehicleDims, is_collision
from .errors import NoFeasibleCombo
from .filtering import CriticalPair
from .rollout import PathRollout, ProfileKind, PROFILE_ORDER, max_scene_speed, speed_profile
from .types import (
    Agent,
    EvalConfig,
    JointPredictionSet,
    JointSample,
    Scene,
    Trajectory,
    trajectory_kinematics,
)


@dataclass(frozen=True)
class OracleCombo:
    profiles: tuple[tuple[str, ProfileKind], ...]  # (agent_id, profile) per agent
    avg_speed: float
    colliding: bool


def scene_time_origin(scene: Scene) -> float:
    return min(float(a.trajectory.t[0]) for a in scene.agents)


def agent_frame_index(scene: Scene, agent: Agent, frame: int) -> int | None:
    """Map a scene-global frame index to the agent's local sample index."""
    t = scene_time_origin(scene) + frame * scene.dt
    i = int(round((t - agent.trajectory.t[0]) / scene.dt))
    if 0 <= i < agent.trajectory.n:
        return i
    return None


def cv_predict(scene: Scene, t: int, cfg: EvalConfig) -> JointPredictionSet:
    """Single joint sample extrapolating each agent's current heading and speed."""
    horizon = cfg.horizon_frames(scene.dt)
    trajs: dict[str, np.ndarray] = {}
    for agent in scene.agents:
        i = agent_frame_index(scene, agent, t)
        if i is None:
            continue
        headings, speeds = trajectory_kinematics(agent.trajectory)
        step = speeds[i] * scene.dt * np.array([np.cos(headings[i]), np.sin(headings[i])])
        future = agent.trajectory.xy[i] + np.outer(np.arange(1, horizon + 1), step)
        trajs[agent.id] = future
    return JointPredictionSet(frame=t, samples=(JointSample(p=1.0, trajs=trajs),))


def _oracle_rollouts(scene: Scene, t: int, agent: Agent, v_max: float,
                     horizon: int, cfg: EvalConfig) -> dict[ProfileKind, Trajectory] | None:
    i = agent_frame_index(scene, agent, t)
    if i is None:
        return None
    _, speeds = trajectory_kinematics(agent.trajectory)
    extend = v_max * (horizon + 1) * scene.dt + 10.0
    path = PathRollout(agent.trajectory, i, extend, cfg)
    return {
        kind: path.roll(speed_profile(kind, float(speeds[i]), v_max, cfg), horizon,
                        t0=float(agent.trajectory.t[i]))
        for kind in (ProfileKind.ACCEL, ProfileKind.CONST_VEL, ProfileKind.DECEL)
    }


def oracle_predict(scene: Scene, t: int, pairs: list[CriticalPair], k: int,
                   cfg: EvalConfig) -> JointPredictionSet:
    """Top-K collision-free profile combinations ranked by average speed.

    Agents involved in a critical pair get all three speed profiles along
    their ground-truth path; everyone else keeps constant velocity.
    """
    if k < 1:
        raise NoFeasibleCombo("k must be >= 1")
    v_max = max_scene_speed(scene)
    horizon = cfg.horizon_frames(scene.dt)
    interacting = sorted({aid for p in pairs for aid in (p.agent_a, p.agent_b)})
    rollouts: dict[str, dict[ProfileKind, Trajectory]] = {}
    present: list[Agent] = []
    for agent in scene.agents:
        rolls = _oracle_rollouts(scene, t, agent, v_max, horizon, cfg)
        if rolls is not None:
            rollouts[agent.id] = rolls
            present.append(agent)
    choices = [
        (agent.id,
         (ProfileKind.ACCEL, ProfileKind.CONST_VEL, ProfileKind.DECEL)
         if agent.id in interacting else (ProfileKind.CONST_VEL,))
        for agent in present
    ]
    dims = {a.id: VehicleDims(a.width, a.length) for a in present}
    check_pairs = [(p.agent_a, p.agent_b) for p in pairs
                   if p.agent_a in rollouts and p.agent_b in rollouts]
    candidates = []
    for combo in itertools.product(*(profiles for _, profiles in choices)):
        assignment = dict(zip((aid for aid, _ in choices), combo))
        collides = any(
            is_collision(rollouts[a][assignment[a]], rollouts[b][assignment[b]],
                         dims[a], dims[b], cfg.interp_factor)
            for a, b in check_pairs
        )
        if collides:
            continue
        speeds = []
        for aid, kind in assignment.items():
            xy = rollouts[aid][kind].xy
            step = np.hypot(*(np.diff(xy, axis=0).T))
            speeds.append(step.mean() / scene.dt)
        avg_speed = float(np.mean(speeds)) if speeds else 0.0
        order_key = tuple(PROFILE_ORDER[kind] for kind in combo)
        candidates.append((-avg_speed, order_key, assignment, avg_speed))
    if not candidates:
        raise NoFeasibleCombo(f"all profile combinations collide at frame {t}")
    candidates.sort(key=lambda c: (c[0], c[1]))
    top = candidates[:k]
    total = sum(c[3] for c in top)
    samples = []
    for _, _, assignment, avg_speed in top:
        p = avg_speed / total if total > 0 else 1.0 / len(top)
        trajs = {aid: rollouts[aid][kind].xy[1:] for aid, kind in assignment.items()}
        samples.append(JointSample(p=p, trajs=trajs))
    return JointPredictionSet(frame=t, samples=tuple(samples))
