"""Velocity-profile rollouts along ground-truth paths and the IHS search.

A rollout keeps an agent's recorded path and replaces only the speed
profile (constant acceleration, braking to a stop, or constant velocity),
subject to a longitudinal acceleration limit, a lateral acceleration limit
via path curvature, and a scene-wide speed cap. Enumerating the two
accelerate/decelerate orderings of a pair and discarding colliding ones
yields the set of feasible interaction classes per frame; the first frame
after which only one class remains feasible is the inevitable homotopy
state (IHS).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .collision import VehicleDims, is_collision
from .errors import DegenerateInterval, IndexOutOfRange, NoCollapse
from .filtering import CriticalPair
from .homotopy import HomotopyClass, classify_pair_windows, gt_mode_sequence
from .types import (
    Agent,
    EvalConfig,
    Scene,
    Trajectory,
    common_window,
    trajectory_kinematics,
)

_KAPPA_MAX = 1.0 / 0.5  # curvature clamp, 1/m (0.5 m minimum turn radius)
_PATH_DS = 0.25  # arc-length grid spacing for curvature and caps, metres
_SUBSTEPS = 5  # integration substeps per frame


class ProfileKind(enum.Enum):
    ACCEL = "accel"
    DECEL = "decel"
    CONST_VEL = "const_vel"


# deterministic tie-break order for profile combinations
PROFILE_ORDER = {ProfileKind.ACCEL: 0, ProfileKind.CONST_VEL: 1, ProfileKind.DECEL: 2}


@dataclass(frozen=True)
class SpeedProfile:
    kind: ProfileKind
    a_lon: float  # signed, m/s^2
    v_max: float
    v0: float


def speed_profile(kind: ProfileKind, v0: float, v_max: float, cfg: EvalConfig) -> SpeedProfile:
    a = {ProfileKind.ACCEL: cfg.a_lon_max,
         ProfileKind.DECEL: -cfg.a_lon_max,
         ProfileKind.CONST_VEL: 0.0}[kind]
    return SpeedProfile(kind=kind, a_lon=a, v_max=v_max, v0=min(v0, v_max))


@dataclass(frozen=True)
class InteractionTimeline:
    """Per-frame feasible classes and the IHS bracketing for one pair."""

    t: np.ndarray  # co-observed timestamps
    h_feas: tuple[frozenset, ...]  # per frame, indices 0..n-2
    h_gt: tuple[HomotopyClass, ...]
    collapse_idx: int
    final_idx: int
    start_idx: int
    h_gt_final: HomotopyClass

    @property
    def t_h_collapse(self) -> float:
        return float(self.t[self.collapse_idx])

    @property
    def t_h_final(self) -> float:
        return float(self.t[self.final_idx])

    @property
    def t_h_start(self) -> float:
        return float(self.t[self.start_idx])


def max_scene_speed(scene: Scene) -> float:
    """Maximum finite-difference speed over all agents and frames."""
    best = 0.0
    for agent in scene.agents:
        _, speeds = trajectory_kinematics(agent.trajectory)
        best = max(best, float(speeds.max()))
    return best


def _menger_curvature(p0: np.ndarray, p1: np.ndarray, p2: np.ndarray) -> float:
    """Reciprocal circumscribed-circle radius of three points."""
    a = np.hypot(*(p1 - p0))
    b = np.hypot(*(p2 - p1))
    c = np.hypot(*(p2 - p0))
    if a < 1e-9 or b < 1e-9 or c < 1e-9:
        return 0.0
    cross = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p1[1] - p0[1]) * (p2[0] - p0[0])
    return abs(2.0 * cross / (a * b * c))


class PathRollout:
    """Arc-length geometry of one agent's path from a start frame onward.

    The recorded polyline is extended beyond its last point by a straight
    line along the final heading, so accelerating rollouts never run out of
    path. Reusable across speed profiles for the same (agent, frame).
    """

    def __init__(self, traj: Trajectory, start_frame: int, extend_length: float,
                 cfg: EvalConfig):
        if not 0 <= start_frame < traj.n:
            raise IndexOutOfRange(f"start frame {start_frame} outside [0, {traj.n})")
        self.dt = traj.dt
        pts = traj.xy[start_frame:]
        # drop consecutive (near-)duplicate vertices
        keep = [0]
        for i in range(1, len(pts)):
            if np.hypot(*(pts[i] - pts[keep[-1]])) > 1e-9:
                keep.append(i)
        pts = pts[keep]
        if len(pts) >= 2:
            tail = pts[-1] - pts[-2]
            heading = np.arctan2(tail[1], tail[0])
        else:
            headings, _ = trajectory_kinematics(traj)
            heading = headings[start_frame]
        ext = pts[-1] + np.array([np.cos(heading), np.sin(heading)]) * max(extend_length, 1.0)
        verts = np.vstack([pts, ext])
        seg = np.hypot(*(np.diff(verts, axis=0).T))
        s_vert = np.concatenate([[0.0], np.cumsum(seg)])
        # curvature at the recorded vertices, linear in arc length elsewhere
        kappa_vert = np.zeros(len(verts))
        for i in range(1, len(pts) - 1):
            kappa_vert[i] = min(_menger_curvature(verts[i - 1], verts[i], verts[i + 1]),
                                _KAPPA_MAX)
        self._s_vert = s_vert
        self._verts = verts
        n_grid = max(int(s_vert[-1] / _PATH_DS) + 2, 2)
        self._s = np.linspace(0.0, s_vert[-1], n_grid)
        self._kappa = np.interp(self._s, s_vert, kappa_vert)
        self._cfg = cfg

    def position(self, s: np.ndarray) -> np.ndarray:
        s = np.clip(s, 0.0, self._s_vert[-1])
        x = np.interp(s, self._s_vert, self._verts[:, 0])
        y = np.interp(s, self._s_vert, self._verts[:, 1])
        return np.stack([x, y], axis=-1)

    def speed_cap(self, v_max: float) -> np.ndarray:
        """Curvature- and braking-aware speed limit along the arc grid."""
        with np.errstate(divide="ignore"):
            lat = np.sqrt(self._cfg.a_lat_max / np.maximum(self._kappa, 1e-12))
        cap = np.minimum(v_max, lat)
        ds = self._s[1] - self._s[0] if len(self._s) > 1 else _PATH_DS
        # backward pass: entering a low-cap region must be brakeable at a_lon_max
        for k in range(len(cap) - 2, -1, -1):
            cap[k] = min(cap[k], np.sqrt(cap[k + 1] ** 2 + 2.0 * self._cfg.a_lon_max * ds))
        return cap

    def roll(self, profile: SpeedProfile, n_steps: int,
             t0: float = 0.0) -> Trajectory:
        """Integrate the speed profile; positions sampled every dt, n_steps+1 samples."""
        dt = self.dt
        a, v0, v_max = profile.a_lon, profile.v0, profile.v_max
        cap = self.speed_cap(v_max)
        s_grid = self._s

        def v_des(t: float) -> float:
            return float(np.clip(v0 + a * t, 0.0, v_max))

        def s_des(t: float) -> float:
            # exact integral of the clamped linear profile
            if a > 0:
                t_star = (v_max - v0) / a
                if t <= t_star:
                    return v0 * t + 0.5 * a * t * t
                return v0 * t_star + 0.5 * a * t_star * t_star + v_max * (t - t_star)
            if a < 0:
                t_star = v0 / -a
                if t <= t_star:
                    return v0 * t + 0.5 * a * t * t
                return 0.5 * v0 * t_star
            return v0 * t

        h = dt / _SUBSTEPS
        s = 0.0
        out_s = np.empty(n_steps + 1)
        out_s[0] = 0.0
        for frame in range(1, n_steps + 1):
            for sub in range(_SUBSTEPS):
                t_a = (frame - 1) * dt + sub * h
                t_b = t_a + h
                ds_exact = s_des(t_b) - s_des(t_a)
                cap_here = np.interp([s, s + ds_exact], s_grid, cap)
                if v_des(t_a) <= cap_here[0] + 1e-12 and v_des(t_b) <= cap_here[1] + 1e-12:
                    s += ds_exact  # cap inactive: closed-form increment
                else:
                    va = min(v_des(t_a), float(cap_here[0]))
                    s_mid = s + va * h
                    vb = min(v_des(t_b), float(np.interp(s_mid, s_grid, cap)))
                    s += 0.5 * (va + vb) * h
            out_s[frame] = s
        xy = self.position(out_s)
        t = t0 + dt * np.arange(n_steps + 1)
        return Trajectory(t=t, xy=xy, dt=dt)


def rollout_trajectory(agent: Agent, start_frame: int, profile: SpeedProfile,
                       cfg: EvalConfig, n_steps: int | None = None) -> Trajectory:
    """Roll out one agent from a frame of its recorded trajectory."""
    traj = agent.trajectory
    if n_steps is None:
        n_steps = traj.n - 1 - start_frame
    extend = profile.v_max * (n_steps + 1) * traj.dt + 10.0
    path = PathRollout(traj, start_frame, extend, cfg)
    return path.roll(profile, n_steps, t0=float(traj.t[start_frame]))


def _pair_windows(scene: Scene, pair: CriticalPair):
    agent_a = scene.agent(pair.agent_a)
    agent_b = scene.agent(pair.agent_b)
    wa, wb, t = common_window(agent_a.trajectory, agent_b.trajectory)
    return agent_a, agent_b, wa, wb, t


def _feasible_set_from_paths(path_a: PathRollout, path_b: PathRollout,
                             v0a: float, v0b: float, v_max: float,
                             dims_a: VehicleDims, dims_b: VehicleDims,
                             n_steps: int, cfg: EvalConfig) -> frozenset:
    rolls = {}
    for kind in (ProfileKind.ACCEL, ProfileKind.DECEL):
        rolls[("a", kind)] = path_a.roll(speed_profile(kind, v0a, v_max, cfg), n_steps)
        rolls[("b", kind)] = path_b.roll(speed_profile(kind, v0b, v_max, cfg), n_steps)
    feasible = set()
    for ka, kb in ((ProfileKind.DECEL, ProfileKind.ACCEL),
                   (ProfileKind.ACCEL, ProfileKind.DECEL)):
        ra, rb = rolls[("a", ka)], rolls[("b", kb)]
        if not is_collision(ra, rb, dims_a, dims_b, cfg.interp_factor):
            feasible.add(classify_pair_windows(ra, rb, cfg.theta_hat))
    return frozenset(feasible)


def feasible_homotopy_set(scene: Scene, pair: CriticalPair, t: int,
                          cfg: EvalConfig) -> frozenset:
    """Feasible interaction classes at co-observed frame index ``t``."""
    agent_a, agent_b, wa, wb, times = _pair_windows(scene, pair)
    n_steps = wa.n - 1 - t
    if n_steps < 1:
        raise IndexOutOfRange(f"frame {t} leaves no rollout horizon")
    v_max = max_scene_speed(scene)
    _, speeds_a = trajectory_kinematics(wa)
    _, speeds_b = trajectory_kinematics(wb)
    extend = v_max * (n_steps + 1) * wa.dt + 10.0
    path_a = PathRollout(wa, t, extend, cfg)
    path_b = PathRollout(wb, t, extend, cfg)
    dims_a = VehicleDims(agent_a.width, agent_a.length)
    dims_b = VehicleDims(agent_b.width, agent_b.length)
    return _feasible_set_from_paths(path_a, path_b, float(speeds_a[t]), float(speeds_b[t]),
                                    v_max, dims_a, dims_b, n_steps, cfg)


def interaction_timeline(scene: Scene, pair: CriticalPair, cfg: EvalConfig) -> InteractionTimeline:
    """Feasible-class history, IHS frame and evaluation interval for a pair."""
    agent_a, agent_b, wa, wb, times = _pair_windows(scene, pair)
    n = wa.n
    v_max = max_scene_speed(scene)
    _, speeds_a = trajectory_kinematics(wa)
    _, speeds_b = trajectory_kinematics(wb)
    dims_a = VehicleDims(agent_a.width, agent_a.length)
    dims_b = VehicleDims(agent_b.width, agent_b.length)
    feas: list[frozenset] = []
    for i in range(n - 1):
        n_steps = n - 1 - i
        extend = v_max * (n_steps + 1) * wa.dt + 10.0
        path_a = PathRollout(wa, i, extend, cfg)
        path_b = PathRollout(wb, i, extend, cfg)
        feas.append(_feasible_set_from_paths(path_a, path_b,
                                             float(speeds_a[i]), float(speeds_b[i]),
                                             v_max, dims_a, dims_b, n_steps, cfg))
    sizes = np.array([len(f) for f in feas])
    # collapse: first frame after which exactly one class stays feasible;
    # flickering feasibility is resolved by requiring it to hold to the end
    collapse_idx = None
    for i in range(len(sizes)):
        if np.all(sizes[i:] == 1):
            collapse_idx = i
            break
    if collapse_idx is None:
        raise NoCollapse(
            f"pair ({pair.agent_a}, {pair.agent_b}): both classes feasible through the window"
        )
    two = np.flatnonzero(sizes == 2)
    if len(two) == 0:
        raise DegenerateInterval(
            f"pair ({pair.agent_a}, {pair.agent_b}): never two feasible classes"
        )
    final_idx = int(two[-1])
    horizon = cfg.horizon_frames(wa.dt)
    gt = gt_mode_sequence(wa, wb, horizon, cfg.theta_hat)
    h_gt_final = gt[final_idx]
    lo = max(0, final_idx - horizon)
    start_idx = final_idx
    for i in range(final_idx, lo - 1, -1):
        if gt[i] == h_gt_final:
            start_idx = i
        else:
            break
    return InteractionTimeline(t=times, h_feas=tuple(feas), h_gt=tuple(gt),
                               collapse_idx=collapse_idx, final_idx=final_idx,
                               start_idx=start_idx, h_gt_final=h_gt_final)
