"""Core data types: trajectories, agents, scenes, predictions and config.

All types are immutable after construction and all functions are pure, so
scenes can be shared across threads and evaluated in parallel.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .errors import (
    ConfigError,
    DuplicateAgentId,
    IndexOutOfRange,
    NonFiniteCoordinate,
    NonUniformSampling,
    SceneValidationError,
    ShortTrajectory,
)

_TIME_ATOL = 1e-6  # absolute slack on timestamp grid comparisons, seconds
_DEGENERATE_DISP = 1e-9  # metres; below this a displacement has no heading


@dataclass(frozen=True)
class Trajectory:
    """A uniformly sampled planar trajectory.

    ``t`` has shape (N,), ``xy`` has shape (N, 2); both are read-only numpy
    arrays. ``dt`` is the constant frame period in seconds.
    """

    t: np.ndarray
    xy: np.ndarray
    dt: float

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        xy = np.asarray(self.xy, dtype=float)
        t.setflags(write=False)
        xy.setflags(write=False)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "xy", xy)

    @property
    def n(self) -> int:
        return len(self.t)

    @classmethod
    def from_samples(cls, samples: Sequence[tuple[float, float, float]],
                     dt: float | None = None) -> "Trajectory":
        """Build from an ordered sequence of (t, x, y) tuples."""
        arr = np.asarray(samples, dtype=float)
        t, xy = arr[:, 0], arr[:, 1:3]
        if dt is None:
            dt = float(t[1] - t[0]) if len(t) > 1 else 0.0
        return cls(t=t, xy=xy, dt=float(dt))

    def slice_frames(self, start: int, stop: int) -> "Trajectory":
        return Trajectory(t=self.t[start:stop], xy=self.xy[start:stop], dt=self.dt)


@dataclass(frozen=True)
class Agent:
    """A rectangular road user with its recorded trajectory."""

    id: str
    width: float
    length: float
    trajectory: Trajectory

    @property
    def disk_radius(self) -> float:
        return self.width / 2.0


@dataclass(frozen=True)
class Scene:
    scene_id: str
    dt: float
    agents: tuple[Agent, ...]

    def __post_init__(self):
        object.__setattr__(self, "agents", tuple(self.agents))

    def agent(self, agent_id: str) -> Agent:
        for a in self.agents:
            if a.id == agent_id:
                return a
        from .errors import UnknownAgent

        raise UnknownAgent(agent_id)

    @property
    def agent_ids(self) -> list[str]:
        return [a.id for a in self.agents]


@dataclass(frozen=True)
class JointSample:
    """One joint future: a probability and a trajectory per agent.

    ``trajs`` maps agent id to an (H, 2) array of future positions.
    """

    p: float
    trajs: dict[str, np.ndarray]


@dataclass(frozen=True)
class JointPredictionSet:
    """K probability-ordered joint predictions issued at one frame."""

    frame: int
    samples: tuple[JointSample, ...]

    def __post_init__(self):
        object.__setattr__(self, "samples", tuple(self.samples))

    @property
    def k(self) -> int:
        return len(self.samples)

    @property
    def ml(self) -> JointSample:
        """The most likely joint sample (index 0 by construction)."""
        return self.samples[0]

    def validate(self) -> "JointPredictionSet":
        probs = [s.p for s in self.samples]
        if any(b > a + 1e-9 for a, b in zip(probs, probs[1:])):
            raise ConfigError(f"frame {self.frame}: samples not ordered by probability")
        if sum(probs) > 1.0 + 1e-6:
            raise ConfigError(f"frame {self.frame}: probabilities sum to {sum(probs)}")
        ids = set(self.samples[0].trajs)
        for s in self.samples[1:]:
            if set(s.trajs) != ids:
                raise ConfigError(f"frame {self.frame}: samples disagree on agent ids")
        return self


@dataclass(frozen=True)
class EvalConfig:
    """Evaluation thresholds and limits (SI units)."""

    d_collision: float = 1.5
    dt_ps_max: float = 6.0
    a_lon_max: float = 1.47
    a_lat_max: float = 1.18
    t_p: float = 6.0
    theta_hat: float = 0.0
    interp_factor: int = 4
    t_min: float | None = None  # default: first co-observed timestamp per pair

    def __post_init__(self):
        for name in ("d_collision", "dt_ps_max", "a_lon_max", "a_lat_max", "t_p"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be > 0")
        if self.theta_hat < 0:
            raise ConfigError("theta_hat must be >= 0")
        if int(self.interp_factor) != self.interp_factor or self.interp_factor < 1:
            raise ConfigError("interp_factor must be a positive integer")

    def horizon_frames(self, dt: float) -> int:
        steps = self.t_p / dt
        if abs(steps - round(steps)) > 1e-6:
            raise ConfigError(f"prediction horizon {self.t_p} is not a multiple of dt={dt}")
        return int(round(steps))

    def with_(self, **kwargs) -> "EvalConfig":
        return replace(self, **kwargs)


def validate_scene(scene: Scene) -> Scene:
    """Check all scene invariants; returns the scene unchanged if they hold."""
    if not scene.agents:
        raise ShortTrajectory(f"scene {scene.scene_id}: contains no agents")
    seen: set[str] = set()
    for agent in scene.agents:
        if agent.id in seen:
            raise DuplicateAgentId(f"scene {scene.scene_id}: duplicate agent id {agent.id!r}")
        seen.add(agent.id)
        traj = agent.trajectory
        if traj.n < 2:
            raise ShortTrajectory(f"agent {agent.id}: {traj.n} sample(s), need at least 2")
        if not np.all(np.isfinite(traj.xy)) or not np.all(np.isfinite(traj.t)):
            bad = int(np.argmax(~np.all(np.isfinite(traj.xy), axis=1)))
            raise NonFiniteCoordinate(f"agent {agent.id}: non-finite value at sample {bad}")
        spacing = np.diff(traj.t)
        if traj.dt <= 0 or np.any(spacing <= 0):
            raise NonUniformSampling(f"agent {agent.id}: timestamps not strictly increasing")
        if not np.allclose(spacing, traj.dt, atol=_TIME_ATOL, rtol=0):
            bad = int(np.argmax(np.abs(spacing - traj.dt) > _TIME_ATOL))
            raise NonUniformSampling(
                f"agent {agent.id}: spacing {spacing[bad]:.6g} at sample {bad}, expected {traj.dt:.6g}"
            )
        if abs(traj.dt - scene.dt) > _TIME_ATOL:
            raise NonUniformSampling(
                f"agent {agent.id}: dt {traj.dt} differs from scene dt {scene.dt}"
            )
        if agent.width <= 0 or agent.length < agent.width:
            raise SceneValidationError(
                f"agent {agent.id}: invalid dimensions width={agent.width}, length={agent.length}"
            )
    return scene


def resample_trajectory(traj: Trajectory, factor: int) -> Trajectory:
    """Linearly interpolate to (N-1)*factor + 1 samples.

    Original samples are preserved exactly; factor 1 returns the input.
    """
    if factor < 1 or int(factor) != factor:
        raise ConfigError("resample factor must be a positive integer")
    if factor == 1:
        return traj
    n = traj.n
    m = (n - 1) * factor + 1
    # fractional original index of every new sample
    u = np.arange(m) / factor
    i0 = np.minimum(u.astype(int), n - 2)
    frac = (u - i0)[:, None]
    xy = traj.xy[i0] * (1.0 - frac) + traj.xy[i0 + 1] * frac
    t = traj.t[i0] * (1.0 - frac[:, 0]) + traj.t[i0 + 1] * frac[:, 0]
    # pin originals exactly (no fp drift at integer indices)
    xy[::factor] = traj.xy
    t[::factor] = traj.t
    return Trajectory(t=t, xy=xy, dt=traj.dt / factor)


def trajectory_kinematics(traj: Trajectory) -> tuple[np.ndarray, np.ndarray]:
    """Per-sample (headings, speeds) by finite differences.

    Central differences at interior samples, one-sided at the endpoints.
    Degenerate displacements (norm < 1e-9 m) give speed 0 and carry the last
    well-defined heading forward (0 before any heading is defined).
    """
    pos = traj.xy
    n = traj.n
    if n < 2:
        raise ShortTrajectory("kinematics need at least 2 samples")
    disp = np.empty_like(pos)
    disp[0] = pos[1] - pos[0]
    disp[-1] = pos[-1] - pos[-2]
    disp[1:-1] = (pos[2:] - pos[:-2]) / 2.0
    norm = np.hypot(disp[:, 0], disp[:, 1])
    speeds = np.where(norm < _DEGENERATE_DISP, 0.0, norm / traj.dt)
    headings = np.zeros(n)
    last = 0.0
    for i in range(n):
        if norm[i] >= _DEGENERATE_DISP:
            last = float(np.arctan2(disp[i, 1], disp[i, 0]))
        headings[i] = last
    return headings, speeds


def heading_and_speed(traj: Trajectory, i: int) -> tuple[float, float]:
    """Heading (rad) and speed (m/s) of one sample; see trajectory_kinematics."""
    if not 0 <= i < traj.n:
        raise IndexOutOfRange(f"sample {i} outside [0, {traj.n})")
    headings, speeds = trajectory_kinematics(traj)
    return float(headings[i]), float(speeds[i])


def common_window(a: Trajectory, b: Trajectory) -> tuple[Trajectory, Trajectory, np.ndarray]:
    """Restrict two same-dt trajectories to their co-observed time window.

    Returns the two sliced trajectories plus the shared timestamp vector.
    """
    from .errors import EmptyOverlap

    t0 = max(a.t[0], b.t[0])
    t1 = min(a.t[-1], b.t[-1])
    if t1 < t0 - _TIME_ATOL:
        raise EmptyOverlap("no common observation window")
    ia = int(round((t0 - a.t[0]) / a.dt))
    ib = int(round((t0 - b.t[0]) / b.dt))
    count = int(round((t1 - t0) / a.dt)) + 1
    sa = a.slice_frames(ia, ia + count)
    sb = b.slice_frames(ib, ib + count)
    if not np.allclose(sa.t, sb.t, atol=_TIME_ATOL, rtol=0):
        raise EmptyOverlap("agents are not sampled on a common time grid")
    return sa, sb, sa.t
