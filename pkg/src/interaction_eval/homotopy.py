"""Winding angle between two trajectories and its interaction class.

The interaction class of an agent pair is read off the cumulative rotation
of the relative position vector: a clockwise rotation (negative winding)
means one agent passes behind the other, counterclockwise the reverse.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import LengthMismatch
from .types import Trajectory

_DEGENERATE_REL = 1e-9  # metres; below this the relative bearing is undefined


class HomotopyClass(enum.Enum):
    CW = "CW"
    CCW = "CCW"
    S = "S"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class WindingResult:
    delta_theta: float
    per_step: np.ndarray  # wrapped increments, each in (-pi, pi]


def _wrap_angle(x: np.ndarray) -> np.ndarray:
    """Wrap to (-pi, pi]."""
    w = (x + np.pi) % (2.0 * np.pi) - np.pi
    return np.where(w <= -np.pi, w + 2.0 * np.pi, w)


def winding_angle(ta: Trajectory, tb: Trajectory) -> WindingResult:
    """Cumulative wrapped change of the bearing of (position_A - position_B).

    Frames where the agents (near-)coincide contribute a zero increment and
    carry the last well-defined bearing forward.
    """
    if ta.n != tb.n:
        raise LengthMismatch(f"trajectory lengths differ: {ta.n} vs {tb.n}")
    rel = ta.xy - tb.xy
    norm = np.hypot(rel[:, 0], rel[:, 1])
    bearings = np.arctan2(rel[:, 1], rel[:, 0])
    defined = norm >= _DEGENERATE_REL
    if defined.all():
        steps = _wrap_angle(np.diff(bearings))
    else:
        steps = np.zeros(ta.n - 1)
        prev = bearings[0] if defined[0] else None
        for i in range(1, ta.n):
            if not defined[i]:
                continue  # bearing carries forward, zero increment
            if prev is not None:
                steps[i - 1] = _wrap_angle(np.asarray(bearings[i] - prev))
            prev = bearings[i]
    return WindingResult(delta_theta=float(np.sum(steps)), per_step=steps)


def homotopy_class(delta_theta: float, theta_hat: float = 0.0) -> HomotopyClass:
    """Map a winding angle to {CW, S, CCW}; theta_hat = 0 empties the S band."""
    if delta_theta < -theta_hat:
        return HomotopyClass.CW
    if delta_theta < theta_hat:
        return HomotopyClass.S
    return HomotopyClass.CCW


def classify_pair_windows(ta: Trajectory, tb: Trajectory, theta_hat: float = 0.0) -> HomotopyClass:
    """Winding-angle class of a time-aligned trajectory pair."""
    return homotopy_class(winding_angle(ta, tb).delta_theta, theta_hat)


def gt_mode_sequence(ta: Trajectory, tb: Trajectory, horizon_frames: int,
                     theta_hat: float = 0.0) -> list[HomotopyClass]:
    """Per-frame class of the ground-truth future segments.

    ``ta`` and ``tb`` must already be restricted to the co-observed window.
    At frame i the class is computed over frames [i, i + horizon] truncated
    to the recorded overlap; the final frame (a single sample) gets the class
    of a zero winding angle.
    """
    if ta.n != tb.n:
        raise LengthMismatch(f"trajectory lengths differ: {ta.n} vs {tb.n}")
    out = []
    for i in range(ta.n):
        stop = min(ta.n, i + horizon_frames + 1)
        if stop - i < 2:
            out.append(homotopy_class(0.0, theta_hat))
            continue
        seg_a = ta.slice_frames(i, stop)
        seg_b = tb.slice_frames(i, stop)
        out.append(classify_pair_windows(seg_a, seg_b, theta_hat))
    return out
