import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from interaction_eval import (
    HomotopyClass,
    Trajectory,
    gt_mode_sequence,
    homotopy_class,
    winding_angle,
)

from conftest import circle_traj, straight_traj


def random_walk_pair(rng, n):
    dt = 0.5
    t = dt * np.arange(n)
    a = np.cumsum(rng.normal(0.0, 1.0, (n, 2)), axis=0)
    b = 10.0 + np.cumsum(rng.normal(0.0, 1.0, (n, 2)), axis=0)
    return (Trajectory(t=t, xy=a, dt=dt), Trajectory(t=t, xy=b, dt=dt))


class TestWindingAngle:
    def test_full_ccw_loop(self):
        """A orbits B once counter-clockwise: total winding is +2*pi."""
        n = 73
        ta = circle_traj(5.0, 2.0 * np.pi / ((n - 1) * 0.5), n)
        tb = straight_traj((0, 0), (0, 0), n)
        res = winding_angle(ta, tb)
        assert res.delta_theta == pytest.approx(2.0 * np.pi, abs=1e-9)

    def test_full_cw_loop(self):
        n = 73
        ta = circle_traj(5.0, -2.0 * np.pi / ((n - 1) * 0.5), n)
        tb = straight_traj((0, 0), (0, 0), n)
        res = winding_angle(ta, tb)
        assert res.delta_theta == pytest.approx(-2.0 * np.pi, abs=1e-9)

    def test_per_step_sums_to_total(self):
        rng = np.random.default_rng(3)
        ta, tb = random_walk_pair(rng, 40)
        res = winding_angle(ta, tb)
        assert res.delta_theta == pytest.approx(res.per_step.sum(), abs=1e-12)
        assert np.all(np.abs(res.per_step) <= np.pi)

    def test_concatenation_identity(self):
        rng = np.random.default_rng(4)
        ta, tb = random_walk_pair(rng, 50)
        whole = winding_angle(ta, tb).delta_theta
        first = winding_angle(ta.slice_frames(0, 25), tb.slice_frames(0, 25))
        second = winding_angle(ta.slice_frames(24, 50), tb.slice_frames(24, 50))
        assert whole == pytest.approx(first.delta_theta + second.delta_theta, abs=1e-12)

    def test_mirror_flip_negates(self):
        """Reflecting both paths about the x-axis reverses the winding sign."""
        rng = np.random.default_rng(5)
        ta, tb = random_walk_pair(rng, 50)
        flip = np.array([1.0, -1.0])
        fa = Trajectory(t=ta.t, xy=ta.xy * flip, dt=ta.dt)
        fb = Trajectory(t=tb.t, xy=tb.xy * flip, dt=tb.dt)
        assert winding_angle(fa, fb).delta_theta == pytest.approx(
            -winding_angle(ta, tb).delta_theta, abs=1e-12
        )

    def test_swap_invariance(self):
        """Swapping the two agents negates the relative vector, which leaves
        the rotation sense of the bearing unchanged."""
        rng = np.random.default_rng(6)
        ta, tb = random_walk_pair(rng, 50)
        assert winding_angle(tb, ta).delta_theta == pytest.approx(
            winding_angle(ta, tb).delta_theta, abs=1e-12
        )

    def test_coincident_frames_skipped(self):
        xy_a = np.array([[0, 0], [1, 0], [2, 0], [3, 0]], dtype=float)
        xy_b = np.array([[0, -1], [1, 0], [2, -1], [3, -1]], dtype=float)
        t = 0.5 * np.arange(4)
        res = winding_angle(
            Trajectory(t=t, xy=xy_a, dt=0.5), Trajectory(t=t, xy=xy_b, dt=0.5)
        )
        assert np.isfinite(res.delta_theta)
        assert res.per_step[1] == 0.0

    @given(st.integers(min_value=0, max_value=10_000))
    @settings(max_examples=50, deadline=None)
    def test_step_magnitude_bounded(self, seed):
        rng = np.random.default_rng(seed)
        ta, tb = random_walk_pair(rng, 20)
        res = winding_angle(ta, tb)
        assert np.all(np.abs(res.per_step) <= np.pi + 1e-12)


class TestClassification:
    def test_zero_threshold_empties_static(self):
        assert homotopy_class(0.3, 0.0) is HomotopyClass.CCW
        assert homotopy_class(-0.3, 0.0) is HomotopyClass.CW

    def test_zero_winding_is_ccw(self):
        assert homotopy_class(0.0, 0.0) is HomotopyClass.CCW

    def test_positive_threshold_creates_static(self):
        assert homotopy_class(0.3, 0.5) is HomotopyClass.S
        assert homotopy_class(-0.3, 0.5) is HomotopyClass.S
        assert homotopy_class(0.5, 0.5) is HomotopyClass.CCW
        assert homotopy_class(-0.6, 0.5) is HomotopyClass.CW

    def test_passing_in_front_is_ccw_for_yielder(self):
        """B crosses in front of a stopped A: the pair (A, B) winds CCW."""
        n = 20
        ta = straight_traj((-5, 0), (0, 0), n)
        tb = straight_traj((0, -5), (0, 1), n)
        res = winding_angle(ta, tb)
        assert homotopy_class(res.delta_theta, 0.0) is HomotopyClass.CCW

    def test_crossing_first_is_cw(self):
        """A clears the conflict point before B arrives: class CW."""
        n = 30
        ta = straight_traj((-10, 0), (6, 0), n)
        tb = straight_traj((0, -22), (0, 6), n)
        res = winding_angle(ta, tb)
        assert homotopy_class(res.delta_theta, 0.0) is HomotopyClass.CW


class TestModeSequence:
    def test_sequence_length_and_tail(self):
        n = 30
        ta = straight_traj((-40, 0), (6, 0), n)
        tb = straight_traj((0, -52), (0, 6), n)
        seq = gt_mode_sequence(ta, tb, horizon_frames=12, theta_hat=0.0)
        assert len(seq) == n
        # Final frame has a single-sample future: zero winding, class CCW.
        assert seq[-1] is HomotopyClass.CCW

    def test_truncated_horizon_uses_future_only(self):
        n = 40
        ta = straight_traj((-40, 0), (6, 0), n)
        tb = straight_traj((0, -52), (0, 6), n)
        seq_full = gt_mode_sequence(ta, tb, horizon_frames=n, theta_hat=0.0)
        seq_short = gt_mode_sequence(ta, tb, horizon_frames=4, theta_hat=0.0)
        # With the full horizon the crossing dominates early frames.
        assert seq_full[0] is HomotopyClass.CW
        # A short horizon far before the crossing sees almost no rotation.
        assert len(seq_short) == n
