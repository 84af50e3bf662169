"""Compare a constant-velocity predictor against the path-following oracle.

The scene is an asymmetric crossing (6 m/s eastbound vs 4.5 m/s northbound),
so both passing orders stay physically reachable for several seconds. The
constant-velocity baseline emits a single joint sample and therefore covers
only one interaction class; the oracle enumerates speed profiles along each
ground-truth path, rejects colliding combinations, and keeps the top-K joint
rollouts -- enough to cover both classes until the outcome is truly decided.

Run:  python3 demos/baseline_comparison.py
"""

import numpy as np

from interaction_eval import Agent, EvalConfig, Scene, Trajectory, evaluate_scene, validate_scene


def straight(start, vel, n, dt):
    t = dt * np.arange(n)
    xy = np.asarray(start, float) + np.outer(t, vel)
    return Trajectory(t=t, xy=xy, dt=dt)


def fmt_dt(value):
    if value is None:
        return "from start"
    if value == 0.0:
        return "only at the final frame"
    return f"{value:.1f}s before the IHS"


def main():
    dt, n = 0.5, 32
    scene = validate_scene(Scene(
        scene_id="asymmetric-crossing",
        dt=dt,
        agents=(
            Agent("a", width=2.0, length=4.5,
                  trajectory=straight((-40, 0), (6.0, 0), n, dt)),
            Agent("b", width=2.0, length=4.5,
                  trajectory=straight((0, -48), (0, 4.5), n, dt)),
        ),
    ))
    cfg = EvalConfig()

    for name in ("cv", "oracle"):
        result = evaluate_scene(scene, cfg, baseline=name)
        m = result.pairs[0].record.metrics
        print(f"== {name} ==")
        print(f"  mode collapse rate  : {100 * m.collapse_rate:.1f}%")
        print(f"  most-likely correct : {fmt_dt(m.dt_correct)}")
        print(f"  gt mode in pred set : {fmt_dt(m.dt_covered)}")
        print(f"  consistent ML mode  : {m.consistent}")
        print()

    print("Both predictors nail the eventually-correct passing order, but only")
    print("the oracle keeps samples in both classes while both remain feasible:")
    print("its collapse rate is 0% where the single-sample baseline sits at 100%.")


if __name__ == "__main__":
    main()
