"""Information-seeking experiment planning by predictive sampling.

Candidate control tapes are cubic Hermite splines over a few knots per axis.
Each planning call scores the nominal plan plus N Gaussian perturbations of
its knots by rolling the current belief mode forward and evaluating

    score = psi(F_predicted) - cost(trajectory, controls),

then keeps the argmax (first-found on ties).  The cost is a small control
effort plus a penalty for hugging the workspace boundary; both are dominated
by the information term whenever informative contact is reachable, so they
only break plateaus and discourage aimless clamping.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .core import ControlInput, RobotState, Trajectory
from .dynamics import DynamicsSpec, rollout
from .fisher import FisherEngine, InfoMatrix, fim_rollout, psi

__all__ = [
    "PlannerConfig",
    "ControlPlan",
    "spline_eval",
    "controls_from_plan",
    "trajectory_cost",
    "plan_experiment",
    "PlanResult",
]


@dataclass(frozen=True)
class PlannerConfig:
    horizon: int = 10
    num_samples: int = 10
    num_knots: int = 4
    sample_std: float = 1.0
    metric: str = "trace"
    effort_weight: float = 1.0e-3
    boundary_weight: float = 1.0
    boundary_margin_frac: float = 0.05  # margin per axis = frac * workspace width

    def __post_init__(self):
        if self.horizon < 1 or self.num_samples < 1 or self.num_knots < 2:
            raise ValueError("planner needs horizon >= 1, samples >= 1, knots >= 2")
        if not (float(self.sample_std) > 0.0):
            raise ValueError("sampling spread must be positive")


@dataclass(frozen=True)
class ControlPlan:
    """Knot matrix (num_knots, dof) defining one spline control tape."""

    knots: np.ndarray
    horizon: int

    def __post_init__(self):
        k = np.atleast_2d(np.asarray(self.knots, dtype=float))
        if k.shape[0] < 2:
            raise ValueError("control plan needs at least two knots")
        k.setflags(write=False)
        object.__setattr__(self, "knots", k)
        object.__setattr__(self, "horizon", int(self.horizon))


def spline_eval(plan: ControlPlan, t: float) -> np.ndarray:
    """Cubic Hermite interpolation of the knots at step time t in [0, horizon-1].

    Tangents are centered differences (one-sided at the ends), in knot-index
    units.  Constant knots reproduce the constant exactly; two knots give the
    straight line between them.
    """
    k = plan.knots
    nk = k.shape[0]
    if plan.horizon <= 1:
        return k[0].copy()
    s = float(t) * (nk - 1) / (plan.horizon - 1)
    s = min(max(s, 0.0), float(nk - 1))
    i = min(int(np.floor(s)), nk - 2)
    u = s - i

    def tangent(j):
        if j == 0:
            return k[1] - k[0]
        if j == nk - 1:
            return k[nk - 1] - k[nk - 2]
        return 0.5 * (k[j + 1] - k[j - 1])

    h00 = 2 * u**3 - 3 * u**2 + 1
    h10 = u**3 - 2 * u**2 + u
    h01 = -2 * u**3 + 3 * u**2
    h11 = u**3 - u**2
    return h00 * k[i] + h10 * tangent(i) + h01 * k[i + 1] + h11 * tangent(i + 1)


def controls_from_plan(plan: ControlPlan, dyn: DynamicsSpec) -> Tuple[ControlInput, ...]:
    """Sample the spline at integer steps, clamped to the velocity bounds."""
    lo, hi = dyn.velocity_bounds[:, 0], dyn.velocity_bounds[:, 1]
    return tuple(
        ControlInput(np.clip(spline_eval(plan, t), lo, hi)) for t in range(plan.horizon)
    )


def trajectory_cost(
    traj: Trajectory, controls: Sequence[ControlInput], dyn: DynamicsSpec, cfg: PlannerConfig
) -> float:
    """Control effort plus workspace-boundary proximity penalty."""
    effort = sum(float(u.command @ u.command) for u in controls)
    ws = dyn.workspace
    margin = cfg.boundary_margin_frac * (ws[:, 1] - ws[:, 0])
    boundary = 0.0
    for x in traj.states[1:]:
        dist = np.minimum(x.position - ws[:, 0], ws[:, 1] - x.position)
        pen = np.maximum(0.0, 1.0 - dist / margin)
        boundary += float(pen @ pen)
    return cfg.effort_weight * effort + cfg.boundary_weight * boundary


@dataclass(frozen=True)
class PlanResult:
    plan: ControlPlan
    controls: Tuple[ControlInput, ...]
    predicted_trajectory: Trajectory
    predicted_info: InfoMatrix
    score: float
    n_feasible: int


def plan_experiment(
    scenario,
    x0: RobotState,
    belief,
    engine: FisherEngine,
    cfg: PlannerConfig,
    rng: np.random.Generator,
    nominal: Optional[ControlPlan] = None,
) -> PlanResult:
    """Pick the most informative feasible control tape from sampled candidates.

    Rollouts use the belief mode as the model parameters.  Candidates whose
    rollout diverges are skipped; if every candidate diverges the call raises
    RuntimeError("planning failed").
    """
    dyn = scenario.dynamics
    dof = dyn.dof
    base = (
        nominal.knots
        if nominal is not None and nominal.knots.shape == (cfg.num_knots, dof)
        else np.zeros((cfg.num_knots, dof))
    )
    noise = rng.normal(0.0, cfg.sample_std, size=(cfg.num_samples, cfg.num_knots, dof))
    candidates = [base] + [base + noise[i] for i in range(cfg.num_samples)]

    theta = belief.mode.values
    best = None
    n_feasible = 0
    for knots in candidates:
        plan = ControlPlan(knots, cfg.horizon)
        controls = controls_from_plan(plan, dyn)
        try:
            traj = rollout(dyn, scenario, x0, controls, theta)
            info = fim_rollout(engine, dyn, scenario, x0, controls, theta)
        except ValueError:
            continue
        n_feasible += 1
        score = psi(info, cfg.metric) - trajectory_cost(traj, controls, dyn, cfg)
        if best is None or score > best[0]:
            best = (score, plan, controls, traj, info)
    if best is None:
        raise RuntimeError("planning failed")
    score, plan, controls, traj, info = best
    return PlanResult(plan, controls, traj, info, score, n_feasible)
