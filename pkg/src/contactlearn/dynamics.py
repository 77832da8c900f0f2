"""Stepping, rollouts, and forward sensitivity propagation.

The robot is a velocity-commanded kinematic point: commands are clamped to
velocity bounds, positions to the workspace box, and the realized velocity
(p_new - p)/dt is stored back into the state.  Scenario models supply the
contact physics through a small duck-typed protocol (step / measure /
measure_jacobian / contact_force_at), so this module never imports them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .core import ControlInput, RobotState, Trajectory

__all__ = [
    "DynamicsSpec",
    "integrate_robot",
    "step",
    "rollout",
    "rollout_with_sensitivity",
    "verify_trajectory",
]

# beyond this magnitude a state is declared numerically dead rather than
# waiting for inf/nan to appear
_DIVERGED = 1.0e6


@dataclass(frozen=True)
class DynamicsSpec:
    """Integration constants and robot limits for one scenario.

    workspace / velocity_bounds are (dof, 2) [lo, hi] boxes.  object_substeps
    subdivides dt for the free-body update where one exists (stiff ball
    contact); object_drag is a known viscous drag on that body.
    """

    workspace: np.ndarray
    velocity_bounds: np.ndarray
    dt: float = 0.02
    gravity: float = 9.81
    object_mass: Optional[float] = None
    object_substeps: int = 1
    object_drag: float = 0.0

    def __post_init__(self):
        ws = np.asarray(self.workspace, dtype=float).reshape(-1, 2)
        vb = np.asarray(self.velocity_bounds, dtype=float).reshape(-1, 2)
        if ws.shape != vb.shape:
            raise ValueError("workspace and velocity bounds must agree in dof")
        if np.any(ws[:, 0] >= ws[:, 1]) or np.any(vb[:, 0] >= vb[:, 1]):
            raise ValueError("bounds must satisfy lo < hi")
        if not (float(self.dt) > 0.0):
            raise ValueError("dt must be positive")
        if int(self.object_substeps) < 1:
            raise ValueError("object_substeps must be >= 1")
        object.__setattr__(self, "workspace", ws)
        object.__setattr__(self, "velocity_bounds", vb)
        object.__setattr__(self, "dt", float(self.dt))
        object.__setattr__(self, "gravity", float(self.gravity))
        object.__setattr__(self, "object_substeps", int(self.object_substeps))
        object.__setattr__(self, "object_drag", float(self.object_drag))

    @property
    def dof(self) -> int:
        return self.workspace.shape[0]


def integrate_robot(dyn: DynamicsSpec, position: np.ndarray, command: np.ndarray):
    """Clamped kinematic update; returns (p_new, realized velocity)."""
    u = np.clip(command, dyn.velocity_bounds[:, 0], dyn.velocity_bounds[:, 1])
    p_new = np.clip(position + dyn.dt * u, dyn.workspace[:, 0], dyn.workspace[:, 1])
    v_real = (p_new - position) / dyn.dt
    return p_new, v_real


def _check_alive(x: RobotState):
    vals = [x.position, x.velocity]
    if x.obj is not None:
        vals += [x.obj.position, x.obj.velocity]
    for v in vals:
        if not np.all(np.isfinite(v)) or np.any(np.abs(v) > _DIVERGED):
            raise ValueError("diverged rollout")


def step(dyn: DynamicsSpec, scenario, x: RobotState, u: ControlInput, theta):
    """One dt transition.  Returns (x_next, contact force at the departed state)."""
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    x_next, lam_pre, _ = scenario.model.step(dyn, x, u.command, theta, None)
    _check_alive(x_next)
    return x_next, lam_pre


def rollout(
    dyn: DynamicsSpec,
    scenario,
    x0: RobotState,
    controls: Sequence[ControlInput],
    theta,
) -> Trajectory:
    """Roll the scenario forward under a control sequence.

    Raises ValueError("diverged rollout") if any state leaves the finite
    regime (e.g. under-resolved stiff contact).
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    states = [x0]
    contacts = []
    for u in controls:
        x_next, lam, _ = scenario.model.step(dyn, states[-1], u.command, theta, None)
        _check_alive(x_next)
        states.append(x_next)
        contacts.append(lam)
    return Trajectory(tuple(states), tuple(contacts), dyn.dt)


def rollout_with_sensitivity(
    dyn: DynamicsSpec,
    scenario,
    x0: RobotState,
    controls: Sequence[ControlInput],
    theta,
) -> Tuple[Trajectory, np.ndarray, np.ndarray]:
    """Rollout plus predicted measurements and their parameter Jacobians.

    Returns (trajectory, Y, G) with Y of shape (T, channels) holding the
    noiseless sensor prediction at states 1..T and G of shape
    (T, channels, d) the chain-rule derivative of each prediction, combining
    the direct parameter dependence of the force law with the propagated
    state sensitivity of any free body.
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    model = scenario.model
    sens = model.init_sens(theta)
    states = [x0]
    contacts = []
    ys = []
    gs = []
    x = x0
    for u in controls:
        x, lam, sens = model.step(dyn, x, u.command, theta, sens)
        _check_alive(x)
        states.append(x)
        contacts.append(lam)
        ys.append(model.measure(x, theta))
        gs.append(model.measure_jacobian(x, sens, theta))
    traj = Trajectory(tuple(states), tuple(contacts), dyn.dt)
    return traj, np.array(ys), np.array(gs)


def verify_trajectory(scenario, traj: Trajectory, theta) -> float:
    """Recompute contact forces at the stored states; return max abs deviation.

    Zero (to roundoff) for a trajectory produced by rollout() under the same
    parameters — used as a self-consistency probe in tests and demos.
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    worst = 0.0
    for x, lam in zip(traj.states[:-1], traj.contacts):
        ref = scenario.model.contact_force_at(x, theta)
        worst = max(
            worst,
            abs(ref.lambda_n - lam.lambda_n),
            abs(ref.lambda_t - lam.lambda_t),
        )
    return float(worst)
