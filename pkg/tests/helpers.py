"""Shared test fixtures: analytically tractable sensor models.

LinearSensorModel gives a linear-Gaussian problem with a closed-form
posterior, so solver and information-matrix code can be checked against
exact algebra.  RampSensorModel has a one-sided flat region in its
likelihood, exercising the plateau-escape path of the solver.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from contactlearn.contact import ContactForce
from contactlearn.core import (
    ControlInput,
    Experiment,
    Measurement,
    ParamBelief,
    ParamVector,
    RobotState,
    substream,
)
from contactlearn.dynamics import DynamicsSpec, rollout
from contactlearn.scenarios import ScenarioSpec


def _counter(x: RobotState) -> int:
    return int(round(float(x.position[0])))


@dataclass(frozen=True)
class LinearSensorModel:
    """y_t = design[t] @ theta; the state is just a step counter."""

    design: np.ndarray  # (T+1, channels, d)
    param_names: Tuple[str, ...]
    channel_names: Tuple[str, ...]

    def initial_state(self, theta) -> RobotState:
        return RobotState([0.0], [0.0])

    def init_sens(self, theta):
        return None

    def step(self, dyn, x, u_cmd, theta, sens):
        nxt = RobotState([x.position[0] + 1.0], [0.0])
        return nxt, self.contact_force_at(x, theta), sens

    def measure(self, x: RobotState, theta) -> np.ndarray:
        return self.design[_counter(x)] @ np.atleast_1d(theta)

    def measure_jacobian(self, x: RobotState, sens, theta) -> np.ndarray:
        return self.design[_counter(x)].copy()

    def contact_force_at(self, x: RobotState, theta) -> ContactForce:
        return ContactForce(0.0, 0.0)


@dataclass(frozen=True)
class RampSensorModel:
    """y = gain * max(0, theta - knee): constant, exactly flat below the knee."""

    knee: float = 0.5
    gain: float = 5.0
    param_names: Tuple[str, ...] = ("level",)
    channel_names: Tuple[str, ...] = ("out",)

    def initial_state(self, theta) -> RobotState:
        return RobotState([0.0], [0.0])

    def init_sens(self, theta):
        return None

    def step(self, dyn, x, u_cmd, theta, sens):
        nxt = RobotState([x.position[0] + 1.0], [0.0])
        return nxt, ContactForce(0.0, 0.0), sens

    def measure(self, x: RobotState, theta) -> np.ndarray:
        t = float(np.atleast_1d(theta)[0])
        return np.array([self.gain * max(0.0, t - self.knee)])

    def measure_jacobian(self, x: RobotState, sens, theta) -> np.ndarray:
        t = float(np.atleast_1d(theta)[0])
        return np.array([[self.gain if t - self.knee > 0.0 else 0.0]])

    def contact_force_at(self, x: RobotState, theta) -> ContactForce:
        return ContactForce(0.0, 0.0)


def counter_dynamics(dof: int = 1) -> DynamicsSpec:
    return DynamicsSpec(
        workspace=[[0.0, 1.0e6]] * dof, velocity_bounds=[[-1.0, 1.0]] * dof, dt=0.02
    )


def make_linear_problem(
    seed: int,
    horizon: int = 12,
    d: int = 2,
    channels: int = 2,
    noise_std: float = 0.3,
    prior_var: float = 4.0,
):
    """Random linear-Gaussian setup plus its exact posterior.

    Returns (scenario, experiment, posterior_mean, posterior_cov).
    """
    rng = substream(seed, 900)
    design = rng.normal(0.0, 1.0, (horizon + 1, channels, d))
    names = tuple(f"p{j}" for j in range(d))
    chans = tuple(f"c{i}" for i in range(channels))
    model = LinearSensorModel(design, names, chans)
    theta_true = rng.normal(0.0, 1.0, d)
    mu0 = rng.normal(0.0, 1.0, d)
    support = np.array([[-50.0, 50.0]] * d)
    prior = ParamBelief(ParamVector(mu0, names), prior_var * np.eye(d), support)
    scenario = ScenarioSpec(
        "linear", model, counter_dynamics(), ParamVector(theta_true, names), prior, noise_std
    )

    controls = tuple(ControlInput([0.0]) for _ in range(horizon))
    traj = rollout(scenario.dynamics, scenario, model.initial_state(theta_true), controls, theta_true)
    meas = tuple(
        Measurement(design[t] @ theta_true + rng.normal(0.0, noise_std, channels))
        for t in range(1, horizon + 1)
    )
    experiment = Experiment(traj, controls, meas, scenario.noise_std)

    r_inv = np.eye(channels) / noise_std**2
    p0 = np.linalg.inv(prior.covariance)
    info = p0.copy()
    lead = p0 @ mu0
    for t in range(1, horizon + 1):
        info = info + design[t].T @ r_inv @ design[t]
        lead = lead + design[t].T @ r_inv @ meas[t - 1].forces
    post_cov = np.linalg.inv(info)
    post_mean = post_cov @ lead
    return scenario, experiment, post_mean, post_cov
