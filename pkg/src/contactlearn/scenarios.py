"""The four contact interaction setups and their physics models.

Each model owns one designated contact pair and implements the protocol the
rollout machinery consumes:

    initial_state(theta)                      -> RobotState
    init_sens(theta)                          -> opaque sensitivity carrier
    step(dyn, x, u_cmd, theta, sens)          -> (x_next, ContactForce at x, sens')
    measure(x, theta)                         -> (channels,) force reading
    measure_jacobian(x, sens, theta)          -> (channels, d) d y / d theta
    contact_force_at(x, theta)                -> ContactForce

Unknown parameters per setup: hefting estimates the object mass from the
normal force felt while lifting a ball; rubbing estimates the friction
coefficient of a wall; pinching estimates grip stiffness and damping;
contouring estimates the length and width of a box traced by the end
effector.  Geometry is always known — only material/inertial parameters are
uncertain.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional, Tuple

import numpy as np

from .contact import (
    Box2D,
    ContactForce,
    ContactParams,
    ContactState,
    HalfSpace,
    contact_force,
    contact_force_grad,
    contact_state_from,
)
from .core import Measurement, ObjectState, ParamBelief, ParamVector, RobotState
from .dynamics import DynamicsSpec, integrate_robot

__all__ = [
    "KINDS",
    "HeftingModel",
    "RubbingModel",
    "PinchingModel",
    "ContouringModel",
    "ScenarioSpec",
    "make_scenario",
    "sensor_eval",
    "sensor_sample",
    "abs_error",
    "percent_error",
    "scenario_config",
]

KINDS = ("hefting", "rubbing", "pinching", "contouring")


# ---------------------------------------------------------------------------
# Hefting: 1-D hand lifting a ball, unknown mass
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HeftingModel:
    """Ball resting on a vertical-moving hand; measures the support force.

    The gap is phi = z_ball - z_hand, so the spring pushes the ball up when
    the hand compresses it from below.  The ball is the only dynamic body and
    is integrated semi-implicitly with substeps (stiff spring).  A known
    viscous drag keeps the free flight from ringing forever; it does not
    shift the resting force m*g.
    """

    contact: ContactParams = ContactParams(stiffness=500.0, damping=0.0)
    hand_surface: HalfSpace = HalfSpace(normal=(1.0,), offset=0.0)
    start_height: float = 0.2

    param_names: Tuple[str, ...] = ("mass",)
    channel_names: Tuple[str, ...] = ("normal",)

    def initial_state(self, theta) -> RobotState:
        m = float(np.atleast_1d(theta)[0])
        z_h = self.start_height
        # resting equilibrium: lambda = m g  =>  phi = -m g / K
        z_b = z_h - m * 9.81 / self.contact.stiffness
        return RobotState([z_h], [0.0], ObjectState([z_b], [0.0]))

    def init_sens(self, theta):
        return (0.0, 0.0)  # (d z_ball / d m, d v_ball / d m) from a fixed x0

    def _contact_state(self, x: RobotState) -> ContactState:
        phi = float(x.obj.position[0] - x.position[0])
        v_rel = float(x.obj.velocity[0] - x.velocity[0])
        return ContactState(phi, v_rel)

    def step(self, dyn: DynamicsSpec, x: RobotState, u_cmd, theta, sens):
        m = float(theta[0])
        if m <= 0.0:
            raise ValueError("diverged rollout")
        p_new, v_real = integrate_robot(dyn, x.position, np.atleast_1d(u_cmd))
        lam_pre = self.contact_force_at(x, theta)

        K = self.contact.stiffness
        C = self.contact.damping
        b = dyn.object_drag
        g = dyn.gravity
        n_sub = dyn.object_substeps
        h = dyn.dt / n_sub

        z_h = float(x.position[0])
        dh = (float(p_new[0]) - z_h) / n_sub
        v_h = float(v_real[0])
        z_b = float(x.obj.position[0])
        v_b = float(x.obj.velocity[0])
        with_sens = sens is not None
        ds_z, ds_v = sens if with_sens else (0.0, 0.0)

        for _ in range(n_sub):
            phi = z_b - z_h
            vrel = v_b - v_h
            inner = -K * phi - C * abs(vrel)
            lam = inner if inner > 0.0 else 0.0
            a = lam / m - g - (b / m) * v_b
            if with_sens:
                act = 1.0 if inner > 0.0 else 0.0
                dlam = act * (-K * ds_z - C * np.sign(vrel) * ds_v)
                da = dlam / m - lam / m**2 + (b / m**2) * v_b - (b / m) * ds_v
                ds_v += h * da
                ds_z += h * ds_v  # mirror the semi-implicit order below
            v_b += h * a
            z_b += h * v_b
            z_h += dh

        x_next = RobotState(p_new, v_real, ObjectState([z_b], [v_b]))
        return x_next, lam_pre, ((ds_z, ds_v) if with_sens else None)

    def measure(self, x: RobotState, theta) -> np.ndarray:
        return np.array([contact_force(self.contact, self._contact_state(x)).lambda_n])

    def measure_jacobian(self, x: RobotState, sens, theta) -> np.ndarray:
        ds_z, ds_v = sens
        cs = self._contact_state(x)
        gs = contact_force_grad(self.contact, cs, wrt="state")
        # hand motion is command-driven (theta independent); only the ball
        # state carries sensitivity
        dphi, dvn = ds_z, ds_v
        return np.array([[gs[0, 0] * dphi + gs[0, 1] * dvn]])

    def contact_force_at(self, x: RobotState, theta) -> ContactForce:
        return contact_force(self.contact, self._contact_state(x))


# ---------------------------------------------------------------------------
# Rubbing: planar end effector against a wall, unknown friction coefficient
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RubbingModel:
    """Sphere end effector pressed and slid along a wall at x = 0.

    theta = (friction_coeff,).  Stiffness/damping/resistance are known; the
    state has no free body, so information enters purely through the direct
    parameter dependence of the tangential force.
    """

    wall: HalfSpace = HalfSpace(normal=(1.0, 0.0), offset=0.0)
    ee_radius: float = 0.05
    stiffness: float = 100.0
    damping: float = 1.0
    friction_resistance: float = 2.0
    start: Tuple[float, float] = (0.1, 0.8)

    param_names: Tuple[str, ...] = ("friction_coeff",)
    channel_names: Tuple[str, ...] = ("normal", "tangential")

    def params_at(self, theta) -> ContactParams:
        return ContactParams(
            self.stiffness, self.damping, float(theta[0]), self.friction_resistance
        )

    def initial_state(self, theta) -> RobotState:
        return RobotState(np.array(self.start), np.zeros(2))

    def init_sens(self, theta):
        return None

    def _contact_state(self, x: RobotState) -> ContactState:
        cs, _ = contact_state_from(x.position, x.velocity, self.wall, self.ee_radius)
        return cs

    def step(self, dyn: DynamicsSpec, x: RobotState, u_cmd, theta, sens):
        p_new, v_real = integrate_robot(dyn, x.position, np.atleast_1d(u_cmd))
        lam_pre = self.contact_force_at(x, theta)
        return RobotState(p_new, v_real), lam_pre, sens

    def measure(self, x: RobotState, theta) -> np.ndarray:
        return contact_force(self.params_at(theta), self._contact_state(x)).as_array()

    def measure_jacobian(self, x: RobotState, sens, theta) -> np.ndarray:
        g = contact_force_grad(self.params_at(theta), self._contact_state(x), wrt="params")
        return g[:, 2:3]  # friction coefficient column

    def contact_force_at(self, x: RobotState, theta) -> ContactForce:
        return contact_force(self.params_at(theta), self._contact_state(x))


# ---------------------------------------------------------------------------
# Pinching: symmetric two-finger squeeze, unknown grip stiffness and damping
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PinchingModel:
    """Gripper closing on an object; the state is the fingertip gap.

    theta = (stiffness, damping).  Both fingertips read the same squeeze
    force through independent sensors, so the measurement has two identical
    channels with independent noise.
    """

    start_gap: float = 0.004

    param_names: Tuple[str, ...] = ("stiffness", "damping")
    channel_names: Tuple[str, ...] = ("left", "right")

    def params_at(self, theta) -> ContactParams:
        return ContactParams(float(theta[0]), float(theta[1]))

    def initial_state(self, theta) -> RobotState:
        return RobotState([self.start_gap], [0.0])

    def init_sens(self, theta):
        return None

    def _contact_state(self, x: RobotState) -> ContactState:
        return ContactState(float(x.position[0]), float(x.velocity[0]))

    def step(self, dyn: DynamicsSpec, x: RobotState, u_cmd, theta, sens):
        p_new, v_real = integrate_robot(dyn, x.position, np.atleast_1d(u_cmd))
        lam_pre = self.contact_force_at(x, theta)
        return RobotState(p_new, v_real), lam_pre, sens

    def measure(self, x: RobotState, theta) -> np.ndarray:
        lam = contact_force(self.params_at(theta), self._contact_state(x)).lambda_n
        return np.array([lam, lam])

    def measure_jacobian(self, x: RobotState, sens, theta) -> np.ndarray:
        g = contact_force_grad(self.params_at(theta), self._contact_state(x), wrt="params")
        row = g[0, 0:2]  # (d lambda_n / d K, d lambda_n / d C)
        return np.array([row, row])

    def contact_force_at(self, x: RobotState, theta) -> ContactForce:
        return contact_force(self.params_at(theta), self._contact_state(x))


# ---------------------------------------------------------------------------
# Contouring: tracing a box of unknown length/width
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ContouringModel:
    """Planar end effector feeling out an axis-aligned box.

    theta = (length, width) of the box.  The sensor reports the normal force
    magnitude together with its components in the world frame,
    (lambda_n, lambda_n * n_x, lambda_n * n_y): scaling the normal by the
    force keeps every channel continuous through contact making/breaking.
    """

    box_center: Tuple[float, float] = (0.55, 0.0)
    ee_radius: float = 0.03
    stiffness: float = 500.0
    start: Tuple[float, float] = (0.5, -0.1)

    param_names: Tuple[str, ...] = ("length", "width")
    channel_names: Tuple[str, ...] = ("normal", "normal_x", "normal_y")

    def box_at(self, theta) -> Box2D:
        return Box2D(np.array(self.box_center), float(theta[0]), float(theta[1]))

    def initial_state(self, theta) -> RobotState:
        return RobotState(np.array(self.start), np.zeros(2))

    def init_sens(self, theta):
        return None

    def step(self, dyn: DynamicsSpec, x: RobotState, u_cmd, theta, sens):
        p_new, v_real = integrate_robot(dyn, x.position, np.atleast_1d(u_cmd))
        lam_pre = self.contact_force_at(x, theta)
        return RobotState(p_new, v_real), lam_pre, sens

    def _eval(self, x: RobotState, theta):
        res = self.box_at(theta).eval(x.position)
        phi = res.phi - self.ee_radius
        inner = -self.stiffness * phi
        lam = inner if inner > 0.0 else 0.0
        active = inner > 0.0
        return res, phi, lam, active

    def measure(self, x: RobotState, theta) -> np.ndarray:
        res, _, lam, _ = self._eval(x, theta)
        return np.array([lam, lam * res.normal[0], lam * res.normal[1]])

    def measure_jacobian(self, x: RobotState, sens, theta) -> np.ndarray:
        res, _, lam, active = self._eval(x, theta)
        dlam = (-self.stiffness * res.dphi_dshape) if active else np.zeros(2)
        n = res.normal
        dn = res.dnormal_dshape
        return np.array(
            [
                dlam,
                n[0] * dlam + lam * dn[0, :],
                n[1] * dlam + lam * dn[1, :],
            ]
        )

    def contact_force_at(self, x: RobotState, theta) -> ContactForce:
        _, _, lam, _ = self._eval(x, theta)
        return ContactForce(lam, 0.0)


# ---------------------------------------------------------------------------
# Scenario assembly
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScenarioSpec:
    """Everything a harness run needs: model, limits, truth, prior, sensor noise."""

    name: str
    model: object
    dynamics: DynamicsSpec
    true_params: ParamVector
    prior: ParamBelief
    noise_std: np.ndarray

    def __post_init__(self):
        ns = np.atleast_1d(np.asarray(self.noise_std, dtype=float))
        if ns.size == 1:
            ns = np.full(len(self.model.channel_names), float(ns[0]))
        if ns.size != len(self.model.channel_names):
            raise ValueError("noise std must match the sensor channel count")
        if np.any(ns <= 0.0):
            raise ValueError("noise std must be positive")
        ns.setflags(write=False)
        object.__setattr__(self, "noise_std", ns)
        if tuple(self.true_params.names) != tuple(self.model.param_names):
            raise ValueError("true parameter names must match the model")
        if tuple(self.prior.mode.names) != tuple(self.model.param_names):
            raise ValueError("prior parameter names must match the model")

    @property
    def param_dim(self) -> int:
        return self.true_params.dim

    @property
    def channels(self) -> int:
        return len(self.model.channel_names)

    def noise_cov(self) -> np.ndarray:
        return np.diag(self.noise_std**2)


def _belief(names, mode, cov, support) -> ParamBelief:
    return ParamBelief(ParamVector(np.asarray(mode, dtype=float), tuple(names)), cov, support)


def make_scenario(
    kind: str,
    *,
    dt: float = 0.02,
    noise_std: float | np.ndarray = 0.25,
    prior_mode=None,
    prior_cov=None,
) -> ScenarioSpec:
    """Build one of the four named setups with its published constants.

    prior_mode / prior_cov override the default belief (robustness sweeps);
    noise_std is per-channel (scalar broadcasts).
    """
    if kind == "hefting":
        model = HeftingModel()
        dyn = DynamicsSpec(
            workspace=[[0.0, 0.6]],
            velocity_bounds=[[-1.0, 1.0]],
            dt=dt,
            object_mass=0.05,
            object_substeps=40,
            object_drag=4.0,
        )
        true = ParamVector([0.05], ("mass",))
        prior = _belief(
            ("mass",),
            prior_mode if prior_mode is not None else [0.15],
            prior_cov if prior_cov is not None else [[10.0]],
            [[0.005, 0.5]],
        )
    elif kind == "rubbing":
        model = RubbingModel()
        dyn = DynamicsSpec(
            workspace=[[0.0, 1.0], [0.5, 1.0]],
            velocity_bounds=[[-1.0, 1.0], [-1.0, 1.0]],
            dt=dt,
        )
        true = ParamVector([0.4], ("friction_coeff",))
        prior = _belief(
            ("friction_coeff",),
            prior_mode if prior_mode is not None else [0.6],
            prior_cov if prior_cov is not None else [[1.0]],
            [[0.0, 1.0]],
        )
    elif kind == "pinching":
        model = PinchingModel()
        dyn = DynamicsSpec(
            workspace=[[-0.01, 0.02]],
            velocity_bounds=[[-0.1, 0.1]],
            dt=dt,
        )
        true = ParamVector([800.0, 10.0], ("stiffness", "damping"))
        prior = _belief(
            ("stiffness", "damping"),
            prior_mode if prior_mode is not None else [700.0, 5.0],
            prior_cov if prior_cov is not None else np.diag([100.0, 10.0]),
            [[100.0, 2000.0], [0.0, 50.0]],
        )
    elif kind == "contouring":
        model = ContouringModel()
        dyn = DynamicsSpec(
            workspace=[[0.3, 0.8], [-0.15, 0.15]],
            velocity_bounds=[[-0.5, 0.5], [-0.5, 0.5]],
            dt=dt,
        )
        true = ParamVector([0.126, 0.05], ("length", "width"))
        prior = _belief(
            ("length", "width"),
            prior_mode if prior_mode is not None else [0.10, 0.08],
            prior_cov if prior_cov is not None else np.diag([1.0e-3, 1.0e-3]),
            [[0.02, 0.3], [0.02, 0.3]],
        )
    else:
        raise ValueError(f"unknown scenario kind: {kind!r} (expected one of {KINDS})")

    return ScenarioSpec(kind, model, dyn, true, prior, np.asarray(noise_std, dtype=float))


# ---------------------------------------------------------------------------
# Sensor + error helpers
# ---------------------------------------------------------------------------


def sensor_eval(scenario: ScenarioSpec, state: RobotState, theta=None) -> np.ndarray:
    """Noiseless sensor prediction at a state (theta defaults to the truth)."""
    th = scenario.true_params.values if theta is None else np.atleast_1d(theta)
    return scenario.model.measure(state, np.asarray(th, dtype=float))


def sensor_sample(
    scenario: ScenarioSpec, state: RobotState, rng: np.random.Generator, theta=None
) -> Measurement:
    """Draw one noisy sensor sample (iid Gaussian per channel)."""
    y = sensor_eval(scenario, state, theta)
    return Measurement(y + rng.normal(0.0, scenario.noise_std))


def abs_error(theta_hat: ParamVector, theta_true: ParamVector) -> np.ndarray:
    return np.abs(theta_hat.values - theta_true.values)


def percent_error(theta_hat: ParamVector, theta_true: ParamVector) -> np.ndarray:
    """100 * |error| / |true| per parameter (true components must be nonzero)."""
    ref = np.abs(theta_true.values)
    if np.any(ref == 0.0):
        raise ValueError("percent error undefined for zero true parameters")
    return 100.0 * np.abs(theta_hat.values - theta_true.values) / ref


def scenario_config(scenario: ScenarioSpec) -> dict:
    """JSON-ready dump of every number that defines a scenario."""
    dyn = scenario.dynamics
    return {
        "name": scenario.name,
        "params": list(scenario.model.param_names),
        "channels": list(scenario.model.channel_names),
        "true_params": scenario.true_params.as_dict(),
        "prior_mode": scenario.prior.mode.as_dict(),
        "prior_covariance": scenario.prior.covariance.tolist(),
        "support": scenario.prior.support.tolist(),
        "noise_std": scenario.noise_std.tolist(),
        "dt": dyn.dt,
        "workspace": dyn.workspace.tolist(),
        "velocity_bounds": dyn.velocity_bounds.tolist(),
        "gravity": dyn.gravity,
        "object_mass": dyn.object_mass,
        "object_substeps": dyn.object_substeps,
        "object_drag": dyn.object_drag,
    }
