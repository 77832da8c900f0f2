"""Shared value types and deterministic random streams.

Everything downstream (simulation, estimation, planning) passes these small
immutable containers around.  Arrays are copied on construction and frozen
read-only so a trajectory or belief can be cached without defensive copies.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

__all__ = [
    "seeded_rng",
    "substream",
    "ParamVector",
    "ParamBelief",
    "ObjectState",
    "RobotState",
    "ControlInput",
    "Measurement",
    "Trajectory",
    "Experiment",
    "symmetrize",
]


def seeded_rng(seed: int) -> np.random.Generator:
    """Deterministic PCG64 generator; same seed -> same stream on any platform."""
    return np.random.Generator(np.random.PCG64(int(seed)))


def substream(seed: int, *key: int) -> np.random.Generator:
    """Independent generator derived from (seed, key...).

    Used to decouple e.g. per-experiment sensor noise from planner sampling so
    paired comparisons see identical noise regardless of how much randomness
    the planner consumed.
    """
    ss = np.random.SeedSequence([int(seed), *[int(k) for k in key]])
    return np.random.Generator(np.random.PCG64(ss))


def _frozen(a, dtype=float) -> np.ndarray:
    arr = np.array(a, dtype=dtype)
    arr.setflags(write=False)
    return arr


def symmetrize(m: np.ndarray) -> np.ndarray:
    """(M + M^T)/2 — used everywhere a covariance/information matrix is formed."""
    m = np.asarray(m, dtype=float)
    return 0.5 * (m + m.T)


@dataclass(frozen=True)
class ParamVector:
    """Named physical parameter vector (e.g. ('mass',) or ('stiffness','damping'))."""

    values: np.ndarray
    names: Tuple[str, ...]

    def __post_init__(self):
        vals = _frozen(np.atleast_1d(self.values))
        if vals.ndim != 1 or vals.size == 0:
            raise ValueError("parameter vector must be non-empty 1-D")
        if not np.all(np.isfinite(vals)):
            raise ValueError("parameter vector must be finite")
        names = tuple(str(n) for n in self.names)
        if len(names) != vals.size:
            raise ValueError("parameter names and values disagree in length")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "names", names)

    @property
    def dim(self) -> int:
        return self.values.size

    def replace_values(self, values) -> "ParamVector":
        return ParamVector(np.asarray(values, dtype=float), self.names)

    def as_dict(self) -> dict:
        return {n: float(v) for n, v in zip(self.names, self.values)}


@dataclass(frozen=True)
class ParamBelief:
    """Gaussian belief over parameters, truncated to a box support.

    mode is the belief point estimate, covariance the (symmetric PD) Gaussian
    covariance, support a (d, 2) array of [lo, hi] bounds the estimator
    projects onto.
    """

    mode: ParamVector
    covariance: np.ndarray
    support: np.ndarray

    def __post_init__(self):
        d = self.mode.dim
        cov = np.array(self.covariance, dtype=float).reshape(d, d)
        if not np.allclose(cov, cov.T, rtol=0.0, atol=1e-10 * (1.0 + np.abs(cov).max())):
            raise ValueError("belief covariance must be symmetric")
        cov = symmetrize(cov)
        eigs = np.linalg.eigvalsh(cov)
        if eigs.min() <= 0.0:
            raise ValueError("belief covariance must be positive definite")
        sup = np.array(self.support, dtype=float).reshape(d, 2)
        if np.any(sup[:, 0] >= sup[:, 1]):
            raise ValueError("belief support must have lo < hi per parameter")
        if np.any(self.mode.values < sup[:, 0]) or np.any(self.mode.values > sup[:, 1]):
            raise ValueError("belief mode must lie inside the support box")
        object.__setattr__(self, "covariance", _frozen(cov))
        object.__setattr__(self, "support", _frozen(sup))

    @property
    def dim(self) -> int:
        return self.mode.dim

    def precision(self) -> np.ndarray:
        return symmetrize(np.linalg.inv(self.covariance))

    def clip_to_support(self, values: np.ndarray) -> np.ndarray:
        return np.clip(np.asarray(values, dtype=float), self.support[:, 0], self.support[:, 1])


@dataclass(frozen=True)
class ObjectState:
    """Free body pushed around by contact (hefting ball); absent elsewhere."""

    position: np.ndarray
    velocity: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "position", _frozen(np.atleast_1d(self.position)))
        object.__setattr__(self, "velocity", _frozen(np.atleast_1d(self.velocity)))
        if self.position.shape != self.velocity.shape:
            raise ValueError("object position/velocity shape mismatch")


@dataclass(frozen=True)
class RobotState:
    """Kinematic end-effector state; velocity is the realized (post-clamp) rate."""

    position: np.ndarray
    velocity: np.ndarray
    obj: Optional[ObjectState] = None

    def __post_init__(self):
        p = _frozen(np.atleast_1d(self.position))
        v = _frozen(np.atleast_1d(self.velocity))
        if p.shape != v.shape:
            raise ValueError("robot position/velocity shape mismatch")
        if not (np.all(np.isfinite(p)) and np.all(np.isfinite(v))):
            raise ValueError("robot state must be finite")
        object.__setattr__(self, "position", p)
        object.__setattr__(self, "velocity", v)

    @property
    def dof(self) -> int:
        return self.position.size


@dataclass(frozen=True)
class ControlInput:
    """Velocity command for one step (clamped to bounds when applied)."""

    command: np.ndarray

    def __post_init__(self):
        cmd = _frozen(np.atleast_1d(self.command))
        if not np.all(np.isfinite(cmd)):
            raise ValueError("control command must be finite")
        object.__setattr__(self, "command", cmd)


@dataclass(frozen=True)
class Measurement:
    """One force-sensor sample (vector of channels, N)."""

    forces: np.ndarray

    def __post_init__(self):
        f = _frozen(np.atleast_1d(self.forces))
        if not np.all(np.isfinite(f)):
            raise ValueError("measurement must be finite")
        object.__setattr__(self, "forces", f)


@dataclass(frozen=True)
class Trajectory:
    """States 0..T plus the per-step contact force at the departed state."""

    states: Tuple[RobotState, ...]
    contacts: tuple
    dt: float

    def __post_init__(self):
        states = tuple(self.states)
        contacts = tuple(self.contacts)
        if len(states) != len(contacts) + 1:
            raise ValueError("trajectory needs exactly one more state than contact record")
        if not (float(self.dt) > 0.0):
            raise ValueError("trajectory dt must be positive")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "contacts", contacts)
        object.__setattr__(self, "dt", float(self.dt))

    @property
    def horizon(self) -> int:
        return len(self.contacts)


@dataclass(frozen=True)
class Experiment:
    """Executed (or predicted) rollout with the sensor samples it produced.

    measurements[t] corresponds to trajectory state t+1 (post-step sampling),
    controls[t] to the command that produced that transition.
    """

    trajectory: Trajectory
    controls: Tuple[ControlInput, ...]
    measurements: Tuple[Measurement, ...]
    noise_std: np.ndarray

    def __post_init__(self):
        controls = tuple(self.controls)
        meas = tuple(self.measurements)
        if len(controls) != self.trajectory.horizon:
            raise ValueError("experiment controls must match trajectory horizon")
        if len(meas) != len(controls):
            raise ValueError("experiment needs one measurement per control step")
        ns = _frozen(np.atleast_1d(self.noise_std))
        if np.any(ns <= 0.0):
            raise ValueError("noise std must be positive")
        object.__setattr__(self, "controls", controls)
        object.__setattr__(self, "measurements", meas)
        object.__setattr__(self, "noise_std", ns)

    @property
    def horizon(self) -> int:
        return len(self.controls)

    @property
    def x0(self) -> RobotState:
        return self.trajectory.states[0]

    def stacked_measurements(self) -> np.ndarray:
        return np.stack([m.forces for m in self.measurements], axis=0)
