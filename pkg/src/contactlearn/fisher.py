"""Empirical Fisher information of force measurements along a rollout.

Under iid Gaussian sensor noise the information about the parameters carried
by a trajectory is the Gauss-Newton sum

    F = sum_t  G_t^T  Sigma^-1  G_t,        G_t = d y_hat_t / d theta,

summed over time steps without averaging.  Two engines produce G_t: the
contact-aware one propagates analytic sensitivities through the rollout; the
baseline one central-differences entire rollouts per parameter.  Also here:
the Cramer-Rao sanity check and a condition-number bound diagnostic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .core import ControlInput, RobotState, Trajectory, symmetrize
from .dynamics import DynamicsSpec, rollout, rollout_with_sensitivity

__all__ = [
    "FisherEngine",
    "InfoMatrix",
    "measurement_jacobians",
    "fim_trajectory",
    "fim_rollout",
    "fim_for_experiment",
    "psi",
    "crlb_check",
    "condition_bound_check",
]

MODES = ("contact-aware", "baseline")


@dataclass(frozen=True)
class FisherEngine:
    """Chooses how measurement Jacobians are obtained.

    fd_step is the relative central-difference step used by the baseline
    engine (absolute step fd_step * max(|theta_j|, 1)).
    """

    mode: str = "contact-aware"
    fd_step: float = 1.0e-4

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"engine mode must be one of {MODES}")
        if not (float(self.fd_step) > 0.0):
            raise ValueError("finite-difference step must be positive")
        object.__setattr__(self, "fd_step", float(self.fd_step))


@dataclass(frozen=True)
class InfoMatrix:
    """Symmetric PSD information matrix plus the number of summed time steps."""

    matrix: np.ndarray
    sample_count: int

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("invalid information matrix")
        scale = 1.0 + np.abs(m).max()
        if not np.allclose(m, m.T, rtol=0.0, atol=1.0e-9 * scale):
            raise ValueError("invalid information matrix")
        m = symmetrize(m)
        if np.linalg.eigvalsh(m).min() < -1.0e-8 * scale:
            raise ValueError("invalid information matrix")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "sample_count", int(self.sample_count))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def _measure_rollout(dyn, scenario, x0, controls, theta) -> np.ndarray:
    """Noiseless measurement sequence (T, channels) via a plain rollout."""
    traj = rollout(dyn, scenario, x0, controls, theta)
    return np.array([scenario.model.measure(x, theta) for x in traj.states[1:]])


def measurement_jacobians(
    engine: FisherEngine,
    dyn: DynamicsSpec,
    scenario,
    x0: RobotState,
    controls: Sequence[ControlInput],
    theta,
) -> Tuple[np.ndarray, np.ndarray]:
    """Predicted measurements Y (T, m) and Jacobians G (T, m, d) at theta."""
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    if engine.mode == "contact-aware":
        _, ys, gs = rollout_with_sensitivity(dyn, scenario, x0, controls, theta)
        return ys, gs
    ys = _measure_rollout(dyn, scenario, x0, controls, theta)
    gs = np.zeros(ys.shape + (theta.size,))
    for j in range(theta.size):
        h = engine.fd_step * max(abs(theta[j]), 1.0)
        tp, tm = theta.copy(), theta.copy()
        tp[j] += h
        tm[j] -= h
        yp = _measure_rollout(dyn, scenario, x0, controls, tp)
        ym = _measure_rollout(dyn, scenario, x0, controls, tm)
        gs[:, :, j] = (yp - ym) / (2.0 * h)
    return ys, gs


def fim_rollout(
    engine: FisherEngine,
    dyn: DynamicsSpec,
    scenario,
    x0: RobotState,
    controls: Sequence[ControlInput],
    theta,
) -> InfoMatrix:
    """Empirical information of the rollout starting at x0 under controls."""
    _, gs = measurement_jacobians(engine, dyn, scenario, x0, controls, theta)
    w = 1.0 / scenario.noise_std**2
    f = np.einsum("tmi,m,tmj->ij", gs, w, gs)
    return InfoMatrix(symmetrize(f), gs.shape[0])


def fim_trajectory(
    engine: FisherEngine,
    scenario,
    traj: Trajectory,
    controls: Sequence[ControlInput],
    theta,
) -> InfoMatrix:
    """Information of a recorded trajectory, re-simulated from its start state."""
    return fim_rollout(engine, scenario.dynamics, scenario, traj.states[0], controls, theta)


def fim_for_experiment(engine: FisherEngine, scenario, experiment, theta) -> InfoMatrix:
    return fim_rollout(
        engine, scenario.dynamics, scenario, experiment.x0, experiment.controls, theta
    )


def psi(info, metric: str = "trace") -> float:
    """Scalar information objective: 'trace' or 'logdet' (regularized)."""
    m = info.matrix if isinstance(info, InfoMatrix) else np.asarray(info, dtype=float)
    if metric == "trace":
        return float(np.trace(m))
    if metric == "logdet":
        d = m.shape[0]
        sign, val = np.linalg.slogdet(m + 1.0e-12 * np.eye(d))
        return float(val) if sign > 0 else -np.inf
    raise ValueError("metric must be 'trace' or 'logdet'")


def crlb_check(fisher, sample_cov, rel_tol: float = 0.1) -> dict:
    """Check the Cramer-Rao ordering cov(theta_hat) >= F^-1 up to tolerance.

    Returns margin = min eig(sample_cov - (F + eps I)^-1); satisfied when the
    margin is above -rel_tol * ||(F + eps I)^-1||_2.  A (near-)zero F makes
    the bound vacuous and reports satisfied with infinite margin.
    """
    f = symmetrize(np.asarray(fisher, dtype=float))
    c = symmetrize(np.asarray(sample_cov, dtype=float))
    d = f.shape[0]
    tr = float(np.trace(f))
    if tr <= 1.0e-12:
        return {"satisfied": True, "margin": np.inf, "threshold": 0.0, "vacuous": True}
    eps = 1.0e-12 * tr / d
    inv = symmetrize(np.linalg.inv(f + eps * np.eye(d)))
    margin = float(np.linalg.eigvalsh(c - inv).min())
    threshold = rel_tol * float(np.linalg.norm(inv, 2))
    return {
        "satisfied": bool(margin >= -threshold),
        "margin": margin,
        "threshold": threshold,
        "vacuous": False,
    }


def condition_bound_check(fisher, tol: float = 1.0e-9) -> dict:
    """Condition-number sandwich from the squared Frobenius norms of F, F^-1.

    With P = ||F||_F^2 ||F^-1||_F^2 and kappa the 2-norm condition number,
    checks  (P - (n-2))^2  >=  (kappa + 1/kappa)^2  >=  4 P / n^2  for even n
    (4 (P - 1) / (n^2 - 1) for odd n).  Singular input is reported as
    checked=False rather than an error.
    """
    f = symmetrize(np.asarray(fisher, dtype=float))
    n = f.shape[0]
    eigs = np.linalg.eigvalsh(f)
    if eigs.min() <= 0.0 or eigs.min() < 1.0e-14 * eigs.max():
        return {"checked": False, "holds": None, "kappa": np.inf}
    kappa = float(eigs.max() / eigs.min())
    frob2 = float(np.sum(f * f))
    finv = np.linalg.inv(f)
    frob2_inv = float(np.sum(finv * finv))
    p = frob2 * frob2_inv
    lhs = (p - (n - 2)) ** 2
    mid = (kappa + 1.0 / kappa) ** 2
    rhs = (4.0 / n**2) * p if n % 2 == 0 else (4.0 / (n**2 - 1)) * (p - 1.0)
    slack = tol * max(1.0, lhs, mid, abs(rhs))
    holds = bool(lhs >= mid - slack and mid >= rhs - slack)
    return {
        "checked": True,
        "holds": holds,
        "kappa": kappa,
        "norm_product": p,
        "lhs": lhs,
        "mid": mid,
        "rhs": rhs,
    }
