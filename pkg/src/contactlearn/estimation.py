"""Contact-aware MAP estimation and Gaussian belief updates.

The log posterior of the parameters given one experiment's force data is
evaluated by re-simulating the recorded controls from the recorded start
state (single shooting — the dynamics and contact constraints hold by
construction) and scoring the residuals under the Gaussian sensor model plus
the Gaussian prior.  The solver ascends with Fisher-preconditioned natural
gradient steps delta = H^-1 grad, H = F(theta) + prior precision + eps I,
projected onto the parameter support box, with simple backtracking.

The belief update folds the information gathered at the estimate into the
prior:  Sigma_plus = (F + Sigma_prior^-1)^-1, symmetrized.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .core import Experiment, ParamBelief, ParamVector, symmetrize
from .fisher import FisherEngine, _measure_rollout, measurement_jacobians

__all__ = [
    "LogPosterior",
    "log_posterior",
    "grad_log_posterior",
    "ca_map_solve",
    "belief_update",
]


@dataclass(frozen=True)
class LogPosterior:
    """Bundles one experiment's data with the prior it is scored against."""

    scenario: object
    data: Experiment
    prior: ParamBelief

    @property
    def n_data(self) -> int:
        return self.data.horizon * self.data.measurements[0].forces.size


def _residual_stats(lp: LogPosterior, theta, engine: FisherEngine):
    """One pass: value, gradient, and Gauss-Newton information at theta.

    Returns (value, grad, fim) or None if the trial rollout diverged.
    """
    sc = lp.scenario
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    try:
        ys, gs = measurement_jacobians(
            engine, sc.dynamics, sc, lp.data.x0, lp.data.controls, theta
        )
    except ValueError:
        return None
    w = 1.0 / sc.noise_std**2
    r = lp.data.stacked_measurements() - ys
    dtheta = theta - lp.prior.mode.values
    prec = lp.prior.precision()
    value = -0.5 * float(np.einsum("tm,m,tm->", r, w, r)) - 0.5 * float(
        dtheta @ prec @ dtheta
    )
    grad = np.einsum("tmi,m,tm->i", gs, w, r) - prec @ dtheta
    fim = symmetrize(np.einsum("tmi,m,tmj->ij", gs, w, gs))
    if not (np.isfinite(value) and np.all(np.isfinite(grad)) and np.all(np.isfinite(fim))):
        return None
    return value, grad, fim


def log_posterior(lp: LogPosterior, theta) -> float:
    """Log posterior density up to an additive constant.

    Re-simulates the recorded controls at theta; a diverged trial rollout
    scores -inf (rejected by any ascent).
    """
    sc = lp.scenario
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    try:
        ys = _measure_rollout(sc.dynamics, sc, lp.data.x0, lp.data.controls, theta)
    except ValueError:
        return -np.inf
    w = 1.0 / sc.noise_std**2
    r = lp.data.stacked_measurements() - ys
    dtheta = theta - lp.prior.mode.values
    prec = lp.prior.precision()
    return -0.5 * float(np.einsum("tm,m,tm->", r, w, r)) - 0.5 * float(
        dtheta @ prec @ dtheta
    )


def grad_log_posterior(
    lp: LogPosterior, theta, engine: Optional[FisherEngine] = None
) -> np.ndarray:
    """Gradient of the log posterior (analytic unless a baseline engine is given)."""
    stats = _residual_stats(lp, theta, engine or FisherEngine())
    if stats is None:
        raise ValueError("diverged rollout")
    return stats[1]


def _support_probes(prior: ParamBelief, budget: int = 64) -> np.ndarray:
    """Deterministic grid of interior support points used for plateau escapes."""
    d = prior.dim
    n = max(2, int(round(budget ** (1.0 / d))))
    lo, hi = prior.support[:, 0], prior.support[:, 1]
    axes = [lo[j] + (np.arange(n) + 0.5) * (hi[j] - lo[j]) / n for j in range(d)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def ca_map_solve(
    lp: LogPosterior,
    theta0,
    engine: Optional[FisherEngine] = None,
    max_iters: int = 50,
    tol: float = 1.0e-6,
) -> Tuple[ParamVector, int, bool]:
    """Maximize the log posterior over the support box.

    Natural-gradient ascent with backtracking from theta0.  Convergence means
    the projected gradient dropped below tol scaled by the data count, or no
    ascent step of any tried length improves the objective (a box face).
    Branch flips kink the posterior, so two exits besides the gradient test:
    a maximum sitting exactly on a kink never zeroes the gradient but does
    freeze the value (two consecutive sub-1e-11 relative improvements count as
    converged), and saturation can park ascent on a plateau far from the
    optimum, so an apparent convergence is double-checked against a
    deterministic grid of support points.  Ascent restarts from at most two
    probes that lie outside every visited basin (farther than two grid
    spacings) yet score within two log-posterior units of the incumbent -- a
    narrow peak can top the incumbent while every probe under it scores below
    -- and the highest maximum found wins, all within one iteration budget.
    """
    engine = engine or FisherEngine()
    prior = lp.prior
    lo, hi = prior.support[:, 0], prior.support[:, 1]
    d = prior.dim
    gtol = tol * (1.0 + lp.n_data)
    prec = prior.precision()

    def ascend(theta, budget):
        """Returns (theta, value, iterations_used, converged)."""
        stats = _residual_stats(lp, theta, engine)
        if stats is None:
            return theta, -np.inf, 0, False
        value, grad, fim = stats
        used = 0
        converged = False
        stalls = 0
        while used < budget:
            used += 1
            # projected gradient: zero when the gradient pushes out of the box
            pg = theta - np.clip(theta + grad, lo, hi)
            if np.max(np.abs(pg)) <= gtol or stalls >= 2:
                converged = True
                break
            eps = 1.0e-6 * np.trace(fim) / d + 1.0e-9
            h = fim + prec + eps * np.eye(d)
            delta = np.linalg.solve(h, grad)
            improved = False
            eta = 1.0
            for _ in range(24):
                cand = np.clip(theta + eta * delta, lo, hi)
                if np.max(np.abs(cand - theta)) > 0.0:
                    v = log_posterior(lp, cand)
                    if v > value:
                        stats = _residual_stats(lp, cand, engine)
                        if stats is not None:
                            gain = v - value
                            theta, (value, grad, fim) = cand, stats
                            stalls = stalls + 1 if gain <= 1.0e-11 * (1.0 + abs(value)) else 0
                            improved = True
                            break
                eta *= 0.5
            if not improved:
                converged = True  # no admissible ascent direction left
                break
        return theta, value, used, converged

    theta = np.clip(np.atleast_1d(np.asarray(theta0, dtype=float)), lo, hi)
    if log_posterior(lp, theta) == -np.inf:
        raise ValueError("diverged rollout")
    theta, value, iterations, converged = ascend(theta, max_iters)

    probes = _support_probes(prior)
    vals = np.array([log_posterior(lp, p) for p in probes])
    n_grid = max(2, int(round(64.0 ** (1.0 / d))))
    spacing = (hi - lo) / n_grid
    visited = [theta.copy()]
    restarts = 0
    for j in np.argsort(vals)[::-1]:
        if restarts >= 2 or iterations >= max_iters or not np.isfinite(vals[j]):
            break
        if vals[j] <= value - 2.0:
            break
        if any(np.max(np.abs(probes[j] - t) / spacing) <= 2.0 for t in visited):
            continue
        t2, v2, used, conv2 = ascend(probes[j].copy(), max_iters - iterations)
        iterations += used
        restarts += 1
        visited.append(t2.copy())
        if v2 > value:
            theta, value, converged = t2, v2, conv2

    return prior.mode.replace_values(theta), iterations, converged


def belief_update(prior: ParamBelief, fisher, theta_hat: ParamVector) -> ParamBelief:
    """Fold an information matrix into the prior around the new mode.

    Sigma_plus = (F + Sigma_prior^-1)^-1, symmetrized; the support box is
    inherited.  Raises ValueError("invalid information matrix") if F is not
    symmetric PSD.
    """
    f = np.asarray(fisher, dtype=float)
    d = prior.dim
    if f.shape != (d, d):
        raise ValueError("invalid information matrix")
    scale = 1.0 + np.abs(f).max()
    if not np.allclose(f, f.T, rtol=0.0, atol=1.0e-9 * scale):
        raise ValueError("invalid information matrix")
    f = symmetrize(f)
    if np.linalg.eigvalsh(f).min() < -1.0e-8 * scale:
        raise ValueError("invalid information matrix")
    cov = symmetrize(np.linalg.inv(f + prior.precision()))
    mode = prior.mode.replace_values(prior.clip_to_support(theta_hat.values))
    return ParamBelief(mode, cov, prior.support)
