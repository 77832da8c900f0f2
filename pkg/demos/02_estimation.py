"""From noisy force data to a posterior over friction.

Presses a fingertip against a wall, slides it, corrupts the measured contact
forces with sensor noise, and recovers the friction coefficient by maximizing
the log posterior.  A dense parameter scan confirms the solver's maximum, and
a Gaussian belief update shows the posterior tightening once the experiment's
information is folded in.

Also shown: not every touch teaches.  A full-force press drives the predicted
tangential force onto the velocity bound, whose value does not depend on
friction at all, so the same ten seconds of data carry almost no information.
Choosing contact that stays on the informative branch is exactly the job the
experiment planner automates.
"""

import numpy as np

from contactlearn import (
    ControlInput,
    Experiment,
    FisherEngine,
    LogPosterior,
    belief_update,
    ca_map_solve,
    fim_for_experiment,
    log_posterior,
    make_scenario,
    rollout,
    sensor_sample,
    substream,
)


def collect(sc, tape, seed):
    controls = tuple(ControlInput(list(u)) for u in tape)
    x0 = sc.model.initial_state(sc.true_params.values)
    traj = rollout(sc.dynamics, sc, x0, controls, sc.true_params.values)
    noise = substream(seed, 0)
    meas = tuple(sensor_sample(sc, s, noise) for s in traj.states[1:])
    return Experiment(traj, controls, meas, sc.noise_std)


def main():
    sc = make_scenario("rubbing")
    mu_true = sc.true_params.values[0]
    engine = FisherEngine()
    print(f"true friction coefficient: {mu_true}")
    print(f"prior: mode {sc.prior.mode.values[0]}, "
          f"std {np.sqrt(sc.prior.covariance[0, 0]):.2f}, "
          f"support {sc.prior.support[0].tolist()}")

    # ram the wall and keep shoving: the predicted tangential force saturates
    # at the velocity bound, which friction does not enter
    hard = collect(sc, [(-0.8, 0.45)] * 10, seed=42)
    info_hard = fim_for_experiment(engine, sc, hard, [mu_true]).matrix[0, 0]

    # reach in four steps, then hold a light press while sliding: the
    # friction cone stays active and every step's slope is the normal force
    soft = collect(sc, [(-0.8, 0.5)] * 4 + [(-0.05, 0.5)] * 12, seed=42)
    info_soft = fim_for_experiment(engine, sc, soft, [mu_true]).matrix[0, 0]

    print("\ninformation about friction at the true parameters:")
    print(f"  hard shove, 10 steps: {info_hard:7.1f}")
    print(f"  light slide, 16 steps: {info_soft:7.1f}")

    lp = LogPosterior(sc, soft, sc.prior)
    est, iters, converged = ca_map_solve(lp, sc.prior.mode.values)
    print(f"\nsolver on the light slide: mu_hat = {est.values[0]:.5f} "
          f"after {iters} iterations (converged={converged})")

    grid = np.linspace(0.0, 1.0, 2001)
    vals = np.array([log_posterior(lp, [m]) for m in grid])
    best = grid[np.argmax(vals)]
    print(f"dense scan of 2001 support points peaks at {best:.5f} "
          f"(|solver - scan| = {abs(est.values[0] - best):.2e})")

    info = fim_for_experiment(engine, sc, soft, est.values)
    posterior = belief_update(sc.prior, info.matrix, est)
    print(f"\nfolding the experiment's information ({info.matrix[0, 0]:.1f}) "
          f"into the prior:")
    print(f"  posterior mode {posterior.mode.values[0]:.5f}, "
          f"std {np.sqrt(posterior.covariance[0, 0]):.4f} "
          f"(prior std was {np.sqrt(sc.prior.covariance[0, 0]):.2f})")

    # an independent repeat shrinks the spread by roughly sqrt(2)
    soft2 = collect(sc, [(-0.8, 0.5)] * 4 + [(-0.05, 0.5)] * 12, seed=43)
    lp2 = LogPosterior(sc, soft2, posterior)
    est2, _, _ = ca_map_solve(lp2, posterior.mode.values)
    info2 = fim_for_experiment(engine, sc, soft2, est2.values)
    posterior2 = belief_update(posterior, info2.matrix, est2)
    print(f"  after an independent repeat: mode {posterior2.mode.values[0]:.5f},"
          f" std {np.sqrt(posterior2.covariance[0, 0]):.4f}")
    print(f"\nfinal error |mu_hat - mu_true| = "
          f"{abs(posterior2.mode.values[0] - mu_true):.5f}")


if __name__ == "__main__":
    main()
