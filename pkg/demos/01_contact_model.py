"""Tour of the soft-contact force law.

Sweeps a probe through approach, touch, press, and slide against a wall and
prints which branch of the force law each state lands on, then spot-checks the
analytic force gradients against central finite differences away from the
branch boundaries.
"""

import numpy as np

from contactlearn import (
    ContactParams,
    ContactState,
    contact_force,
    contact_force_grad,
)


def branch_name(params, force):
    if force.lambda_n == 0.0:
        return "separated (no force)"
    if force.lambda_t == 0.0:
        return "pressing (no slip)"
    cone = params.friction_coeff * force.lambda_n
    if abs(abs(force.lambda_t) - cone) < 1e-12:
        return "sliding (friction cone)"
    return "creeping (velocity bound)"


def main():
    params = ContactParams(stiffness=100.0, damping=1.0, friction_coeff=0.4,
                           friction_resistance=2.0)

    print("phi_n     v_n     v_t   ->  lambda_n  lambda_t   branch")
    states = [
        (+0.050, -0.30, 0.00),   # approaching, still clear of the wall
        (-0.001, -0.05, 0.00),   # first touch
        (-0.020, -0.10, 0.00),   # firm press, no tangential motion
        (-0.020, -0.10, 0.50),   # press and slide: friction cone active
        (-0.020, -0.10, 0.05),   # slow creep: velocity bound active
        (-0.020, +0.40, 0.80),   # retreating while sliding
    ]
    for phi, vn, vt in states:
        cs = ContactState(phi_n=phi, v_n=vn, v_t=vt)
        f = contact_force(params, cs)
        print(f"{phi:+.3f}  {vn:+.2f}  {vt:+.2f}  ->  {f.lambda_n:8.3f}  "
              f"{f.lambda_t:8.3f}   {branch_name(params, f)}")

    print("\nanalytic parameter gradient vs central differences "
          "(interior states only)")
    rng = np.random.default_rng(7)
    worst = 0.0
    checked = 0
    while checked < 200:
        cs = ContactState(
            phi_n=rng.uniform(-0.05, 0.05),
            v_n=rng.uniform(-1.0, 1.0),
            v_t=rng.uniform(-1.0, 1.0),
        )
        base = contact_force(params, cs)
        # discard draws near a branch switch, where one-sided slopes differ
        if abs(params.stiffness * -cs.phi_n - params.damping * abs(cs.v_n)) < 1e-3:
            continue
        if base.lambda_n > 0.0 and abs(
            params.friction_coeff * base.lambda_n
            - params.friction_resistance * abs(cs.v_t)
        ) < 1e-3:
            continue
        checked += 1
        an = contact_force_grad(params, cs)
        h = 1e-6
        fd = np.zeros((2, 4))
        vals = [params.stiffness, params.damping, params.friction_coeff,
                params.friction_resistance]
        for j in range(4):
            bumped = list(vals)
            bumped[j] = vals[j] + h
            hi = contact_force(ContactParams(*bumped), cs)
            bumped[j] = vals[j] - h
            lo = contact_force(ContactParams(*bumped), cs)
            fd[0, j] = (hi.lambda_n - lo.lambda_n) / (2 * h)
            fd[1, j] = (hi.lambda_t - lo.lambda_t) / (2 * h)
        worst = max(worst, np.abs(an - fd).max())
    print(f"  {checked} interior draws, worst abs deviation {worst:.2e}")


if __name__ == "__main__":
    main()
