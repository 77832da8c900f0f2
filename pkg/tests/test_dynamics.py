"""Stepping semantics, rollout contracts, and sensitivity propagation."""

import numpy as np
import pytest

from contactlearn.core import ControlInput, RobotState, substream
from contactlearn.dynamics import (
    DynamicsSpec,
    integrate_robot,
    rollout,
    rollout_with_sensitivity,
    step,
    verify_trajectory,
)
from contactlearn.scenarios import ScenarioSpec, make_scenario


def const_controls(cmd, n):
    return tuple(ControlInput(cmd) for _ in range(n))


class TestDynamicsSpec:
    def test_validation(self):
        with pytest.raises(ValueError):
            DynamicsSpec(workspace=[[0.0, 1.0]], velocity_bounds=[[1.0, -1.0]])
        with pytest.raises(ValueError):
            DynamicsSpec(workspace=[[0.0, 1.0]], velocity_bounds=[[-1.0, 1.0]], dt=0.0)
        with pytest.raises(ValueError):
            DynamicsSpec(
                workspace=[[0.0, 1.0]], velocity_bounds=[[-1.0, 1.0]], object_substeps=0
            )

    def test_integrate_robot_clamps_command_and_position(self):
        dyn = DynamicsSpec(workspace=[[0.0, 1.0]], velocity_bounds=[[-1.0, 1.0]], dt=0.02)
        p1, v = integrate_robot(dyn, np.array([0.5]), np.array([5.0]))
        assert p1[0] == pytest.approx(0.52)  # command clamped to 1.0
        assert v[0] == pytest.approx(1.0)
        p1, v = integrate_robot(dyn, np.array([0.99995]), np.array([1.0]))
        assert p1[0] == pytest.approx(1.0)  # position clipped at the workspace
        assert v[0] == pytest.approx(0.0025)  # realized velocity reflects the clip


class TestRolloutContracts:
    def test_shapes_and_dt(self):
        sc = make_scenario("rubbing")
        x0 = sc.model.initial_state(sc.true_params.values)
        traj = rollout(sc.dynamics, sc, x0, const_controls([0.1, -0.2], 7), sc.true_params.values)
        assert len(traj.states) == 8 and len(traj.contacts) == 7
        assert traj.dt == sc.dynamics.dt

    def test_realized_velocity_stored(self):
        sc = make_scenario("rubbing")
        x0 = sc.model.initial_state(sc.true_params.values)
        x1, _ = step(sc.dynamics, sc, x0, ControlInput([-0.4, 0.3]), sc.true_params.values)
        np.testing.assert_allclose(
            x1.velocity, (x1.position - x0.position) / sc.dynamics.dt, atol=1e-14
        )

    def test_measurement_is_post_step_contact_is_pre_step(self):
        # start just clear of the wall, command straight in: the step's stored
        # contact (pre-state) is zero while the post-step measurement sees force
        sc = make_scenario("rubbing")
        th = sc.true_params.values
        x0 = RobotState([sc.model.ee_radius + 0.005, 0.8], [0.0, 0.0])
        traj = rollout(sc.dynamics, sc, x0, const_controls([-1.0, 0.0], 1), th)
        assert traj.contacts[0].lambda_n == 0.0
        y = sc.model.measure(traj.states[1], th)
        assert y[0] > 0.0

    def test_diverged_rollout_raises(self):
        # one substep at dt=0.02 makes the explicit drag term unstable for a
        # light ball (b*h/m >> 2), so free fall blows up within a few steps
        sc = make_scenario("hefting")
        dyn = DynamicsSpec(
            workspace=sc.dynamics.workspace,
            velocity_bounds=sc.dynamics.velocity_bounds,
            dt=sc.dynamics.dt,
            object_mass=sc.dynamics.object_mass,
            object_substeps=1,
            object_drag=sc.dynamics.object_drag,
        )
        bad = ScenarioSpec(sc.name, sc.model, dyn, sc.true_params, sc.prior, sc.noise_std)
        x0 = bad.model.initial_state([0.001])
        with pytest.raises(ValueError, match="diverged rollout"):
            rollout(dyn, bad, x0, const_controls([-1.0], 50), [0.001])

    def test_verify_consistency(self):
        for kind in ("hefting", "rubbing", "pinching", "contouring"):
            sc = make_scenario(kind)
            th = sc.true_params.values
            x0 = sc.model.initial_state(th)
            rng = substream(5, 3)
            ctr = tuple(
                ControlInput(rng.normal(0.0, 0.3, sc.dynamics.dof)) for _ in range(8)
            )
            traj = rollout(sc.dynamics, sc, x0, ctr, th)
            assert verify_trajectory(sc, traj, th) == pytest.approx(0.0, abs=1e-12)

    def test_verify_flags_wrong_params(self):
        sc = make_scenario("pinching")
        x0 = sc.model.initial_state(sc.true_params.values)
        ctr = const_controls([-0.1], 10)  # squeeze into contact
        traj = rollout(sc.dynamics, sc, x0, ctr, sc.true_params.values)
        assert verify_trajectory(sc, traj, [400.0, 10.0]) > 0.1


class TestHeftingPhysics:
    def test_equilibrium_holds_exactly(self):
        # the initial state balances spring and weight; zero commands keep it
        sc = make_scenario("hefting")
        m = sc.true_params.values[0]
        x0 = sc.model.initial_state(sc.true_params.values)
        traj = rollout(sc.dynamics, sc, x0, const_controls([0.0], 20), sc.true_params.values)
        g = sc.dynamics.gravity
        for lam in traj.contacts[1:]:
            assert lam.lambda_n == pytest.approx(m * g, rel=1e-9)
        assert traj.states[-1].obj.velocity[0] == pytest.approx(0.0, abs=1e-12)

    def test_dropping_hand_breaks_contact(self):
        sc = make_scenario("hefting")
        th = sc.true_params.values
        x0 = sc.model.initial_state(th)
        traj = rollout(sc.dynamics, sc, x0, const_controls([-1.0], 10), th)
        # hand retreats at 1 m/s; ball can't follow that fast, so force drops to 0
        assert traj.contacts[-1].lambda_n == 0.0

    def test_lifting_increases_support_force(self):
        sc = make_scenario("hefting")
        th = sc.true_params.values
        x0 = sc.model.initial_state(th)
        up = rollout(sc.dynamics, sc, x0, const_controls([0.4], 5), th)
        m, g = th[0], sc.dynamics.gravity
        # accelerating the ball upward needs more than its weight on average
        mean_force = np.mean([c.lambda_n for c in up.contacts[1:]])
        assert mean_force > m * g


class TestSensitivityPropagation:
    def drive_controls(self, kind, sc):
        if kind == "hefting":
            return const_controls([0.5], 4) + const_controls([-0.2], 6)
        if kind == "rubbing":
            return const_controls([-0.6, 0.4], 10)
        if kind == "pinching":
            return const_controls([-0.08], 6) + const_controls([0.05], 4)
        return const_controls([0.2, 0.35], 4) + const_controls([0.3, 0.0], 6)

    def test_matches_finite_differences(self):
        for kind in ("hefting", "rubbing", "pinching", "contouring"):
            sc = make_scenario(kind)
            th = sc.true_params.values.copy()
            x0 = sc.model.initial_state(th)
            ctr = self.drive_controls(kind, sc)
            _, ys, gs = rollout_with_sensitivity(sc.dynamics, sc, x0, ctr, th)
            ref = np.zeros_like(gs)
            for j in range(th.size):
                h = 1.0e-6 * max(abs(th[j]), 1.0)
                tp, tm = th.copy(), th.copy()
                tp[j] += h
                tm[j] -= h
                _, yp, _ = rollout_with_sensitivity(sc.dynamics, sc, x0, ctr, tp)
                _, ym, _ = rollout_with_sensitivity(sc.dynamics, sc, x0, ctr, tm)
                ref[:, :, j] = (yp - ym) / (2.0 * h)
            scale = np.abs(ref).max() + 1.0
            np.testing.assert_allclose(gs, ref, atol=2e-4 * scale, err_msg=kind)

    def test_predictions_match_plain_rollout(self):
        sc = make_scenario("contouring")
        th = sc.true_params.values
        x0 = sc.model.initial_state(th)
        ctr = self.drive_controls("contouring", sc)
        traj, ys, _ = rollout_with_sensitivity(sc.dynamics, sc, x0, ctr, th)
        plain = rollout(sc.dynamics, sc, x0, ctr, th)
        for a, b in zip(traj.states, plain.states):
            np.testing.assert_array_equal(a.position, b.position)
        for t, x in enumerate(traj.states[1:]):
            np.testing.assert_array_equal(ys[t], sc.model.measure(x, th))
