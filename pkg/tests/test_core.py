"""Value-type validation and deterministic random streams."""

import numpy as np
import pytest

from contactlearn.core import (
    ControlInput,
    Experiment,
    Measurement,
    ObjectState,
    ParamBelief,
    ParamVector,
    RobotState,
    Trajectory,
    seeded_rng,
    substream,
    symmetrize,
)
from contactlearn.contact import ContactForce


class TestRng:
    def test_same_seed_same_stream(self):
        a = seeded_rng(42).normal(size=16)
        b = seeded_rng(42).normal(size=16)
        np.testing.assert_array_equal(a, b)

    def test_different_seeds_differ(self):
        a = seeded_rng(1).normal(size=16)
        b = seeded_rng(2).normal(size=16)
        assert np.any(a != b)

    def test_substream_independent_of_consumption(self):
        # drawing more from one stream must not shift a sibling stream
        r1 = substream(7, 1)
        r1.normal(size=1000)
        a = substream(7, 2, 0).normal(size=8)
        b = substream(7, 2, 0).normal(size=8)
        np.testing.assert_array_equal(a, b)
        assert np.any(substream(7, 2, 1).normal(size=8) != a)


class TestParamVector:
    def test_roundtrip_and_dict(self):
        pv = ParamVector([1.5, 2.0], ("stiffness", "damping"))
        assert pv.dim == 2
        assert pv.as_dict() == {"stiffness": 1.5, "damping": 2.0}

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            ParamVector([np.nan], ("mass",))

    def test_rejects_name_mismatch(self):
        with pytest.raises(ValueError):
            ParamVector([1.0, 2.0], ("mass",))

    def test_values_read_only(self):
        pv = ParamVector([1.0], ("mass",))
        with pytest.raises(ValueError):
            pv.values[0] = 2.0


class TestParamBelief:
    def _mk(self, cov):
        return ParamBelief(
            ParamVector([0.5, 0.5], ("a", "b")), cov, [[0.0, 1.0], [0.0, 1.0]]
        )

    def test_symmetrizes_and_checks_pd(self):
        b = self._mk([[1.0, 0.1], [0.1, 2.0]])
        np.testing.assert_allclose(b.covariance, b.covariance.T)
        with pytest.raises(ValueError):
            self._mk([[1.0, 2.0], [2.0, 1.0]])  # indefinite

    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError):
            self._mk([[1.0, 0.5], [0.0, 1.0]])

    def test_mode_must_be_in_support(self):
        with pytest.raises(ValueError):
            ParamBelief(ParamVector([2.0], ("a",)), [[1.0]], [[0.0, 1.0]])

    def test_precision_inverts(self):
        b = self._mk([[2.0, 0.3], [0.3, 1.0]])
        np.testing.assert_allclose(b.precision() @ b.covariance, np.eye(2), atol=1e-12)

    def test_clip_to_support(self):
        b = self._mk(np.eye(2))
        np.testing.assert_array_equal(b.clip_to_support([-1.0, 2.0]), [0.0, 1.0])


class TestStatesAndTrajectories:
    def test_robot_state_shape_check(self):
        with pytest.raises(ValueError):
            RobotState([1.0, 2.0], [0.0])

    def test_object_state_attaches(self):
        x = RobotState([0.1], [0.0], ObjectState([0.2], [0.0]))
        assert x.obj is not None and x.dof == 1

    def test_trajectory_length_contract(self):
        xs = tuple(RobotState([float(i)], [0.0]) for i in range(3))
        cs = (ContactForce(0.0, 0.0),) * 2
        traj = Trajectory(xs, cs, 0.02)
        assert traj.horizon == 2
        with pytest.raises(ValueError):
            Trajectory(xs, cs[:1], 0.02)

    def test_experiment_alignment(self):
        xs = tuple(RobotState([float(i)], [0.0]) for i in range(3))
        cs = (ContactForce(0.0, 0.0),) * 2
        traj = Trajectory(xs, cs, 0.02)
        controls = (ControlInput([0.1]), ControlInput([0.2]))
        meas = (Measurement([0.0]), Measurement([0.1]))
        e = Experiment(traj, controls, meas, [0.25])
        assert e.horizon == 2
        np.testing.assert_array_equal(e.stacked_measurements(), [[0.0], [0.1]])
        with pytest.raises(ValueError):
            Experiment(traj, controls, meas[:1], [0.25])
        with pytest.raises(ValueError):
            Experiment(traj, controls, meas, [0.0])  # nonpositive noise

    def test_symmetrize(self):
        m = np.array([[1.0, 2.0], [0.0, 1.0]])
        s = symmetrize(m)
        np.testing.assert_array_equal(s, s.T)
        np.testing.assert_allclose(s[0, 1], 1.0)
