"""Active learning of contact parameters from force measurements.

Soft-contact simulation of four manipulation setups, Fisher-information
experiment planning, contact-aware MAP estimation, and a closed-loop harness
tying them together.
"""

from .contact import (
    Box2D,
    ContactForce,
    ContactParams,
    ContactState,
    HalfSpace,
    Sphere,
    contact_force,
    contact_force_grad,
    contact_state_from,
    sdf_eval,
)
from .core import (
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
)
from .dynamics import (
    DynamicsSpec,
    rollout,
    rollout_with_sensitivity,
    step,
    verify_trajectory,
)
from .estimation import (
    LogPosterior,
    belief_update,
    ca_map_solve,
    grad_log_posterior,
    log_posterior,
)
from .fisher import (
    FisherEngine,
    InfoMatrix,
    condition_bound_check,
    crlb_check,
    fim_for_experiment,
    fim_rollout,
    fim_trajectory,
    psi,
)
from .harness import (
    RunRecord,
    compare_baseline,
    default_sweep_priors,
    emit_landscape,
    persist_run,
    run_active_learning,
    run_robustness_sweep,
)
from .planner import (
    ControlPlan,
    PlannerConfig,
    PlanResult,
    controls_from_plan,
    plan_experiment,
    spline_eval,
    trajectory_cost,
)
from .scenarios import (
    KINDS,
    ContouringModel,
    HeftingModel,
    PinchingModel,
    RubbingModel,
    ScenarioSpec,
    abs_error,
    make_scenario,
    percent_error,
    scenario_config,
    sensor_eval,
    sensor_sample,
)

__version__ = "0.1.0"
