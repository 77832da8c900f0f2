"""Soft contact force law, signed-distance geometry, and analytic derivatives.

The normal force is a spring-damper clamped at zero,

    lambda_n = max(0, -K * phi_n - C * |v_n|),

and the tangential force saturates on a Coulomb cone,

    lambda_t = sign(v_t) * max(-mu * lambda_n, -R * |v_t|),

so |lambda_t| = min(mu * lambda_n, R * |v_t|) always opposes sliding.  phi_n
is the signed gap (negative in penetration), v_n / v_t the relative contact
velocity split along the contact normal / tangent.

Kink conventions used by every derivative in the package: the outer max picks
the zero branch exactly at activation, the inner max picks the resistance (R)
branch on ties, and sign(0) = 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

__all__ = [
    "ContactParams",
    "ContactState",
    "ContactForce",
    "HalfSpace",
    "Sphere",
    "Box2D",
    "SDFResult",
    "sdf_eval",
    "contact_state_from",
    "contact_force",
    "contact_force_grad",
    "PARAM_ORDER",
    "STATE_ORDER",
]

PARAM_ORDER = ("stiffness", "damping", "friction_coeff", "friction_resistance")
STATE_ORDER = ("phi_n", "v_n", "v_t")


@dataclass(frozen=True)
class ContactParams:
    """Soft contact material parameters (K, C, mu, R) — all nonnegative."""

    stiffness: float
    damping: float = 0.0
    friction_coeff: float = 0.0
    friction_resistance: float = 0.0

    def __post_init__(self):
        for name in PARAM_ORDER:
            v = float(getattr(self, name))
            if not np.isfinite(v) or v < 0.0:
                raise ValueError(f"contact parameter {name} must be finite and >= 0")
            object.__setattr__(self, name, v)

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, n) for n in PARAM_ORDER])

    def replace(self, **kw) -> "ContactParams":
        d = {n: getattr(self, n) for n in PARAM_ORDER}
        d.update(kw)
        return ContactParams(**d)


@dataclass(frozen=True)
class ContactState:
    """Gap + relative velocity of one contact pair in the contact frame."""

    phi_n: float
    v_n: float
    v_t: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "phi_n", float(self.phi_n))
        object.__setattr__(self, "v_n", float(self.v_n))
        object.__setattr__(self, "v_t", float(self.v_t))


@dataclass(frozen=True)
class ContactForce:
    """Normal/tangential force magnitudes in the contact frame (N)."""

    lambda_n: float
    lambda_t: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "lambda_n", float(self.lambda_n))
        object.__setattr__(self, "lambda_t", float(self.lambda_t))

    def as_array(self) -> np.ndarray:
        return np.array([self.lambda_n, self.lambda_t])


# ---------------------------------------------------------------------------
# Signed distance fields
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SDFResult:
    """phi, outward unit normal, and shape derivatives at the query point.

    dphi_dshape has one entry per shape parameter (length, width for boxes;
    empty otherwise); dnormal_dshape is (dim, n_shape).
    """

    phi: float
    normal: np.ndarray
    dphi_dshape: np.ndarray
    dnormal_dshape: np.ndarray


@dataclass(frozen=True)
class HalfSpace:
    """phi = normal . p - offset; penetration on the anti-normal side."""

    normal: np.ndarray
    offset: float = 0.0

    def __post_init__(self):
        n = np.atleast_1d(np.asarray(self.normal, dtype=float))
        norm = np.linalg.norm(n)
        if norm == 0.0:
            raise ValueError("half-space normal must be nonzero")
        object.__setattr__(self, "normal", n / norm)
        object.__setattr__(self, "offset", float(self.offset))

    def eval(self, point) -> SDFResult:
        p = np.atleast_1d(np.asarray(point, dtype=float))
        phi = float(self.normal @ p) - self.offset
        d = p.size
        return SDFResult(phi, self.normal.copy(), np.zeros(0), np.zeros((d, 0)))


@dataclass(frozen=True)
class Sphere:
    """phi = |p - center| - radius."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", np.atleast_1d(np.asarray(self.center, dtype=float)))
        r = float(self.radius)
        if r <= 0.0:
            raise ValueError("nonpositive shape parameter")
        object.__setattr__(self, "radius", r)

    def eval(self, point) -> SDFResult:
        p = np.atleast_1d(np.asarray(point, dtype=float))
        rel = p - self.center
        dist = float(np.linalg.norm(rel))
        if dist > 0.0:
            n = rel / dist
        else:
            # center query: any direction works; pick the first axis
            n = np.zeros(p.size)
            n[0] = 1.0
        d = p.size
        return SDFResult(dist - self.radius, n, np.zeros(0), np.zeros((d, 0)))


@dataclass(frozen=True)
class Box2D:
    """Axis-aligned planar box with full extents (length, width) = shape params.

    Outside: phi is the euclidean distance to the box, the normal points away
    from the nearest face/corner.  Inside: phi is minus the distance to the
    nearest face, the normal is that face's outward axis; face ties resolve
    toward the lower axis index.
    """

    center: np.ndarray
    length: float
    width: float

    def __post_init__(self):
        c = np.asarray(self.center, dtype=float).reshape(2)
        l, w = float(self.length), float(self.width)
        if not (l > 0.0 and w > 0.0):
            raise ValueError("nonpositive shape parameter")
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "length", l)
        object.__setattr__(self, "width", w)

    def eval(self, point) -> SDFResult:
        p = np.asarray(point, dtype=float).reshape(2)
        rel = p - self.center
        half = np.array([0.5 * self.length, 0.5 * self.width])
        sgn = np.where(rel >= 0.0, 1.0, -1.0)
        q = np.abs(rel) - half

        if np.any(q > 0.0):
            # outside (or edge-corner region): distance to the clipped point
            d = np.maximum(q, 0.0)
            r = float(np.linalg.norm(d))
            phi = r
            normal = sgn * d / r
            # d phi / d half_i = -d_i / r (only faces with q_i > 0 move the
            # closest point); shape params are full extents, so chain by 1/2
            dphi_dshape = 0.5 * (-d / r)
            # dn_i/dhalf_j = s_i * (-delta_ij * 1[q_j>0] * r + d_i d_j / r) / r^2
            act = (q > 0.0).astype(float)
            dn_dhalf = np.zeros((2, 2))
            for i in range(2):
                for j in range(2):
                    dn_dhalf[i, j] = sgn[i] * (-(i == j) * act[j] * r + d[i] * d[j] / r) / r**2
            dnormal_dshape = 0.5 * dn_dhalf
        else:
            # inside: nearest face along the axis with the largest (least
            # negative) q; np.argmax breaks ties toward the lower index
            a = int(np.argmax(q))
            phi = float(q[a])
            normal = np.zeros(2)
            normal[a] = sgn[a]
            dphi_dshape = np.zeros(2)
            dphi_dshape[a] = -0.5
            dnormal_dshape = np.zeros((2, 2))

        return SDFResult(phi, normal, dphi_dshape, dnormal_dshape)


SDFField = Union[HalfSpace, Sphere, Box2D]


def sdf_eval(field: SDFField, point) -> SDFResult:
    """Evaluate a signed distance field at a point."""
    return field.eval(point)


def contact_state_from(
    robot_position,
    robot_velocity,
    field: SDFField,
    radius: float = 0.0,
) -> Tuple[ContactState, SDFResult]:
    """Contact frame state of a sphere end effector against a field.

    radius shifts the gap (phi = sdf - radius).  In 2-D the tangent is the
    normal rotated +90 degrees; in 1-D there is no tangent motion.
    """
    p = np.atleast_1d(np.asarray(robot_position, dtype=float))
    v = np.atleast_1d(np.asarray(robot_velocity, dtype=float))
    res = sdf_eval(field, p)
    n = res.normal
    v_n = float(n @ v)
    if p.size == 2:
        t = np.array([-n[1], n[0]])
        v_t = float(t @ v)
    else:
        v_t = 0.0
    return ContactState(res.phi - float(radius), v_n, v_t), res


# ---------------------------------------------------------------------------
# Force law
# ---------------------------------------------------------------------------


def _branches(params: ContactParams, cs: ContactState, signed_damping: bool):
    damp = -params.damping * (cs.v_n if signed_damping else abs(cs.v_n))
    inner_n = -params.stiffness * cs.phi_n + damp
    lam_n = max(0.0, inner_n)
    active = inner_n > 0.0  # zero branch exactly at activation
    cone = -params.friction_coeff * lam_n
    resist = -params.friction_resistance * abs(cs.v_t)
    on_cone = cone > resist  # tie -> resistance branch
    s = float(np.sign(cs.v_t))
    lam_t = s * max(cone, resist) + 0.0  # +0.0 canonicalizes -0.0
    return lam_n, lam_t, active, on_cone, s


def contact_force(
    params: ContactParams, cs: ContactState, signed_damping: bool = False
) -> ContactForce:
    """Soft contact force at a contact state.

    Dissipative (lambda_t * v_t <= 0) and cone-bounded
    (|lambda_t| <= mu * lambda_n) on every branch.
    """
    lam_n, lam_t, *_ = _branches(params, cs, signed_damping)
    return ContactForce(lam_n, lam_t)


def contact_force_grad(
    params: ContactParams,
    cs: ContactState,
    wrt: str = "params",
    signed_damping: bool = False,
) -> np.ndarray:
    """Jacobian of (lambda_n, lambda_t).

    wrt='params': (2, 4) over (K, C, mu, R); wrt='state': (2, 3) over
    (phi_n, v_n, v_t).  Piecewise-exact away from kinks; at kinks the branch
    conventions above pick one one-sided derivative deterministically.
    """
    lam_n, lam_t, active, on_cone, s = _branches(params, cs, signed_damping)
    a = 1.0 if active else 0.0
    sv = cs.v_n if signed_damping else abs(cs.v_n)
    if wrt == "params":
        g = np.zeros((2, 4))
        g[0, 0] = -cs.phi_n * a
        g[0, 1] = -sv * a
        if on_cone:
            g[1, 0] = -s * params.friction_coeff * g[0, 0]
            g[1, 1] = -s * params.friction_coeff * g[0, 1]
            g[1, 2] = -s * lam_n
        else:
            g[1, 3] = -s * abs(cs.v_t)
        return g
    if wrt == "state":
        g = np.zeros((2, 3))
        dvn = (1.0 if signed_damping else float(np.sign(cs.v_n)))
        g[0, 0] = -params.stiffness * a
        g[0, 1] = -params.damping * dvn * a
        if on_cone:
            g[1, 0] = -s * params.friction_coeff * g[0, 0]
            g[1, 1] = -s * params.friction_coeff * g[0, 1]
            # s is locally constant where v_t != 0; at v_t == 0 the cone
            # branch cannot be active (cone <= 0 = resist)
        else:
            g[1, 2] = -params.friction_resistance
        return g
    raise ValueError("wrt must be 'params' or 'state'")
