"""Analytical inverse kinematics of the Gen3 Lite by elimination.

The pose equations are reduced to a single degree-16 polynomial in
``T1 = tan(theta1 / 2)``. Every real root is then completed into a full
joint set by back substitution, in the order theta4, theta3 - theta2,
theta5, theta2, theta6, theta3.

All angles handled in this module are DH angles (joint value plus offset)
unless the name says otherwise; :class:`IkSolution.joints` holds joint
values.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from gen3lite_ik.dh import (
    DhChain,
    Pose,
    angle_distance,
    forward_kinematics,
    joint_rotation,
    link_offset,
    wrap_angle,
    wrist_vector,
)
from gen3lite_ik.polynomial import DensePolynomial, half_angle_nodes, interpolate_half_angle, real_roots

# phi(s4) is a sextic once B3 keeps its b5^2 s4^2 term
_S4_SAMPLES = np.array([-1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5])
UNIVARIATE_DEGREE = 16
# below this |s5| the theta6 quotients lose too many digits to trust
WRIST_FALLBACK_S5 = 1e-6


class Branch(str, Enum):
    GENERIC = "generic"
    V_ZERO = "special_V_zero"
    DENOMINATOR_ZERO = "special_denominator_zero"
    THETA1_PI = "theta1_pi"


@dataclass(frozen=True)
class IkOptions:
    """Tolerances for :func:`solve_ik`.

    ``v_zero_tol`` and ``denominator_tol`` are relative: to the coefficient
    scale of the s4 eliminant and to ``max|B|`` respectively (the A
    coefficients are dimensionless and of order one). ``limit_tol`` (rad)
    lets a joint sitting on its limit survive rounding.
    ``joint_polish_iterations`` Gauss-Newton steps on the pose equations
    finish each solution; near-double roots of the polynomial otherwise
    leave errors around 1e-6 rad.
    """

    real_tol: float = 1e-7
    leading_tol: float = 1e-10
    residual_max: float = 1e-6
    dedupe_tol: float = 1e-5
    v_zero_tol: float = 1e-8
    denominator_tol: float = 1e-4
    c4_tol: float = 1e-9
    singular_tol: float = 1e-9
    cluster_tol: float = 1e-3
    polish_iterations: int = 30
    joint_polish_iterations: int = 3
    limit_tol: float = 1e-9


@dataclass(frozen=True)
class AbCoefficients:
    A1: float
    A2: float
    A3: float
    B1: float
    B2: float
    B3: float

    @property
    def denominator(self) -> float:
        """B2*A1 - A2*B1; zero when the two equations in theta3 - theta2 are parallel."""
        return self.B2 * self.A1 - self.A2 * self.B1

    def eliminant(self) -> float:
        return (
            (self.A2 * self.B3 - self.A3 * self.B2) ** 2
            + (self.A3 * self.B1 - self.A1 * self.B3) ** 2
            - (self.A1 * self.B2 - self.A2 * self.B1) ** 2
        )


@dataclass(frozen=True)
class IkSolution:
    joints: np.ndarray
    t1_root: float
    residual: float
    within_limits: bool
    branch: Branch = Branch.GENERIC
    wrist_singular: bool = False

    @property
    def t1_at_infinity(self) -> bool:
        return math.isinf(self.t1_root)

    def to_dict(self) -> dict:
        return {
            "joints": [float(v) for v in self.joints],
            "t1_root": None if self.t1_at_infinity else float(self.t1_root),
            "residual": float(self.residual),
            "within_limits": bool(self.within_limits),
            "branch": self.branch.value,
            "wrist_singular": bool(self.wrist_singular),
        }


@dataclass(frozen=True)
class SolutionSet:
    """Deduplicated IK solutions of one target pose.

    ``feasible`` indexes into ``all``. ``rejected`` lists ``(theta1, reason)``
    for every candidate root that produced no accepted solution.
    """

    target: Pose
    all: list
    feasible: list
    rejected: list = field(default_factory=list)

    def __len__(self):
        return len(self.all)

    @property
    def feasible_solutions(self) -> list:
        return [self.all[i] for i in self.feasible]

    def joints_array(self, feasible_only: bool = False) -> np.ndarray:
        sols = self.feasible_solutions if feasible_only else self.all
        return np.array([s.joints for s in sols]).reshape(-1, 6)


def c4_of_theta1(theta1: float, r, chain: DhChain = DhChain()) -> float:
    """cos(theta4) forced by the position equations. Not clamped to [-1, 1]."""
    b = chain.b
    return (r[0] * math.sin(theta1) - r[1] * math.cos(theta1) + b[2] - b[1]) / b[4]


def _ab_arrays(c1, s1, s4, c4, Q, r, chain: DhChain):
    a2 = chain.a[1]
    b1, b4, b5 = chain.b[0], chain.b[3], chain.b[4]
    q13, q23, q33 = Q[0, 2], Q[1, 2], Q[2, 2]
    h = r[2] - b1
    g = r[0] * c1 + r[1] * s1
    return (
        -q33 * s4,
        q13 * c1 * s4 + q23 * s1 * s4,
        q13 * c4 * s1 - q23 * c1 * c4,
        2 * h * b5 * s4 - 2 * g * b4,
        -2 * b4 * h - 2 * b5 * s4 * g,
        h**2 + g**2 + b4**2 + b5**2 * s4**2 - a2**2,
    )


def ab_coefficients(theta1: float, s4: float, c4: float, pose: Pose, r, chain: DhChain = DhChain()) -> AbCoefficients:
    """Coefficients of the two linear equations in sin/cos(theta3 - theta2).

    ``B1 s + B2 c + B3 = 0`` comes from the position loop and
    ``A1 s + A2 c + A3 = 0`` from the wrist orientation.
    """
    values = _ab_arrays(math.cos(theta1), math.sin(theta1), s4, c4, pose.Q, r, chain)
    return AbCoefficients(*(float(v) for v in values))


def _eliminant(A1, A2, A3, B1, B2, B3):
    return (A2 * B3 - A3 * B2) ** 2 + (A3 * B1 - A1 * B3) ** 2 - (A1 * B2 - A2 * B1) ** 2


# maps eliminant samples at _S4_SAMPLES to its coefficients in s4
_S4_FIT = np.linalg.inv(np.vander(_S4_SAMPLES, _S4_SAMPLES.size, increasing=True))


@dataclass(frozen=True)
class VWSplit:
    V: float
    W: float
    c4: float
    scale: float

    @property
    def feasible(self) -> bool:
        return abs(self.c4) <= 1.0 + 1e-12

    def __iter__(self):
        return iter((self.V, self.W))


def _vw_arrays(theta1, pose: Pose, r, chain: DhChain):
    """Vectorised V, W, c4 and eliminant scale for an array of theta1."""
    theta1 = np.asarray(theta1, dtype=float)
    c1, s1 = np.cos(theta1), np.sin(theta1)
    b = chain.b
    c4 = (r[0] * s1 - r[1] * c1 + b[2] - b[1]) / b[4]
    s4 = _S4_SAMPLES.reshape((-1,) + (1,) * theta1.ndim)
    samples = _eliminant(*_ab_arrays(c1, s1, s4, c4, pose.Q, r, chain))
    coeffs = np.tensordot(_S4_FIT, samples, axes=1)
    sigma_sq = 1.0 - c4 * c4
    V = np.zeros_like(c4)
    W = np.zeros_like(c4)
    for k in range(coeffs.shape[0]):
        if k % 2:
            V = V + coeffs[k] * sigma_sq ** ((k - 1) // 2)
        else:
            W = W + coeffs[k] * sigma_sq ** (k // 2)
    return V, W, c4, np.max(np.abs(coeffs), axis=0)


def vw_split(theta1: float, pose: Pose, r, chain: DhChain = DhChain()) -> VWSplit:
    """Reduce the eliminant to ``V s4 + W`` using ``s4**2 = 1 - c4**2``.

    The eliminant is sampled at seven values of s4, fitted exactly as a
    sextic, and reduced modulo ``s4**2 - (1 - c4**2)``. The reduction is
    formal, so V and W are defined even where ``|c4| > 1``;
    ``VWSplit.feasible`` reports whether a real s4 exists. ``scale`` is the
    largest eliminant coefficient.
    """
    V, W, c4, scale = _vw_arrays(theta1, pose, r, chain)
    return VWSplit(float(V), float(W), float(c4), float(scale))


def _univariate_trig(theta1, pose: Pose, r, chain: DhChain):
    V, W, c4, _ = _vw_arrays(theta1, pose, r, chain)
    b5 = chain.b[4]
    return b5**2 * W**2 + ((b5 * c4) ** 2 - b5**2) * V**2


def univariate_eval(T1: float, pose: Pose, chain: DhChain = DhChain()) -> float:
    """The theta1 eliminant times ``(1 + T1**2)**8``, a degree-16 polynomial in T1."""
    r = wrist_vector(pose, chain)
    T1 = np.asarray(T1, dtype=float)
    out = _univariate_trig(2.0 * np.arctan(T1), pose, r, chain) * (1.0 + T1 * T1) ** 8
    return out if out.ndim else float(out)


def build_univariate(pose: Pose, chain: DhChain = DhChain()) -> DensePolynomial:
    """Coefficients E_0..E_16 of the univariate polynomial in T1 = tan(theta1 / 2).

    Interpolates :func:`univariate_eval` at the 17 nodes ``tan(theta_k / 2)``
    for theta_k equally spaced on the circle.
    """
    r = wrist_vector(pose, chain)
    samples = _univariate_trig(half_angle_nodes(UNIVARIATE_DEGREE + 1), pose, r, chain)
    return interpolate_half_angle(samples, UNIVARIATE_DEGREE // 2)


def fk_residual(joints, target: Pose, chain: DhChain = DhChain()) -> float:
    """Position error (m) plus Frobenius orientation error; a mixed-unit diagnostic."""
    pose = forward_kinematics(joints, chain)
    return float(np.linalg.norm(pose.p - target.p) + np.linalg.norm(pose.Q - target.Q))


def _make_solution(dh, t1_root, pose, chain, branch, singular, limit_tol=0.0) -> IkSolution:
    joints = chain.joint_values(dh)
    return IkSolution(
        joints=joints,
        t1_root=t1_root,
        residual=fk_residual(joints, pose, chain),
        within_limits=chain.within_limits(joints, limit_tol),
        branch=branch,
        wrist_singular=singular,
    )


def _m_column(c1, s1, c32, s32, Q) -> tuple:
    """Third column of the wrist rotation: ``(c4 s5, s4 s5, -c5)``."""
    u = Q[0, 2] * c1 + Q[1, 2] * s1
    m13 = u * c32 - Q[2, 2] * s32
    m23 = -Q[0, 2] * s1 + Q[1, 2] * c1
    m33 = u * s32 + Q[2, 2] * c32
    return m13, m23, m33


def _complete(theta1, theta4, theta32, pose, r, chain, branch, opts, t1_root) -> IkSolution:
    """Back substitute theta5, theta2, theta6, theta3 from theta1, theta4, theta3-theta2."""
    a2 = chain.a[1]
    b1, b4, b5 = chain.b[0], chain.b[3], chain.b[4]
    Q = pose.Q
    c1, s1 = math.cos(theta1), math.sin(theta1)
    c4, s4 = math.cos(theta4), math.sin(theta4)
    c32, s32 = math.cos(theta32), math.sin(theta32)

    m13, m23, m33 = _m_column(c1, s1, c32, s32, Q)
    c5 = -m33
    s5 = m23 / s4 if abs(s4) >= abs(c4) else m13 / c4
    theta5 = math.atan2(s5, c5)

    g = r[0] * c1 + r[1] * s1
    c2 = (g - b5 * c32 * s4 - b4 * s32) / a2
    s2 = (r[2] - b1 + b5 * s32 * s4 - b4 * c32) / a2
    theta2 = math.atan2(s2, c2)

    theta3 = theta32 + theta2
    if abs(s5) >= WRIST_FALLBACK_S5:
        # c6 = n6c / s5 and s6 = n6s / -s5; only the sign of s5 matters to atan2
        n6c = (Q[0, 0] * c1 + Q[1, 0] * s1) * s32 + Q[2, 0] * c32
        n6s = (Q[0, 1] * c1 + Q[1, 1] * s1) * s32 + Q[2, 1] * c32
        sign5 = 1.0 if s5 >= 0.0 else -1.0
        theta6 = math.atan2(-n6s * sign5, n6c * sign5)
    else:
        # both quotients are 0/0 here; read theta6 off what is left of Q after joint 5
        R = np.eye(3)
        for theta, alpha in zip((theta1, theta2, theta3, theta4, theta5), chain.alpha[:5]):
            R = R @ joint_rotation(theta, alpha)
        R6 = R.T @ Q
        theta6 = math.atan2(R6[1, 0], R6[0, 0])
    singular = abs(s5) < opts.singular_tol

    dh = np.array([theta1, theta2, theta3, theta4, theta5, theta6])
    return _make_solution(dh, t1_root, pose, chain, branch, singular, opts.limit_tol)


def _theta32_linear(ab: AbCoefficients) -> float:
    # Cramer on [B1 B2; A1 A2] [s; c] = -[B3; A3]
    det = ab.B1 * ab.A2 - ab.B2 * ab.A1
    s32 = (-ab.B3 * ab.A2 + ab.A3 * ab.B2) / det
    c32 = (-ab.B1 * ab.A3 + ab.A1 * ab.B3) / det
    return math.atan2(s32, c32)


def _half_angle_solutions(A: float, B: float, C: float, tol: float = 1e-12) -> list:
    """Angles x with ``A sin x + B cos x + C = 0`` via ``t = tan(x/2)``.

    Substitution gives ``(C - B) t**2 + 2 A t + (B + C) = 0``; a vanishing
    quadratic term means x = pi is a solution.
    """
    qa, qb, qc = C - B, 2.0 * A, B + C
    scale = max(abs(qa), abs(qb), abs(qc))
    if scale == 0.0:
        return []
    out = []
    if abs(qa) <= tol * scale:
        out.append(math.pi)
        if abs(qb) > tol * scale:
            out.append(2.0 * math.atan(-qc / qb))
        return out
    disc = qb * qb - 4.0 * qa * qc
    if disc < -tol * scale * scale:
        return []
    root = math.sqrt(max(disc, 0.0))
    for t in {(-qb + root) / (2.0 * qa), (-qb - root) / (2.0 * qa)}:
        out.append(2.0 * math.atan(t))
    return out


def _continue_from_theta4(theta1, theta4, pose, r, chain, branch, opts, t1_root) -> list:
    s4, c4 = math.sin(theta4), math.cos(theta4)
    ab = ab_coefficients(theta1, s4, c4, pose, r, chain)
    # A is built from rotation entries times s4, c4 and is O(1) by nature; measuring
    # D against max|A| would hide the s4 -> 0 collapse where A vanishes entirely
    scale = max(abs(ab.B1), abs(ab.B2), abs(ab.B3))
    if abs(ab.denominator) <= opts.denominator_tol * scale:
        return _denominator_zero(theta1, theta4, ab, pose, r, chain, opts, t1_root)
    return [_complete(theta1, theta4, _theta32_linear(ab), pose, r, chain, branch, opts, t1_root)]


def _denominator_zero(theta1, theta4, ab, pose, r, chain, opts, t1_root) -> list:
    norm_a = math.hypot(ab.A1, ab.A2)
    norm_b = math.hypot(ab.B1, ab.B2)
    coeffs = (ab.A1, ab.A2, ab.A3) if norm_a >= norm_b else (ab.B1, ab.B2, ab.B3)
    c1, s1 = math.cos(theta1), math.sin(theta1)
    out = []
    for theta32 in _half_angle_solutions(*coeffs):
        # D vanishes with s4, where s4 = +-sqrt(1 - c4**2) is poorly determined;
        # (m13, m23) = s5 (c4, s4) pins theta4 down unless the wrist is singular
        m13, m23, _ = _m_column(c1, s1, math.cos(theta32), math.sin(theta32), pose.Q)
        t4 = theta4
        if math.hypot(m13, m23) > opts.singular_tol:
            t4 = min((math.atan2(m23, m13), math.atan2(-m23, -m13)),
                     key=lambda x: float(angle_distance(x, theta4)))
        out.append(_complete(theta1, t4, theta32, pose, r, chain, Branch.DENOMINATOR_ZERO, opts, t1_root))
    return out


def special_case_V_zero(theta1: float, pose: Pose, chain: DhChain = DhChain(), opts: IkOptions = IkOptions(),
                        t1_root: float | None = None) -> list:
    """Both theta4 = +-arccos(c4) when s4 drops out of ``V s4 + W = 0``."""
    r = wrist_vector(pose, chain)
    c4 = c4_of_theta1(theta1, r, chain)
    if abs(c4) > 1.0 + opts.c4_tol:
        return []
    t1 = math.tan(theta1 / 2.0) if t1_root is None else t1_root
    base = math.acos(max(-1.0, min(1.0, c4)))
    branches = [base] if base == 0.0 or base == math.pi else [base, -base]
    out = []
    for theta4 in branches:
        out.extend(_continue_from_theta4(theta1, theta4, pose, r, chain, Branch.V_ZERO, opts, t1))
    return out


def special_case_denominator_zero(theta1: float, s4: float, c4: float, pose: Pose, chain: DhChain = DhChain(),
                                  opts: IkOptions = IkOptions(), t1_root: float | None = None) -> list:
    """Solve for theta3 - theta2 from a single equation when the 2x2 system is singular."""
    r = wrist_vector(pose, chain)
    theta4 = math.atan2(s4, c4)
    ab = ab_coefficients(theta1, math.sin(theta4), math.cos(theta4), pose, r, chain)
    t1 = math.tan(theta1 / 2.0) if t1_root is None else t1_root
    return _denominator_zero(theta1, theta4, ab, pose, r, chain, opts, t1)


def back_substitute(theta1: float, pose: Pose, chain: DhChain = DhChain(), opts: IkOptions = IkOptions(),
                    t1_root: float | None = None, s4: float | None = None) -> list:
    """All joint sets sharing the DH angle ``theta1``.

    One solution in the generic case; the special cases may yield two.
    Returns an empty list when no real theta4 exists. ``s4`` overrides
    ``-W/V`` when the caller already solved ``V s4 + W = 0`` jointly with
    ``s4**2 + c4**2 = 1``.
    """
    r = wrist_vector(pose, chain)
    split = vw_split(theta1, pose, r, chain)
    if abs(split.c4) > 1.0 + opts.c4_tol:
        return []
    if t1_root is None:
        t1_root = math.tan(theta1 / 2.0)
    branch = Branch.THETA1_PI if math.isinf(t1_root) else Branch.GENERIC
    if abs(split.V) <= opts.v_zero_tol * split.scale:
        return special_case_V_zero(theta1, pose, chain, opts, t1_root)
    if s4 is None:
        s4 = -split.W / split.V
    theta4 = math.atan2(s4, split.c4)
    return _continue_from_theta4(theta1, theta4, pose, r, chain, branch, opts, t1_root)


def _refine_roots(theta1, s4, pose: Pose, r, chain: DhChain, iterations: int):
    """Newton on ``V(theta1) s4 + W(theta1) = 0``, ``s4**2 + c4(theta1)**2 = 1``.

    The univariate equation is the resultant of this pair in s4, so its
    roots are the theta1 components of the pair's solutions. Unlike the
    resultant, the pair keeps the two s4 = +-sqrt(1 - c4**2) branches apart,
    so roots that nearly coincide in theta1 stay simple here. Vectorised
    over starting points; the best iterate of each start is returned.
    """
    b = chain.b
    h = 1e-7
    x = np.array(theta1, dtype=float)
    y = np.array(s4, dtype=float)

    def evaluate(x, y):
        V, W, c4, scale = _vw_arrays(x, pose, r, chain)
        F1, F2 = V * y + W, y * y + c4 * c4 - 1.0
        merit = np.abs(F1) / np.where(scale > 0, scale, 1.0) + np.abs(F2)
        return F1, F2, V, c4, merit

    F1, F2, V, c4, merit = evaluate(x, y)
    best_x, best_y, best_merit = x.copy(), y.copy(), merit
    for _ in range(iterations):
        Vp, Wp, _, _ = _vw_arrays(x + h, pose, r, chain)
        Vm, Wm, _, _ = _vw_arrays(x - h, pose, r, chain)
        j11 = ((Vp - Vm) * y + (Wp - Wm)) / (2 * h)
        j12 = V
        j21 = 2 * c4 * (r[0] * np.cos(x) + r[1] * np.sin(x)) / b[4]
        j22 = 2 * y
        det = j11 * j22 - j12 * j21
        ok = np.isfinite(det) & (det != 0.0)
        if not np.any(ok):
            break
        safe = np.where(ok, det, 1.0)
        x = x - np.where(ok, (F1 * j22 - F2 * j12) / safe, 0.0)
        y = y - np.where(ok, (j11 * F2 - j21 * F1) / safe, 0.0)
        F1, F2, V, c4, merit = evaluate(x, y)
        improved = merit < best_merit
        best_x = np.where(improved, x, best_x)
        best_y = np.where(improved, y, best_y)
        best_merit = np.where(improved, merit, best_merit)
        if np.all(best_merit < 1e-15):
            break
    return best_x, best_y


def _pose_error_jacobian(joints, pose: Pose, chain: DhChain):
    """Stacked position and orientation error, and its analytic Jacobian (12 x 6)."""
    theta = chain.dh_angles(joints)
    p, R = np.zeros(3), np.eye(3)
    axes, origins = [], []
    for i in range(6):
        axes.append(R[:, 2])
        origins.append(p)
        p = p + R @ link_offset(theta[i], chain.a[i], chain.b[i])
        R = R @ joint_rotation(theta[i], chain.alpha[i])
    J = np.empty((12, 6))
    for i, (z, o) in enumerate(zip(axes, origins)):
        J[:3, i] = np.cross(z, p - o)
        J[3:, i] = np.cross(z[:, None], R, axis=0).ravel()
    return np.concatenate([p - pose.p, (R - pose.Q).ravel()]), J


def _polish_joints(sol: IkSolution, pose: Pose, chain: DhChain, opts: IkOptions) -> IkSolution:
    # rank-deficient at the wrist singularity, where the fallback is already exact
    if sol.wrist_singular or sol.residual < 1e-13:
        return sol
    q, best = np.array(sol.joints, dtype=float), sol
    for _ in range(opts.joint_polish_iterations):
        e, J = _pose_error_jacobian(q, pose, chain)
        step = np.linalg.lstsq(J, e, rcond=None)[0]
        # a polish, not a search: large steps mean the branch is being left
        if np.max(np.abs(step)) > 1e-3:
            break
        q = wrap_angle(q - step)
        residual = fk_residual(q, pose, chain)
        if residual >= best.residual:
            break
        best = replace(best, joints=q, residual=residual,
                       within_limits=chain.within_limits(q, opts.limit_tol))
    return best


def _dedupe(solutions: list, tol: float) -> list:
    kept = []
    for sol in sorted(solutions, key=lambda s: s.residual):
        if all(np.max(angle_distance(sol.joints, k.joints)) > tol for k in kept):
            kept.append(sol)
    return kept


def solve_ik(pose: Pose, chain: DhChain = DhChain(), opts: IkOptions = IkOptions()) -> SolutionSet:
    """Every joint set of ``chain`` reaching ``pose``.

    Solutions are deduplicated, filtered by FK residual, and sorted by
    joint 1 then joint 4; ``feasible`` marks those inside the joint limits.
    """
    r = wrist_vector(pose, chain)
    poly = build_univariate(pose, chain)
    rejected = []
    if poly.scale() == 0.0:
        return SolutionSet(target=pose, all=[], feasible=[], rejected=rejected)

    # near-real eigenvalues are kept too: clustered roots drift off the axis
    roots = real_roots(poly, max(opts.real_tol, opts.cluster_tol), opts.leading_tol)
    t1 = np.array(list(roots.roots) + ([math.inf] * bool(roots.trimmed)))
    theta1 = 2.0 * np.arctan(t1)
    if theta1.size == 0:
        return SolutionSet(target=pose, all=[], feasible=[], rejected=rejected)

    # refine from both s4 branches of every candidate
    c4 = np.clip(_vw_arrays(theta1, pose, r, chain)[2], -1.0, 1.0)
    sigma = np.sqrt(1.0 - c4 * c4)
    start_t1 = np.concatenate([t1, t1])
    start_theta1 = np.concatenate([theta1, theta1])
    refined, refined_s4 = _refine_roots(start_theta1, np.concatenate([sigma, -sigma]), pose, r, chain,
                                        opts.polish_iterations)

    found = []
    for theta, s4, t in zip(refined, refined_s4, start_t1):
        t_root = t if math.isinf(t) else math.tan(theta / 2.0)
        sols = back_substitute(float(theta), pose, chain, opts, t_root, float(s4))
        if not sols:
            rejected.append((float(theta), "no real theta4 (|c4| > 1) or no real theta3 - theta2"))
            continue
        good = [p for p in (_polish_joints(s, pose, chain, opts) for s in sols) if p.residual < opts.residual_max]
        if not good:
            rejected.append((float(theta), f"residual {min(s.residual for s in sols):.3g} above threshold"))
        found.extend(good)

    unique = _dedupe(found, opts.dedupe_tol)
    unique.sort(key=lambda s: (s.joints[0], s.joints[3]))
    feasible = [i for i, s in enumerate(unique) if s.within_limits and not s.wrist_singular]
    return SolutionSet(target=pose, all=unique, feasible=feasible, rejected=rejected)
