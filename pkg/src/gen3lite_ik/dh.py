"""Denavit-Hartenberg primitives and forward kinematics for the Gen3 Lite.

Frames follow the (a, b, alpha) convention: ``Q_i`` rotates frame i into
frame i+1 and ``a_i = [a cos(theta), a sin(theta), b]`` joins their origins,
expressed in frame i.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

N_JOINTS = 6

# Gen3 Lite geometry (meters / radians) and joint limits (degrees).
GEN3_LITE_A = (0.0, 0.28, 0.0, 0.0, 0.0, 0.0)
GEN3_LITE_B = (0.2433, 0.03, 0.02, 0.245, 0.057, 0.235)
GEN3_LITE_ALPHA = (math.pi / 2, math.pi, math.pi / 2, math.pi / 2, math.pi / 2, 0.0)
# Joint readings are offset from the DH angles: theta_i = q_i + offset_i.
GEN3_LITE_OFFSET = (0.0, math.pi / 2, math.pi / 2, math.pi / 2, math.pi, math.pi / 2)
GEN3_LITE_LOWER_DEG = (-154.0, -150.0, -150.0, -149.0, -145.0, -149.0)
GEN3_LITE_UPPER_DEG = (154.0, 150.0, 150.0, 149.0, 145.0, 149.0)


def wrap_angle(theta):
    """Map angles to (-pi, pi]. Works elementwise on arrays."""
    wrapped = np.remainder(np.asarray(theta, dtype=float) + np.pi, 2 * np.pi) - np.pi
    wrapped = np.where(wrapped <= -np.pi, wrapped + 2 * np.pi, wrapped)
    if np.ndim(wrapped) == 0:
        return float(wrapped)
    return wrapped


def angle_distance(a, b):
    """Elementwise absolute angular difference, taken modulo 2*pi."""
    return np.abs(wrap_angle(np.asarray(a, dtype=float) - np.asarray(b, dtype=float)))


@dataclass(frozen=True)
class DhChain:
    """Six-link DH table with joint offsets and joint limits.

    Joint values ``q`` (what the controller reports and what the limits
    bound) relate to the DH angles by ``theta = q + offset``. ``lower`` and
    ``upper`` are stored in radians; the JSON form uses degrees.
    """

    a: tuple = GEN3_LITE_A
    b: tuple = GEN3_LITE_B
    alpha: tuple = GEN3_LITE_ALPHA
    offset: tuple = GEN3_LITE_OFFSET
    lower: tuple = field(default=tuple(math.radians(d) for d in GEN3_LITE_LOWER_DEG))
    upper: tuple = field(default=tuple(math.radians(d) for d in GEN3_LITE_UPPER_DEG))

    def __post_init__(self):
        for name in ("a", "b", "alpha", "offset", "lower", "upper"):
            values = tuple(float(v) for v in getattr(self, name))
            if len(values) != N_JOINTS:
                raise ValueError(f"DhChain.{name} needs {N_JOINTS} entries, got {len(values)}")
            if not all(math.isfinite(v) for v in values):
                raise ValueError(f"DhChain.{name} contains non-finite values")
            object.__setattr__(self, name, values)
        for i, (lo, hi) in enumerate(zip(self.lower, self.upper)):
            if not lo < hi:
                raise ValueError(f"joint {i + 1}: lower limit {lo} is not below upper limit {hi}")
        if self.b[4] == 0.0:
            raise ValueError("b5 must be nonzero; wrist-partitioned chains are not supported")

    @property
    def lower_deg(self) -> tuple:
        return tuple(math.degrees(v) for v in self.lower)

    @property
    def upper_deg(self) -> tuple:
        return tuple(math.degrees(v) for v in self.upper)

    def dh_angles(self, joints) -> np.ndarray:
        return np.asarray(joints, dtype=float) + np.asarray(self.offset)

    def joint_values(self, dh_angles) -> np.ndarray:
        """Joint values for the given DH angles, wrapped to (-pi, pi]."""
        return wrap_angle(np.asarray(dh_angles, dtype=float) - np.asarray(self.offset))

    def within_limits(self, joints, tol: float = 0.0) -> bool:
        q = np.asarray(joints, dtype=float)
        return bool(np.all(q >= np.asarray(self.lower) - tol) and np.all(q <= np.asarray(self.upper) + tol))

    def to_dict(self) -> dict:
        return {
            "a": list(self.a),
            "b": list(self.b),
            "alpha": list(self.alpha),
            "offset": list(self.offset),
            "lower_deg": list(self.lower_deg),
            "upper_deg": list(self.upper_deg),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DhChain":
        missing = {"a", "b", "alpha", "lower_deg", "upper_deg"} - set(data)
        if missing:
            raise ValueError(f"chain document missing keys: {sorted(missing)}")
        return cls(
            a=data["a"],
            b=data["b"],
            alpha=data["alpha"],
            offset=data.get("offset", GEN3_LITE_OFFSET),
            lower=[math.radians(float(v)) for v in data["lower_deg"]],
            upper=[math.radians(float(v)) for v in data["upper_deg"]],
        )

    @classmethod
    def from_json(cls, path) -> "DhChain":
        return cls.from_dict(json.loads(Path(path).read_text()))


@dataclass(frozen=True)
class Pose:
    """End-effector position ``p`` (meters) and orientation matrix ``Q``."""

    p: np.ndarray
    Q: np.ndarray

    def __post_init__(self):
        p = np.array(self.p, dtype=float).reshape(3)
        Q = np.array(self.Q, dtype=float).reshape(3, 3)
        if not (np.all(np.isfinite(p)) and np.all(np.isfinite(Q))):
            raise ValueError("pose contains non-finite values")
        if np.max(np.abs(Q @ Q.T - np.eye(3))) > 1e-10 or abs(np.linalg.det(Q) - 1.0) > 1e-10:
            raise ValueError("orientation matrix is not a proper rotation")
        p.setflags(write=False)
        Q.setflags(write=False)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "Q", Q)

    @classmethod
    def from_rpy(cls, position, rpy) -> "Pose":
        return cls(position, rpy_to_matrix(*rpy))

    @property
    def rpy(self) -> tuple:
        roll, pitch, yaw, _ = matrix_to_rpy(self.Q)
        return roll, pitch, yaw

    def as_vector(self) -> np.ndarray:
        """Position followed by roll, pitch, yaw."""
        return np.concatenate([self.p, self.rpy])


def joint_rotation(theta: float, alpha: float) -> np.ndarray:
    ct, st = math.cos(theta), math.sin(theta)
    ca, sa = math.cos(alpha), math.sin(alpha)
    return np.array([
        [ct, -ca * st, sa * st],
        [st, ca * ct, -sa * ct],
        [0.0, sa, ca],
    ])


def link_offset(theta: float, a: float, b: float) -> np.ndarray:
    return np.array([a * math.cos(theta), a * math.sin(theta), b])


def _check_joints(joints) -> np.ndarray:
    q = np.asarray(joints, dtype=float).reshape(-1)
    if q.shape != (N_JOINTS,):
        raise ValueError(f"expected {N_JOINTS} joint values, got {q.size}")
    return q


def frame_origins(joints, chain: DhChain = DhChain()) -> np.ndarray:
    """Origins O_1..O_7 of the DH frames in base coordinates, shape (7, 3).

    O_1 is the base origin and O_7 the end-effector.
    """
    q = chain.dh_angles(_check_joints(joints))
    origins = np.zeros((N_JOINTS + 1, 3))
    R = np.eye(3)
    for i in range(N_JOINTS):
        origins[i + 1] = origins[i] + R @ link_offset(q[i], chain.a[i], chain.b[i])
        R = R @ joint_rotation(q[i], chain.alpha[i])
    return origins


def forward_kinematics(joints, chain: DhChain = DhChain()) -> Pose:
    """Pose of frame 7 for joint values ``joints`` (offsets applied)."""
    q = chain.dh_angles(_check_joints(joints))
    p = np.zeros(3)
    R = np.eye(3)
    for i in range(N_JOINTS):
        p = p + R @ link_offset(q[i], chain.a[i], chain.b[i])
        R = R @ joint_rotation(q[i], chain.alpha[i])
    return Pose(p, R)


def rpy_to_matrix(roll: float, pitch: float, yaw: float) -> np.ndarray:
    """Orientation matrix R = Rz(yaw) Ry(pitch) Rx(roll)."""
    cr, sr = math.cos(roll), math.sin(roll)
    cp, sp = math.cos(pitch), math.sin(pitch)
    cy, sy = math.cos(yaw), math.sin(yaw)
    q1 = [cy * cp, sy * cp, -sp]
    q2 = [-sy * cr + cy * sp * sr, cy * cr + sy * sp * sr, cp * sr]
    q3 = [sy * sr + cy * sp * cr, -cy * sr + sy * sp * cr, cp * cr]
    return np.column_stack([q1, q2, q3])


def matrix_to_rpy(Q) -> tuple:
    """Invert :func:`rpy_to_matrix`.

    Returns ``(roll, pitch, yaw, gimbal_locked)``. At gimbal lock the roll is
    pinned to zero and the yaw carries the free rotation.
    """
    Q = np.asarray(Q, dtype=float)
    pitch = -math.asin(max(-1.0, min(1.0, Q[2, 0])))
    # cos(pitch) from the first column is better conditioned than cos(asin(.))
    cp = math.hypot(Q[0, 0], Q[1, 0])
    if cp < 1e-9:
        pitch = math.copysign(math.pi / 2, -Q[2, 0])
        # with roll = 0: q2 = [-sin(yaw), cos(yaw), 0]
        yaw = math.atan2(-Q[0, 1], Q[1, 1])
        return 0.0, pitch, wrap_angle(yaw), True
    pitch = math.atan2(-Q[2, 0], cp)
    roll = math.atan2(Q[2, 1], Q[2, 2])
    yaw = math.atan2(Q[1, 0], Q[0, 0])
    return wrap_angle(roll), pitch, wrap_angle(yaw), False


def wrist_vector(pose: Pose, chain: DhChain = DhChain()) -> np.ndarray:
    """Vector from the base origin to the origin of frame 6.

    The last link only offsets the tool by b6 along its own z axis.
    """
    return pose.p - chain.b[5] * pose.Q[:, 2]
