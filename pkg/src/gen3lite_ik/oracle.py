"""Independent reference implementations used to cross-check the solver.

``homogeneous_fk`` builds the same chain from 4x4 transforms instead of the
rotation/offset recurrence, and ``numeric_ik_oracle`` is a plain damped
least-squares iteration that finds at most one solution from a seed.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from gen3lite_ik.dh import DhChain, Pose, wrap_angle
from gen3lite_ik.elimination import fk_residual

FD_STEP = 1e-6
DAMPING = 1e-3
MAX_ITERATIONS = 500
TOLERANCE = 1e-8


def _link_transforms(theta, a, b, alpha) -> np.ndarray:
    """Rz(theta) Tz(b) Tx(a) Rx(alpha) for an array of theta, shape (..., 4, 4)."""
    ct, st = np.cos(theta), np.sin(theta)
    ca, sa = np.cos(alpha), np.sin(alpha)
    T = np.zeros(np.shape(theta) + (4, 4))
    T[..., 0, :] = np.stack([ct, -st * ca, st * sa, a * ct], axis=-1)
    T[..., 1, :] = np.stack([st, ct * ca, -ct * sa, a * st], axis=-1)
    T[..., 2, 1], T[..., 2, 2], T[..., 2, 3] = sa, ca, b
    T[..., 3, 3] = 1.0
    return T


def homogeneous_fk(joints, chain: DhChain = DhChain()) -> np.ndarray:
    """4x4 end-effector transform(s) composed from per-link homogeneous matrices.

    Accepts one joint vector or a stack of shape (n, 6).
    """
    theta = np.asarray(joints, dtype=float) + np.asarray(chain.offset)
    T = np.broadcast_to(np.eye(4), theta.shape[:-1] + (4, 4))
    for i in range(6):
        T = T @ _link_transforms(theta[..., i], chain.a[i], chain.b[i], chain.alpha[i])
    return T


def _error(joints, target: Pose, chain: DhChain) -> np.ndarray:
    T = homogeneous_fk(joints, chain)
    dp = T[..., :3, 3] - target.p
    dQ = (T[..., :3, :3] - target.Q).reshape(dp.shape[:-1] + (9,))
    return np.concatenate([dp, dQ], axis=-1)


def _jacobian(joints, target: Pose, chain: DhChain, step: float) -> np.ndarray:
    dq = step * np.eye(6)
    forward = _error(joints + dq, target, chain)
    backward = _error(joints - dq, target, chain)
    return ((forward - backward) / (2 * step)).T


@dataclass(frozen=True)
class OracleResult:
    joints: np.ndarray
    converged: bool
    iterations: int
    residual: float


def numeric_ik_oracle(pose: Pose, chain: DhChain = DhChain(), seed_joints=None,
                      damping: float = DAMPING, max_iterations: int = MAX_ITERATIONS,
                      tol: float = TOLERANCE, step: float = FD_STEP) -> OracleResult:
    """Damped least squares from ``seed_joints`` on the 12-component pose error.

    Each step solves ``(J^T J + damping**2 I) dq = -J^T e`` with a
    central-difference Jacobian. Non-convergence is reported through
    ``OracleResult.converged`` rather than raised.
    """
    q = np.zeros(6) if seed_joints is None else np.array(seed_joints, dtype=float).reshape(6)
    q = wrap_angle(q)
    residual = fk_residual(q, pose, chain)
    it = 0
    while residual >= tol and it < max_iterations:
        e = _error(q, pose, chain)
        J = _jacobian(q, pose, chain, step)
        dq = np.linalg.solve(J.T @ J + damping**2 * np.eye(6), -J.T @ e)
        q = wrap_angle(q + dq)
        residual = fk_residual(q, pose, chain)
        it += 1
    return OracleResult(joints=q, converged=bool(residual < tol), iterations=it, residual=float(residual))
