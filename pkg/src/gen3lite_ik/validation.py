"""Input checks shared by the estimators and the CLI."""
from __future__ import annotations

import numpy as np
from sklearn.utils import check_array

from gen3lite_ik.dh import DhChain, Pose, rpy_to_matrix

ORTHO_REPAIR_TOL = 1e-6


def check_joints(X) -> np.ndarray:
    """2-D float array of joint vectors, shape (n, 6)."""
    X = check_array(X, dtype=float, ensure_2d=False)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.shape[1] != 6:
        raise ValueError(f"expected 6 joint values per row, got {X.shape[1]}")
    return X


def check_pose_rows(X) -> np.ndarray:
    """Poses as rows of ``[x, y, z, roll, pitch, yaw]`` or ``[x, y, z, Q (row-major 9)]``."""
    X = check_array(X, dtype=float, ensure_2d=False)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.shape[1] not in (6, 12):
        raise ValueError(f"pose rows need 6 (position + rpy) or 12 (position + matrix) values, got {X.shape[1]}")
    return X


def nearest_rotation(M, tol: float = ORTHO_REPAIR_TOL) -> np.ndarray:
    """Project a nearly orthonormal matrix onto SO(3).

    Matrices typed by hand rarely meet the 1e-10 orthonormality of
    :class:`Pose`; anything further than ``tol`` from a rotation is rejected.
    """
    M = np.asarray(M, dtype=float).reshape(3, 3)
    if not np.all(np.isfinite(M)):
        raise ValueError("orientation matrix contains non-finite values")
    U, _, Vt = np.linalg.svd(M)
    R = U @ Vt
    if np.linalg.det(R) < 0:
        raise ValueError("orientation matrix is a reflection, not a rotation")
    if np.max(np.abs(R - M)) > tol:
        raise ValueError(f"orientation matrix is more than {tol:g} away from a rotation")
    return R


def pose_from_row(row) -> Pose:
    row = np.asarray(row, dtype=float).reshape(-1)
    if row.size == 6:
        return Pose(row[:3], rpy_to_matrix(*row[3:]))
    return Pose(row[:3], nearest_rotation(row[3:]))


def check_chain(chain) -> DhChain:
    if chain is None:
        return DhChain()
    if isinstance(chain, DhChain):
        return chain
    if isinstance(chain, dict):
        return DhChain.from_dict(chain)
    return DhChain.from_json(chain)
