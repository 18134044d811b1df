"""scikit-learn style wrappers around forward and inverse kinematics.

Rows of joint values go in and out of :class:`ForwardKinematics`; rows of
poses go into :class:`AnalyticalIK`. Hyper-parameters live in ``__init__``
so ``get_params``/``set_params`` and ``clone`` work as usual.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from gen3lite_ik.dh import angle_distance, forward_kinematics
from gen3lite_ik.elimination import IkOptions, solve_ik
from gen3lite_ik.occlusion import Scene, occlusion_score
from gen3lite_ik.validation import check_chain, check_joints, check_pose_rows, pose_from_row


def _check_scene(scene) -> Scene:
    if isinstance(scene, Scene):
        return scene
    if isinstance(scene, dict):
        return Scene.from_dict(scene)
    return Scene.from_json(scene)


class ForwardKinematics(TransformerMixin, BaseEstimator):
    """Joint rows (n, 6) to pose rows.

    ``orientation="rpy"`` gives ``[x, y, z, roll, pitch, yaw]``;
    ``orientation="matrix"`` gives the position followed by Q row-major.
    """

    def __init__(self, chain=None, orientation="rpy"):
        self.chain = chain
        self.orientation = orientation

    def fit(self, X=None, y=None):
        if self.orientation not in ("rpy", "matrix"):
            raise ValueError(f"orientation must be 'rpy' or 'matrix', got {self.orientation!r}")
        self.chain_ = check_chain(self.chain)
        self.n_features_in_ = 6
        return self

    def transform(self, X):
        check_is_fitted(self, "chain_")
        out = []
        for q in check_joints(X):
            pose = forward_kinematics(q, self.chain_)
            if self.orientation == "rpy":
                out.append(pose.as_vector())
            else:
                out.append(np.concatenate([pose.p, pose.Q.ravel()]))
        return np.array(out)


class AnalyticalIK(BaseEstimator):
    """All inverse-kinematics solutions per pose row, plus a single-answer ``predict``.

    ``predict`` returns, per row, the solution closest (max joint distance)
    to ``reference``, or NaNs when no candidate exists. With
    ``feasible_only`` the candidates are the in-limit, non-singular ones.
    """

    def __init__(self, chain=None, residual_max=1e-6, dedupe_tol=1e-5, feasible_only=True, reference=None):
        self.chain = chain
        self.residual_max = residual_max
        self.dedupe_tol = dedupe_tol
        self.feasible_only = feasible_only
        self.reference = reference

    def fit(self, X=None, y=None):
        if not self.residual_max > 0 or not self.dedupe_tol > 0:
            raise ValueError("residual_max and dedupe_tol must be positive")
        self.chain_ = check_chain(self.chain)
        self.options_ = IkOptions(residual_max=self.residual_max, dedupe_tol=self.dedupe_tol)
        self.reference_ = np.zeros(6) if self.reference is None else check_joints(self.reference)[0]
        return self

    def solve(self, X) -> list:
        """One :class:`SolutionSet` per pose row."""
        check_is_fitted(self, "chain_")
        return [solve_ik(pose_from_row(row), self.chain_, self.options_) for row in check_pose_rows(X)]

    def predict(self, X) -> np.ndarray:
        out = np.full((len(check_pose_rows(X)), 6), np.nan)
        for i, sols in enumerate(self.solve(X)):
            cands = sols.feasible_solutions if self.feasible_only else sols.all
            if cands:
                best = min(cands, key=lambda s: float(np.max(angle_distance(s.joints, self.reference_))))
                out[i] = best.joints
        return out


class PostureSelector(BaseEstimator):
    """Pick, per solution set, the feasible posture that best clears the camera sight lines."""

    def __init__(self, scene=None, chain=None):
        self.scene = scene
        self.chain = chain

    def fit(self, X=None, y=None):
        if self.scene is None:
            raise ValueError("PostureSelector needs a scene")
        self.scene_ = _check_scene(self.scene)
        self.chain_ = check_chain(self.chain)
        return self

    def score_samples(self, solution_sets) -> list:
        """Occlusion score of every feasible solution, per set (index -> score)."""
        check_is_fitted(self, "scene_")
        return [{i: occlusion_score(s.all[i].joints, self.scene_, self.chain_) for i in s.feasible}
                for s in solution_sets]

    def predict(self, solution_sets) -> np.ndarray:
        """Index into ``SolutionSet.all`` of the chosen posture, -1 if none is feasible."""
        picks = []
        for scores in self.score_samples(solution_sets):
            # max over ascending indices keeps the first of equal scores
            picks.append(max(scores, key=lambda i: (scores[i], -i)) if scores else -1)
        return np.array(picks, dtype=int)
