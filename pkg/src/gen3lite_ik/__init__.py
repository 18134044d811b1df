"""Analytical inverse kinematics of the Kinova Gen3 Lite with occlusion-aware posture selection."""
from gen3lite_ik.dh import (
    DhChain,
    Pose,
    forward_kinematics,
    frame_origins,
    joint_rotation,
    link_offset,
    matrix_to_rpy,
    rpy_to_matrix,
    wrist_vector,
)
from gen3lite_ik.elimination import (
    Branch,
    IkOptions,
    IkSolution,
    SolutionSet,
    back_substitute,
    build_univariate,
    fk_residual,
    solve_ik,
    univariate_eval,
)
from gen3lite_ik.estimators import AnalyticalIK, ForwardKinematics, PostureSelector
from gen3lite_ik.occlusion import Scene, occlusion_score, segment_line_clearance, select_posture
from gen3lite_ik.oracle import homogeneous_fk, numeric_ik_oracle
from gen3lite_ik.polynomial import DensePolynomial, interpolate, real_roots
from gen3lite_ik.report import SolveReport, SolveRequest

__all__ = [
    "AnalyticalIK", "Branch", "DensePolynomial", "DhChain", "ForwardKinematics", "IkOptions",
    "IkSolution", "Pose", "PostureSelector", "Scene", "SolutionSet", "SolveReport", "SolveRequest",
    "back_substitute", "build_univariate", "fk_residual", "forward_kinematics", "frame_origins",
    "homogeneous_fk", "interpolate", "joint_rotation", "link_offset", "matrix_to_rpy",
    "numeric_ik_oracle", "occlusion_score", "real_roots", "rpy_to_matrix", "segment_line_clearance",
    "select_posture", "solve_ik", "univariate_eval", "wrist_vector",
]
