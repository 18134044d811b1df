import numpy as np
import pytest

from conftest import EX1_ROWS, random_joints
from gen3lite_ik.dh import DhChain, angle_distance, forward_kinematics
from gen3lite_ik.elimination import fk_residual, solve_ik
from gen3lite_ik.oracle import homogeneous_fk, numeric_ik_oracle


def test_homogeneous_fk_batch_matches_single():
    rng = np.random.default_rng(1)
    q = random_joints(rng, 5)
    batch = homogeneous_fk(q)
    assert batch.shape == (5, 4, 4)
    for i in range(5):
        assert np.allclose(batch[i], homogeneous_fk(q[i]), atol=0)


def test_seed_at_solution_needs_no_iteration(ex1_pose):
    res = numeric_ik_oracle(ex1_pose, seed_joints=[1, 1, 1.5, 0, 0.5, -1.5])
    assert res.converged and res.iterations == 0


def test_seed_near_example_1_row_5(ex1_rounded_pose):
    seed = np.array(EX1_ROWS[5]) + 0.05
    res = numeric_ik_oracle(ex1_rounded_pose, seed_joints=seed)
    assert res.converged and res.residual < 1e-8
    assert np.max(angle_distance(res.joints, EX1_ROWS[5])) <= 1e-3


def test_non_convergence_is_reported():
    from gen3lite_ik.dh import Pose

    res = numeric_ik_oracle(Pose([10.0, 0, 0], np.eye(3)), max_iterations=20)
    assert not res.converged and res.iterations == 20
    assert res.residual == pytest.approx(fk_residual(res.joints, Pose([10.0, 0, 0], np.eye(3))))


def test_oracle_answers_are_analytical_solutions():
    rng = np.random.default_rng(7)
    chain = DhChain()
    converged = 0
    for q in random_joints(rng, 50):
        pose = forward_kinematics(q)
        sols = solve_ik(pose)
        for seed in random_joints(rng, 8):
            res = numeric_ik_oracle(pose, chain, seed)
            if res.converged:
                converged += 1
                assert min(np.max(angle_distance(res.joints, s.joints)) for s in sols.all) <= 1e-4
    assert converged > 0
