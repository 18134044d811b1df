import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conftest import CAMERA, EX2_ROWS, OBJECT, random_joints
from gen3lite_ik.dh import DhChain, forward_kinematics, frame_origins
from gen3lite_ik.elimination import IkSolution, SolutionSet, solve_ik
from gen3lite_ik.occlusion import (
    Clamp,
    NoFeasibleSolution,
    Scene,
    link_clearances,
    occlusion_score,
    segment_line_clearance,
    select_posture,
)

SCENE = Scene(CAMERA, [OBJECT])
point = arrays(float, 3, elements=st.floats(-2, 2))


def brute_force(seg_start, seg_end, line_a, line_b, n=2000):
    """Minimum distance over sampled point pairs, the line sampled around its closest stretch."""
    seg_start, seg_end = np.asarray(seg_start, float), np.asarray(seg_end, float)
    line_a, d = np.asarray(line_a, float), np.asarray(line_b, float) - np.asarray(line_a, float)
    seg = seg_start + np.linspace(0, 1, n)[:, None] * (seg_end - seg_start)
    # the closest line point projects from somewhere on the segment
    proj = (seg - line_a) @ d / (d @ d)
    lo, hi = proj.min() - 0.01, proj.max() + 0.01
    line = line_a + np.linspace(lo, hi, n)[:, None] * d
    best = np.inf
    for chunk in np.array_split(seg, 10):
        diff = chunk[:, None, :] - line[None, :, :]
        best = min(best, float(np.sqrt(np.min(np.einsum("ijk,ijk->ij", diff, diff)))))
    return best


def fake_set(joint_list, feasible=None):
    sols = [IkSolution(joints=np.asarray(j, float), t1_root=0.0, residual=0.0, within_limits=True)
            for j in joint_list]
    feasible = list(range(len(sols))) if feasible is None else feasible
    return SolutionSet(target=None, all=sols, feasible=feasible, rejected=[])


# ---- Scene


def test_scene_validation():
    with pytest.raises(ValueError):
        Scene([0, 0, 0], np.zeros((0, 3)))
    with pytest.raises(ValueError):
        Scene([0, 0, 0], [[0, 0, 0]])
    scene = Scene.from_dict({"camera": [0, 0, 1], "objects": [[1, 0, 0], [0, 1, 0]]})
    assert scene.objects.shape == (2, 3)
    assert Scene.from_dict(scene.to_dict()).to_dict() == scene.to_dict()


# ---- segment_line_clearance


def test_clearance_parallel():
    c = segment_line_clearance([0, 0, 0], [1, 0, 0], [0, 0, 1], [1, 0, 1])
    assert c.delta_d == pytest.approx(1.0) and c.clamped is Clamp.PARALLEL


def test_clearance_orthogonal_skew():
    c = segment_line_clearance([0, -1, 0], [0, 1, 0], [1, 0, 0], [1, 0, 1])
    assert c.delta_d == pytest.approx(1.0) and c.delta_i == pytest.approx(0.5)
    assert c.clamped is Clamp.INTERIOR


def test_clearance_start_clamp():
    c = segment_line_clearance([2, 0, 0], [3, 0, 0], [0, 0, 0], [0, 1, 0])
    assert c.delta_i < 0 and c.clamped is Clamp.START
    assert c.delta_d == pytest.approx(2.0)


def test_clearance_end_clamp():
    c = segment_line_clearance([3, 0, 0], [2, 0, 0], [0, 0, 0], [0, 1, 0])
    assert c.delta_i > 1 and c.clamped is Clamp.END
    assert c.delta_d == pytest.approx(2.0)


def test_clearance_zero_length_link():
    c = segment_line_clearance([1, 1, 0], [1, 1, 0], [0, 0, 0], [0, 0, 1])
    assert c.clamped is Clamp.PARALLEL and c.delta_d == pytest.approx(np.sqrt(2))


def test_clearance_rejects_degenerate_sight_line():
    with pytest.raises(ValueError):
        segment_line_clearance([0, 0, 0], [1, 0, 0], [1, 1, 1], [1, 1, 1])


def test_clearance_matches_brute_force():
    rng = np.random.default_rng(12)
    for _ in range(200):
        s0, s1, a, b = rng.uniform(-1, 1, (4, 3))
        c = segment_line_clearance(s0, s1, a, b)
        assert c.delta_d >= 0
        if c.clamped is Clamp.INTERIOR:
            assert 0 <= c.delta_i <= 1
        assert abs(c.delta_d - brute_force(s0, s1, a, b)) <= 2e-3


@given(point, point, point, point)
def test_clearance_symmetric_in_sight_line(s0, s1, a, b):
    if np.linalg.norm(a - b) < 1e-3:
        return
    c1 = segment_line_clearance(s0, s1, a, b)
    c2 = segment_line_clearance(s0, s1, b, a)
    assert c1.delta_d == pytest.approx(c2.delta_d, abs=1e-12)


# ---- occlusion_score


def test_score_example_2_row_8():
    assert occlusion_score(EX2_ROWS[8], SCENE) == pytest.approx(0.1723, abs=1e-3)


def test_score_matches_brute_force():
    rng = np.random.default_rng(13)
    for q in random_joints(rng, 5):
        O = frame_origins(q)
        # sight line running along +x on the far side of the arm
        scene = Scene([O[:, 0].max() + 0.3, 0.4, 0.5], [[O[:, 0].max() + 1.3, 0.4, 0.5]])
        expected = min(brute_force(O[i], O[i + 1], scene.camera, scene.objects[0], n=1000) for i in range(6))
        assert occlusion_score(q, scene) == pytest.approx(expected, abs=2e-3)


def test_score_object_on_frame_origin():
    rng = np.random.default_rng(14)
    for q in random_joints(rng, 10):
        O = frame_origins(q)
        scene = Scene([5.0, -3.0, 2.0], [O[3]])
        assert occlusion_score(q, scene) <= 1e-9


def test_score_takes_min_over_objects():
    far = [5.0, 5.0, 5.0]
    both = Scene(CAMERA, [OBJECT, far])
    assert occlusion_score(EX2_ROWS[8], both) == min(occlusion_score(EX2_ROWS[8], SCENE),
                                                      occlusion_score(EX2_ROWS[8], Scene(CAMERA, [far])))


def test_link_clearances_indexing():
    out = link_clearances(EX2_ROWS[8], Scene(CAMERA, [OBJECT, [1, 1, 1]]))
    assert [(c.link_index, c.object_index) for c in out] == [(i, k) for k in range(2) for i in range(1, 7)]


def test_score_translation_invariant():
    rng = np.random.default_rng(15)
    for q in random_joints(rng, 20):
        shift = rng.normal(size=3)
        O = frame_origins(q)
        cam, obj = rng.normal(size=3), rng.normal(size=3)
        base = min(segment_line_clearance(O[i], O[i + 1], cam, obj).delta_d for i in range(6))
        moved = min(segment_line_clearance(O[i] + shift, O[i + 1] + shift, cam + shift, obj + shift).delta_d
                    for i in range(6))
        assert moved == pytest.approx(base, abs=1e-9)


# ---- select_posture


def test_select_example_2(ex2_pose):
    sols = solve_ik(ex2_pose)
    index, score = select_posture(sols, SCENE)
    assert np.max(np.abs(sols.all[index].joints - EX2_ROWS[8])) <= 5e-3
    assert score == pytest.approx(0.1723, abs=1e-3)


def test_select_single_feasible():
    assert select_posture(fake_set([EX2_ROWS[6]]), SCENE)[0] == 0


def test_select_tie_goes_to_first():
    assert select_posture(fake_set([EX2_ROWS[7], EX2_ROWS[7]]), SCENE)[0] == 0


def test_select_ignores_infeasible():
    sols = fake_set([EX2_ROWS[8], EX2_ROWS[6]], feasible=[1])
    assert select_posture(sols, SCENE)[0] == 1


def test_select_empty_raises():
    with pytest.raises(NoFeasibleSolution):
        select_posture(fake_set([EX2_ROWS[8]], feasible=[]), SCENE)


def test_select_argmax_invariant_under_scaling():
    rng = np.random.default_rng(16)
    chain = DhChain()
    for _ in range(10):
        q = random_joints(rng, 1)[0]
        sols = solve_ik(forward_kinematics(q))
        if not sols.feasible:
            continue
        scene = Scene(rng.normal(size=3), [rng.normal(size=3)])
        scores = {i: occlusion_score(sols.all[i].joints, scene, chain) for i in sols.feasible}
        for k in (0.5, 3.0):
            assert max(scores, key=lambda i: k * scores[i]) == select_posture(sols, scene, chain)[0]
