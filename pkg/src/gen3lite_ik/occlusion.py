"""Posture selection by clearance between the arm and camera sight lines.

Each link is the segment between consecutive DH frame origins. A sight line
runs from the camera ``O_p`` through an object ``O_z``. A posture scores the
smallest link-to-sight-line distance; larger scores mean less occlusion.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from gen3lite_ik.dh import DhChain, frame_origins

_DEGENERATE = 1e-9


class Clamp(str, Enum):
    INTERIOR = "interior"
    START = "start_endpoint"
    END = "end_endpoint"
    PARALLEL = "parallel"


@dataclass(frozen=True)
class Scene:
    camera: np.ndarray
    objects: np.ndarray

    def __post_init__(self):
        camera = np.array(self.camera, dtype=float).reshape(3)
        objects = np.array(self.objects, dtype=float).reshape(-1, 3)
        if objects.shape[0] == 0:
            raise ValueError("a scene needs at least one object")
        if np.any(np.linalg.norm(objects - camera, axis=1) <= _DEGENERATE):
            raise ValueError("an object coincides with the camera")
        object.__setattr__(self, "camera", camera)
        object.__setattr__(self, "objects", objects)

    def to_dict(self) -> dict:
        return {"camera": self.camera.tolist(), "objects": self.objects.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "Scene":
        return cls(data["camera"], data["objects"])

    @classmethod
    def from_json(cls, path) -> "Scene":
        return cls.from_dict(json.loads(Path(path).read_text()))


@dataclass(frozen=True)
class LinkClearance:
    """Closest approach of one link to one sight line.

    ``delta_i`` locates the link point (0 at the link start, 1 at its end),
    ``delta_p`` the sight-line point (0 at the camera, 1 at the object) and
    ``delta_d`` is the distance in meters.
    """

    delta_i: float
    delta_p: float
    delta_d: float
    clamped: Clamp
    link_index: int = 0
    object_index: int = 0


def _point_line_distance(point, line_a, direction) -> float:
    return float(np.linalg.norm(np.cross(line_a - point, direction)) / np.linalg.norm(direction))


def _line_parameter(point, line_a, direction) -> float:
    return float(np.dot(point - line_a, direction) / np.dot(direction, direction))


def segment_line_clearance(seg_start, seg_end, line_a, line_b) -> LinkClearance:
    """Distance from the segment ``seg_start -> seg_end`` to the infinite line through ``line_a``, ``line_b``.

    Solves ``line_a + dp (line_b - line_a) = seg_start + di (seg_end - seg_start) + dd v``
    with ``v`` the unit common normal. When the closest point falls outside
    the segment, the distance from the nearer endpoint to the line is used.
    """
    O_i = np.asarray(seg_start, dtype=float)
    O_next = np.asarray(seg_end, dtype=float)
    O_p = np.asarray(line_a, dtype=float)
    sight = np.asarray(line_b, dtype=float) - O_p
    if np.linalg.norm(sight) <= _DEGENERATE:
        raise ValueError("sight line endpoints coincide")
    link = O_next - O_i
    normal = np.cross(sight, link)
    norm = np.linalg.norm(normal)

    if norm < _DEGENERATE:
        # parallel or zero-length link: both endpoints are equally valid
        d_start = _point_line_distance(O_i, O_p, sight)
        d_end = _point_line_distance(O_next, O_p, sight)
        if d_start <= d_end:
            return LinkClearance(0.0, _line_parameter(O_i, O_p, sight), d_start, Clamp.PARALLEL)
        return LinkClearance(1.0, _line_parameter(O_next, O_p, sight), d_end, Clamp.PARALLEL)

    v = normal / norm
    # columns multiply (delta_i, delta_p, delta_d)
    system = np.column_stack([link, -sight, v])
    delta_i, delta_p, delta_d = np.linalg.solve(system, O_p - O_i)
    if delta_i < 0.0:
        return LinkClearance(float(delta_i), _line_parameter(O_i, O_p, sight),
                             _point_line_distance(O_i, O_p, sight), Clamp.START)
    if delta_i > 1.0:
        return LinkClearance(float(delta_i), _line_parameter(O_next, O_p, sight),
                             _point_line_distance(O_next, O_p, sight), Clamp.END)
    return LinkClearance(float(delta_i), float(delta_p), float(abs(delta_d)), Clamp.INTERIOR)


def link_clearances(joints, scene: Scene, chain: DhChain = DhChain()) -> list:
    """Clearance of every (link, object) pair, links numbered 1..6."""
    origins = frame_origins(joints, chain)
    out = []
    for k, obj in enumerate(scene.objects):
        for i in range(len(origins) - 1):
            c = segment_line_clearance(origins[i], origins[i + 1], scene.camera, obj)
            out.append(LinkClearance(c.delta_i, c.delta_p, c.delta_d, c.clamped, i + 1, k))
    return out


def occlusion_score(joints, scene: Scene, chain: DhChain = DhChain()) -> float:
    return min(c.delta_d for c in link_clearances(joints, scene, chain))


class NoFeasibleSolution(ValueError):
    """Raised when posture selection is asked to choose from nothing."""


def select_posture(solutions, scene: Scene, chain: DhChain = DhChain()) -> tuple:
    """Index (into ``solutions.all``) and score of the best feasible posture.

    Ties go to the smaller index.
    """
    if not solutions.feasible:
        raise NoFeasibleSolution("no feasible solution to select from")
    best_index, best_score = None, -np.inf
    for i in solutions.feasible:
        score = occlusion_score(solutions.all[i].joints, scene, chain)
        if score > best_score:
            best_index, best_score = i, score
    return best_index, best_score
