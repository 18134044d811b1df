"""JSON forms of solve requests and reports.

Floats are written with Python's shortest round-trip repr (at most 17
significant digits), so ``from_json(to_json(r)) == r`` holds exactly.
Reports carry their angle unit; conversion happens once, when a report is
built, never on (de)serialization.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from gen3lite_ik.dh import DhChain, Pose, rpy_to_matrix
from gen3lite_ik.elimination import IkOptions, SolutionSet
from gen3lite_ik.occlusion import Scene
from gen3lite_ik.validation import nearest_rotation

UNITS = ("rad", "deg")


def _check_units(units: str) -> str:
    if units not in UNITS:
        raise ValueError(f"units must be one of {UNITS}, got {units!r}")
    return units


@dataclass(frozen=True)
class SolveRequest:
    """A target pose with exactly one orientation form, plus optional overrides.

    ``rpy`` is in ``units``; ``matrix`` is a row-major 3x3 list.
    """

    position: tuple
    rpy: tuple | None = None
    matrix: tuple | None = None
    chain: dict | None = None
    scene: dict | None = None
    tolerances: dict = field(default_factory=dict)
    units: str = "rad"

    def __post_init__(self):
        _check_units(self.units)
        if (self.rpy is None) == (self.matrix is None):
            raise ValueError("give exactly one of rpy or matrix")
        object.__setattr__(self, "position", tuple(float(v) for v in self.position))
        if len(self.position) != 3:
            raise ValueError("position needs 3 values")
        if self.rpy is not None:
            object.__setattr__(self, "rpy", tuple(float(v) for v in self.rpy))
            if len(self.rpy) != 3:
                raise ValueError("rpy needs 3 values")
        else:
            object.__setattr__(self, "matrix", tuple(float(v) for v in np.ravel(self.matrix)))
            if len(self.matrix) != 9:
                raise ValueError("matrix needs 9 values")
        unknown = set(self.tolerances) - set(IkOptions.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown tolerance keys: {sorted(unknown)}")

    def pose(self) -> Pose:
        if self.rpy is not None:
            rpy = [math.radians(v) for v in self.rpy] if self.units == "deg" else self.rpy
            return Pose(self.position, rpy_to_matrix(*rpy))
        return Pose(self.position, nearest_rotation(self.matrix))

    def dh_chain(self, default: DhChain | None = None) -> DhChain:
        if self.chain is not None:
            return DhChain.from_dict(self.chain)
        return default if default is not None else DhChain()

    def scene_object(self) -> Scene | None:
        return None if self.scene is None else Scene.from_dict(self.scene)

    def options(self) -> IkOptions:
        return IkOptions(**self.tolerances)

    def to_dict(self) -> dict:
        out = {"position": list(self.position), "units": self.units}
        if self.rpy is not None:
            out["rpy"] = list(self.rpy)
        else:
            out["matrix"] = list(self.matrix)
        for key in ("chain", "scene"):
            if getattr(self, key) is not None:
                out[key] = getattr(self, key)
        if self.tolerances:
            out["tolerances"] = dict(self.tolerances)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "SolveRequest":
        return cls(
            position=data["position"],
            rpy=data.get("rpy"),
            matrix=data.get("matrix"),
            chain=data.get("chain"),
            scene=data.get("scene"),
            tolerances=data.get("tolerances", {}),
            units=data.get("units", "rad"),
        )


@dataclass
class SolveReport:
    """Serializable result of one solve.

    ``solutions`` holds one dict per solution (joints in ``units``),
    ``feasible`` indexes into it, ``selected`` is ``{"index", "score"}`` when
    a scene was given. ``timing_ms`` is wall-clock and excluded from equality.
    """

    request: dict
    solutions: list
    feasible: list
    selected: dict | None = None
    timing_ms: float = field(default=0.0, compare=False)
    units: str = "rad"

    @classmethod
    def from_solution_set(cls, request: SolveRequest, sols: SolutionSet, selected=None,
                          timing_ms: float = 0.0, units: str = "rad") -> "SolveReport":
        _check_units(units)
        rows = []
        for s in sols.all:
            row = s.to_dict()
            if units == "deg":
                row["joints"] = [math.degrees(v) for v in row["joints"]]
            rows.append(row)
        sel = None if selected is None else {"index": int(selected[0]), "score": float(selected[1])}
        return cls(request.to_dict(), rows, [int(i) for i in sols.feasible], sel, float(timing_ms), units)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "SolveReport":
        return cls(
            request=data["request"],
            solutions=data["solutions"],
            feasible=data["feasible"],
            selected=data.get("selected"),
            timing_ms=data.get("timing_ms", 0.0),
            units=_check_units(data.get("units", "rad")),
        )

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, allow_nan=False)

    @classmethod
    def from_json(cls, text: str) -> "SolveReport":
        return cls.from_dict(json.loads(text))
