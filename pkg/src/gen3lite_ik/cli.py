"""Command-line front end: ``fk``, ``ik``, ``select`` and ``validate``.

Exit codes: 0 success (an unreachable pose is a success with a notice),
1 usage or input error, 2 validation failure.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time

import numpy as np

from gen3lite_ik.dh import DhChain, angle_distance, forward_kinematics, matrix_to_rpy
from gen3lite_ik.elimination import solve_ik
from gen3lite_ik.occlusion import NoFeasibleSolution, Scene, select_posture
from gen3lite_ik.oracle import numeric_ik_oracle
from gen3lite_ik.report import SolveReport, SolveRequest

CHAIN_ENV = "GEN3LITE_CHAIN"
EXIT_OK, EXIT_USAGE, EXIT_VALIDATION = 0, 1, 2

ROUND_TRIP_TOL = 1e-6
ORACLE_MATCH_TOL = 1e-4
MAX_SOLUTIONS = 16


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _load_chain(path) -> DhChain:
    path = path or os.environ.get(CHAIN_ENV)
    if not path:
        return DhChain()
    try:
        return DhChain.from_json(path)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot load chain {path}: {exc}") from exc


def _load_scene(path) -> Scene | None:
    if path is None:
        return None
    try:
        return Scene.from_json(path)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot load scene {path}: {exc}") from exc


def _fmt(values, width=9) -> str:
    # values that round to zero print unsigned
    return " ".join(f"{v:{width}.4f}".replace("-0.0000", " 0.0000") for v in values)


def _angles_out(values, deg: bool):
    return [math.degrees(v) for v in values] if deg else [float(v) for v in values]


# ---------------------------------------------------------------- fk

def cmd_fk(args) -> int:
    chain = _load_chain(args.chain)
    q = [math.radians(v) for v in args.joints] if args.deg else list(args.joints)
    pose = forward_kinematics(q, chain)
    roll, pitch, yaw, locked = matrix_to_rpy(pose.Q)
    q_arr = np.asarray(q)
    outside = [i + 1 for i in range(6) if not chain.lower[i] <= q_arr[i] <= chain.upper[i]]
    units = "deg" if args.deg else "rad"
    if args.json:
        doc = {
            "joints": list(args.joints),
            "position": pose.p.tolist(),
            "rpy": _angles_out((roll, pitch, yaw), args.deg),
            "matrix": pose.Q.ravel().tolist(),
            "gimbal_locked": locked,
            "out_of_limits": outside,
            "units": units,
        }
        print(json.dumps(doc, indent=2))
        return EXIT_OK
    print(f"position (m)      {_fmt(pose.p)}")
    print(f"rpy ({units})         {_fmt(_angles_out((roll, pitch, yaw), args.deg))}")
    print("matrix")
    for row in pose.Q:
        print(f"                  {_fmt(row)}")
    if locked:
        print("note: gimbal lock, roll fixed to 0")
    if outside:
        print(f"warning: joint(s) outside limits: {', '.join(map(str, outside))}")
    return EXIT_OK


# ---------------------------------------------------------------- ik / select

def _request_from_args(args) -> SolveRequest:
    if getattr(args, "request", None):
        try:
            with open(args.request) as fh:
                return SolveRequest.from_dict(json.load(fh))
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"cannot load request {args.request}: {exc}") from exc
    if args.pos is None or (args.rpy is None and args.matrix is None):
        raise UsageError("need --pos and one of --rpy / --matrix (or --request)")
    try:
        return SolveRequest(position=args.pos, rpy=args.rpy, matrix=args.matrix,
                            units="deg" if args.deg else "rad")
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _solve(args, need_scene: bool):
    request = _request_from_args(args)
    # precedence: --chain flag, then the request's own chain, then $GEN3LITE_CHAIN
    chain = _load_chain(args.chain) if args.chain or request.chain is None else None
    try:
        pose = request.pose()
        chain = chain or request.dh_chain()
        opts = request.options()
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(str(exc)) from exc
    scene = _load_scene(args.scene) or request.scene_object()
    if need_scene and scene is None:
        raise UsageError("select needs --scene")
    start = time.perf_counter()
    sols = solve_ik(pose, chain, opts)
    selected = None
    if scene is not None and sols.feasible:
        selected = select_posture(sols, scene, chain)
    elapsed = (time.perf_counter() - start) * 1e3
    report = SolveReport.from_solution_set(request, sols, selected, elapsed, request.units)
    return report, sols, scene


def _print_table(report: SolveReport) -> None:
    unit = "deg" if report.units == "deg" else "rad"
    header = " ".join(f"{'theta' + str(i):>9}" for i in range(1, 7))
    print(f"  #  {header}  residual   flags   ({unit}; * feasible, > selected)")
    sel = report.selected["index"] if report.selected else None
    for i, row in enumerate(report.solutions):
        flags = ("*" if i in report.feasible else " ") + (">" if i == sel else " ")
        extra = []
        if row["branch"] != "generic":
            extra.append(row["branch"])
        if row["wrist_singular"]:
            extra.append("wrist_singular")
        print(f"{i + 1:3d}  {_fmt(row['joints'])}  {row['residual']:.1e}   {flags}  {' '.join(extra)}".rstrip())


def cmd_ik(args) -> int:
    report, sols, scene = _solve(args, need_scene=False)
    if args.json:
        print(report.to_json())
        return EXIT_OK
    if not report.solutions:
        print("no solutions: the pose is not reachable")
        return EXIT_OK
    _print_table(report)
    print(f"{len(report.solutions)} solution(s), {len(report.feasible)} feasible")
    if scene is not None:
        if report.selected:
            print(f"selected #{report.selected['index'] + 1}, occlusion score {report.selected['score']:.4f} m")
        else:
            print("no feasible solution to select")
    return EXIT_OK


def cmd_select(args) -> int:
    report, sols, scene = _solve(args, need_scene=True)
    if args.json:
        print(report.to_json())
        return EXIT_OK
    if not report.selected:
        print("no feasible solution to select" if report.solutions else "no solutions: the pose is not reachable")
        return EXIT_OK
    i = report.selected["index"]
    print(f"selected #{i + 1}: {_fmt(report.solutions[i]['joints'])}")
    print(f"occlusion score {report.selected['score']:.4f} m")
    return EXIT_OK


# ---------------------------------------------------------------- validate

def run_validation(count: int, seed: int, chain: DhChain = DhChain(), oracle_seeds: int = 1) -> dict:
    """Seeded round trips (random in-limit joints -> FK -> IK) with oracle cross-checks."""
    rng = np.random.default_rng(seed)
    lo, hi = np.array(chain.lower), np.array(chain.upper)
    summary = {
        "count": count, "seed": seed, "round_trip_pass": 0, "residual_fail": 0,
        "count_fail": 0, "worst_residual": 0.0, "max_solutions": 0,
        "oracle_runs": 0, "oracle_converged": 0, "oracle_matched": 0, "failed_trials": [],
    }
    for trial in range(count):
        q = rng.uniform(lo, hi)
        pose = forward_kinematics(q, chain)
        sols = solve_ik(pose, chain)
        ok = True
        errs = [float(np.max(angle_distance(s.joints, q))) for s in sols.all]
        if errs and min(errs) <= ROUND_TRIP_TOL:
            summary["round_trip_pass"] += 1
        else:
            ok = False
        worst = max((s.residual for s in sols.all), default=0.0)
        summary["worst_residual"] = max(summary["worst_residual"], worst)
        if worst >= ROUND_TRIP_TOL:
            summary["residual_fail"] += 1
            ok = False
        summary["max_solutions"] = max(summary["max_solutions"], len(sols.all))
        if len(sols.all) > MAX_SOLUTIONS:
            summary["count_fail"] += 1
            ok = False
        for _ in range(oracle_seeds):
            res = numeric_ik_oracle(pose, chain, rng.uniform(lo, hi))
            summary["oracle_runs"] += 1
            if res.converged:
                summary["oracle_converged"] += 1
                if any(np.max(angle_distance(res.joints, s.joints)) <= ORACLE_MATCH_TOL for s in sols.all):
                    summary["oracle_matched"] += 1
                else:
                    ok = False
        if not ok:
            summary["failed_trials"].append(trial)
    summary["passed"] = not summary["failed_trials"]
    return summary


def cmd_validate(args) -> int:
    if args.count <= 0:
        raise UsageError("--count must be positive")
    if args.oracle_seeds < 0:
        raise UsageError("--oracle-seeds must be non-negative")
    chain = _load_chain(args.chain)
    s = run_validation(args.count, args.seed, chain, args.oracle_seeds)
    if args.json:
        print(json.dumps(s, indent=2))
    else:
        print(f"round trip      {s['round_trip_pass']}/{s['count']} passed (seed {s['seed']})")
        print(f"residual check  {s['count'] - s['residual_fail']}/{s['count']} passed, "
              f"worst residual {s['worst_residual']:.3e}")
        print(f"solution count  max {s['max_solutions']} (bound {MAX_SOLUTIONS})")
        print(f"oracle          {s['oracle_converged']}/{s['oracle_runs']} converged, "
              f"{s['oracle_matched']}/{s['oracle_converged']} matched")
        print("PASS" if s["passed"] else f"FAIL trials {s['failed_trials']}")
    return EXIT_OK if s["passed"] else EXIT_VALIDATION


# ---------------------------------------------------------------- parser

def _add_pose_args(p, scene_required=False):
    p.add_argument("--pos", nargs=3, type=float, metavar=("X", "Y", "Z"))
    orient = p.add_mutually_exclusive_group()
    orient.add_argument("--rpy", nargs=3, type=float, metavar=("ROLL", "PITCH", "YAW"))
    orient.add_argument("--matrix", nargs=9, type=float, metavar="Q", help="orientation, row-major")
    p.add_argument("--request", help="JSON solve request instead of --pos/--rpy/--matrix")
    p.add_argument("--deg", action="store_true", help="rpy input and joint output in degrees")
    p.add_argument("--scene", required=scene_required, help="scene JSON (camera and objects)")
    p.add_argument("--chain", help=f"chain JSON (default: ${CHAIN_ENV} or the built-in Gen3 Lite)")
    p.add_argument("--json", action="store_true", help="print the full report as JSON")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gen3lite-ik", description="Gen3 Lite forward/inverse kinematics")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    fk = sub.add_parser("fk", help="forward kinematics")
    fk.add_argument("joints", nargs=6, type=float, metavar="THETA")
    fk.add_argument("--chain", help=f"chain JSON (default: ${CHAIN_ENV} or the built-in Gen3 Lite)")
    fk.add_argument("--deg", action="store_true", help="joints and rpy in degrees")
    fk.add_argument("--json", action="store_true")
    fk.set_defaults(func=cmd_fk)

    ik = sub.add_parser("ik", help="all inverse kinematics solutions")
    _add_pose_args(ik)
    ik.set_defaults(func=cmd_ik)

    sel = sub.add_parser("select", help="least occluding feasible posture")
    _add_pose_args(sel, scene_required=True)
    sel.set_defaults(func=cmd_select)

    val = sub.add_parser("validate", help="seeded round-trip and oracle checks")
    val.add_argument("--count", type=int, required=True)
    val.add_argument("--seed", type=int, required=True)
    val.add_argument("--oracle-seeds", type=int, default=1, help="numeric IK seeds per trial")
    val.add_argument("--chain")
    val.add_argument("--json", action="store_true")
    val.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NoFeasibleSolution as exc:
        print(str(exc))
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
