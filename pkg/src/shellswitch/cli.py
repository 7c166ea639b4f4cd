"""Command-line front end.

Subcommands: validate, stress, search, trace, period, lightray, switch.
Exit codes: 0 success, 1 input error, 2 validity violation, 3 infeasible
search.  All numeric output uses 17 significant digits and is deterministic
for identical inputs regardless of the worker count.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import (
    GeometryError,
    SearchError,
    ShellSwitchError,
    UnattainableRatioError,
)
from .geodesic import (
    diametral_crossing_time,
    null_crossing_time,
    oscillation_period,
    trajectory,
)
from .search import (
    SearchConfig,
    find_meeting_radius,
    one_shell_spacetime,
    period_ratio_curve,
    solve_switch_configuration,
    two_shell_spacetime,
)
from .spacetime import (
    DEFAULT_HORIZON_MARGIN,
    induced_metric_gap,
    shell_stress,
    spacetime_from_config,
    stress_report,
)
from . import switch as sw

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INVALID = 2
EXIT_INFEASIBLE = 3


def fmt(x: float) -> str:
    return format(x, ".17g")


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON in {path}: line {exc.lineno} col {exc.colno}")


class InputError(Exception):
    pass


def _dump_json(doc, path: str | None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True, default=float) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _write_csv(path: Path, header: str, rows) -> None:
    lines = [header]
    for row in rows:
        lines.append(",".join(fmt(v) if isinstance(v, float) else str(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# Subcommands

def cmd_validate(args) -> int:
    doc = _load_json(args.config)
    try:
        st = spacetime_from_config(doc, horizon_margin=args.horizon_margin)
    except GeometryError as exc:
        print(f"INVALID: {exc}", file=sys.stderr)
        return EXIT_INVALID
    report = {
        "patches": [
            {"mass": p.mass, "r_min": p.r_min, "r_max": p.r_max} for p in st.patches
        ],
        "shells": [
            {
                "radius": R,
                "junction_gap": induced_metric_gap(st, j),
                "rho": shell_stress(st, j).rho,
                "P_tangential": shell_stress(st, j).P_tangential,
            }
            for j, R in enumerate(st.shells)
        ],
        "lapses": list(st.lapses),
        "warnings": list(st.warnings),
    }
    _dump_json(report, args.out)
    return EXIT_OK


def cmd_stress(args) -> int:
    doc = _load_json(args.config)
    st = spacetime_from_config(doc, horizon_margin=args.horizon_margin)
    _dump_json(stress_report(st), args.out)
    return EXIT_OK


def cmd_search(args) -> int:
    config = _search_config(args)
    try:
        solution = solve_switch_configuration(config, jobs=args.jobs)
    except UnattainableRatioError as exc:
        lo, hi = exc.attainable
        print(
            f"INFEASIBLE: ratio {exc.ratio} outside attainable "
            f"[{fmt(lo)}, {fmt(hi)}]",
            file=sys.stderr,
        )
        return EXIT_INFEASIBLE
    curve = period_ratio_curve(config, jobs=args.jobs)
    out = Path(args.out) if args.out else None
    if out is not None:
        _dump_json(solution.as_dict(), str(out))
        _write_csv(out.with_name(out.stem + "_curve.csv"), "R1,f,ratio", curve)
    else:
        _dump_json(solution.as_dict(), None)
    return EXIT_OK


def cmd_trace(args) -> int:
    if args.samples <= 0:
        raise InputError("sample count must be positive")
    config = _search_config(args)
    try:
        solution = solve_switch_configuration(config, jobs=args.jobs)
    except UnattainableRatioError as exc:
        lo, hi = exc.attainable
        print(
            f"INFEASIBLE: ratio {exc.ratio} outside attainable "
            f"[{fmt(lo)}, {fmt(hi)}]",
            file=sys.stderr,
        )
        return EXIT_INFEASIBLE
    meeting = find_meeting_radius(solution, config)
    outdir = Path(args.out or ".")
    outdir.mkdir(parents=True, exist_ok=True)

    branches = {
        "gamma1": one_shell_spacetime(config, solution.R),
        "gamma2": two_shell_spacetime(config, solution.R1),
    }
    t_max = float(config.q) * solution.dt1
    for name, st in branches.items():
        samples = trajectory(st, config.r_i, t_max, args.samples)
        _write_csv(
            outdir / f"{name}.csv",
            "t_global,r,tau",
            ((t, r, tau) for t, r, tau in samples),
        )
    _far_side_tables(outdir, config, solution, args.samples)
    _dump_json(
        {"meeting": meeting.as_dict(), "solution": solution.as_dict()},
        str(outdir / "meeting.json"),
    )
    return EXIT_OK


def _far_side_tables(outdir: Path, config, solution, samples: int) -> None:
    """(r, tau) and (r, t_global) along each branch's first far-side excursion."""
    from .geodesic import CycloidParams, coordinate_time, eta_of_radius, proper_time

    params = CycloidParams.from_rest(config.M, config.r_i)
    halves = {
        "gamma1": (solution.dt1 / 2.0, solution.dtau1 / 2.0, +1),
        "gamma2": (solution.dt2 / 2.0, solution.dtau2 / 2.0, +1),
    }
    r_lo = solution.R1
    for name, (t_half, tau_half, _) in halves.items():
        rows = []
        # outbound pass (before the far apoapsis), then inbound pass
        for leg_sign in (-1, +1):
            for i in range(samples):
                r = r_lo + (config.r_i - r_lo) * i / (samples - 1)
                if leg_sign > 0:
                    r = config.r_i - (r - r_lo)  # descend for the inbound pass
                eta = eta_of_radius(params, r)
                t_e = coordinate_time(params, eta, r)
                tau_e = proper_time(params, eta)
                rows.append((t_half + leg_sign * t_e, r, tau_half + leg_sign * tau_e))
        rows.sort(key=lambda row: row[0])
        _write_csv(outdir / f"farside_{name}.csv", "t_global,r,tau", rows)


def cmd_period(args) -> int:
    doc = _load_json(args.config)
    st = spacetime_from_config(doc, horizon_margin=args.horizon_margin)
    r_i = float(doc["r_i"])
    dt, dtau, legs = oscillation_period(st, r_i)
    _dump_json(
        {
            "dt_global": dt,
            "dtau": dtau,
            "legs": [
                {
                    "patch": leg.patch_index,
                    "r_outer": leg.r_outer,
                    "r_inner": leg.r_inner,
                    "dt_local": leg.dt_local,
                    "dt_global": leg.dt_global,
                    "dtau": leg.dtau,
                }
                for leg in legs
            ],
        },
        args.out,
    )
    return EXIT_OK


def cmd_lightray(args) -> int:
    doc = _load_json(args.config)
    r_a = float(doc["r_a"])
    r_b = float(doc["r_b"])
    diametral = bool(doc.get("diametral", False))
    result = {}
    if "patches" in doc:
        st = spacetime_from_config(doc, horizon_margin=args.horizon_margin)
        fn = diametral_crossing_time if diametral else null_crossing_time
        result["dt_global"] = fn(st, r_a, r_b)
    else:
        # branch delays for a solved two-branch configuration
        config = SearchConfig.from_dict(doc)
        solution = solve_switch_configuration(config, jobs=args.jobs)
        st1 = one_shell_spacetime(config, solution.R)
        st2 = two_shell_spacetime(config, solution.R1)
        fn = diametral_crossing_time if diametral else null_crossing_time
        result["dt_branch1"] = fn(st1, r_a, r_b)
        result["dt_branch2"] = fn(st2, r_a, r_b)
    _dump_json(result, args.out)
    return EXIT_OK


def cmd_switch(args) -> int:
    doc = _load_json(args.config)
    A = sw.OperatorSpec.from_json(doc["A"])
    B = sw.OperatorSpec.from_json(doc["B"])
    psi = [complex(re, im) for re, im in doc["psi"]]
    sched = sw.EventSchedule(
        tau_A=0.0, t_A1=0.0, t_A2=2.0, t_B=1.0, t_f=4.0, tau_B=1.0, r_t=0.0
    )
    if "C" in doc and "D" in doc:
        C = sw.OperatorSpec.from_json(doc["C"])
        D = sw.OperatorSpec.from_json(doc["D"])
        joint = sw.run_general_protocol(sw.broken_switch_slots(C, D, B), psi, sched)
        orders = {"M1": ["B", "C"], "M2": ["D", "B"]}
    else:
        joint = sw.run_switch(A, B, psi, sched)
        o1, o2 = sched.branch_orders()
        orders = {"M1": list(o1), "M2": list(o2)}
    plus = sw.measure_control_diagonal(joint, +1)
    minus = sw.measure_control_diagonal(joint, -1)
    _dump_json(
        {
            "joint_state": [[z.real, z.imag] for z in joint.amplitudes],
            "branch_orders": orders,
            "measurement": {
                "plus": {"probability": plus.probability,
                         "target": [[z.real, z.imag] for z in plus.target]},
                "minus": {"probability": minus.probability,
                          "target": [[z.real, z.imag] for z in minus.target]},
            },
        },
        args.out,
    )
    return EXIT_OK


def _search_config(args) -> SearchConfig:
    doc = _load_json(args.config)
    if args.ratio:
        p, q = args.ratio.split("/")
        doc = {**doc, "p": int(p), "q": int(q)}
    if args.tol is not None:
        doc = {**doc, "tol": args.tol}
    return SearchConfig.from_dict(doc)


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shellswitch",
        description="Glued shell spacetimes, radial geodesics, and the "
        "gravitational quantum switch parameter search.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, out_help="output path"):
        p.add_argument("--config", required=True, help="input JSON config")
        p.add_argument("--out", default=None, help=out_help)
        p.add_argument("--format", choices=("csv", "json"), default=None)
        p.add_argument("--tol", type=float, default=None, help="root tolerance override")
        p.add_argument("--jobs", type=int, default=1, help="worker processes for grids")
        p.add_argument("--ratio", default=None, help="target ratio as p/q")
        p.add_argument(
            "--horizon-margin", type=float, default=DEFAULT_HORIZON_MARGIN,
            help="relative shell-horizon clearance required at validation",
        )

    common(sub.add_parser("validate", help="check a spacetime config"))
    common(sub.add_parser("stress", help="shell surface stress-energy report"))
    common(sub.add_parser("search", help="solve the switch geometry conditions"))
    p_trace = sub.add_parser("trace", help="trajectories and meeting event")
    common(p_trace, out_help="output directory")
    p_trace.add_argument("--samples", type=int, default=512)
    common(sub.add_parser("period", help="oscillation period for a spacetime"))
    common(sub.add_parser("lightray", help="radial null crossing times"))
    common(sub.add_parser("switch", help="quantum switch state evolution"))
    return parser


COMMANDS = {
    "validate": cmd_validate,
    "stress": cmd_stress,
    "search": cmd_search,
    "trace": cmd_trace,
    "period": cmd_period,
    "lightray": cmd_lightray,
    "switch": cmd_switch,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except InputError as exc:
        print(f"INPUT ERROR: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except GeometryError as exc:
        print(f"INVALID: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except SearchError as exc:
        print(f"INFEASIBLE: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except ShellSwitchError as exc:
        print(f"ERROR: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (KeyError, TypeError, ValueError) as exc:
        print(f"INPUT ERROR: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
