"""Parameter search for the two switch-geometry conditions.

The one-shell spacetime (shell at R) and the two-shell spacetime (shells at
R2 < R1) share the exterior mass M and the release radius r_i.  With
R = R2 + (R1 - R2)*f, the search solves

  equal clock rates:  Dtau1/Dt1 = Dtau2/Dt2        (contour in f at fixed R1)
  rational periods:   Dt1/Dt2 = p/q                (root in R1 along the contour)

and then locates the radius where the two branch geodesics cross at equal
proper time on their first far-side excursion.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from scipy.optimize import brentq

from .errors import (
    GeodesicError,
    GeometryError,
    NoMeetingError,
    NoSolutionAtRadius,
    SearchError,
    UnattainableRatioError,
)
from .geodesic import (
    CycloidParams,
    coordinate_time,
    eta_of_radius,
    oscillation_period,
    proper_time,
)
from .spacetime import PatchSpec, ShellSpacetime, build_spacetime

F_MARGIN = 1e-6        # radial margin 1e-6 * R1 above 2M for the f bracket
F_UPPER = 1.0 - 1e-6
BRACKET_SCAN = 64      # f subdivisions used to find the first sign change


@dataclass(frozen=True)
class SearchConfig:
    m: float
    M: float
    R2: float
    r_i: float
    p: int
    q: int
    R1_min: float
    R1_max: float
    grid: int = 200
    root_tol: float = 1e-10
    residual_tol: float = 1e-8

    def __post_init__(self):
        if self.m <= 0 or self.M <= 0:
            raise SearchError("masses must be positive")
        if self.R2 <= 2.0 * self.m:
            raise SearchError(f"R2={self.R2} must exceed 2m={2.0 * self.m}")
        if self.p <= 0 or self.q <= 0:
            raise SearchError("p and q must be positive integers")
        if self.R1_min >= self.R1_max:
            raise SearchError("need R1_min < R1_max")
        if self.grid < 2:
            raise SearchError("grid must have at least 2 points")

    @property
    def target_ratio(self) -> float:
        return self.p / self.q

    @classmethod
    def from_dict(cls, doc: dict) -> "SearchConfig":
        kwargs = dict(
            m=float(doc["m"]), M=float(doc["M"]), R2=float(doc["R2"]),
            r_i=float(doc["r_i"]), p=int(doc["p"]), q=int(doc["q"]),
            R1_min=float(doc["R1_min"]), R1_max=float(doc["R1_max"]),
        )
        if "grid" in doc:
            kwargs["grid"] = int(doc["grid"])
        if "tol" in doc:
            kwargs["root_tol"] = float(doc["tol"])
        return cls(**kwargs)


@dataclass(frozen=True)
class SwitchSolution:
    R1: float
    f: float
    R: float
    dt1: float
    dtau1: float
    dt2: float
    dtau2: float
    achieved_ratio: float
    clock_residual: float
    ratio_residual: float
    config: SearchConfig

    def as_dict(self) -> dict:
        return {
            "R1": self.R1, "f": self.f, "R": self.R,
            "dt1": self.dt1, "dtau1": self.dtau1,
            "dt2": self.dt2, "dtau2": self.dtau2,
            "achieved_ratio": self.achieved_ratio,
            "clock_residual": self.clock_residual,
            "ratio_residual": self.ratio_residual,
        }


@dataclass(frozen=True)
class MeetingEvent:
    r_t: float
    tau_A: float
    t_A1: float
    t_A2: float
    gamma1_direction: str = "inbound"
    gamma2_direction: str = "outbound"

    def as_dict(self) -> dict:
        return {
            "r_t": self.r_t, "tau_A": self.tau_A,
            "t_A1": self.t_A1, "t_A2": self.t_A2,
            "gamma1_direction": self.gamma1_direction,
            "gamma2_direction": self.gamma2_direction,
        }


def one_shell_spacetime(config: SearchConfig, R: float) -> ShellSpacetime:
    return build_spacetime(
        [PatchSpec(0.0, 0.0, R), PatchSpec(config.M, R, None)]
    )


def two_shell_spacetime(config: SearchConfig, R1: float) -> ShellSpacetime:
    return build_spacetime(
        [
            PatchSpec(0.0, 0.0, config.R2),
            PatchSpec(config.m, config.R2, R1),
            PatchSpec(config.M, R1, None),
        ]
    )


def shell_radius(config: SearchConfig, R1: float, f: float) -> float:
    return config.R2 + (R1 - config.R2) * f


def branch_periods(config: SearchConfig, R1: float, f: float) -> tuple[float, float, float, float]:
    """(dt1, dtau1, dt2, dtau2) for the two branch spacetimes."""
    R = shell_radius(config, R1, f)
    dt1, dtau1, _ = oscillation_period(one_shell_spacetime(config, R), config.r_i)
    dt2, dtau2, _ = oscillation_period(two_shell_spacetime(config, R1), config.r_i)
    return dt1, dtau1, dt2, dtau2


def ratio_residual(R1: float, f: float, config: SearchConfig) -> float:
    """Dtau1/Dt1 - Dtau2/Dt2; NaN marks a geometrically invalid point."""
    try:
        dt1, dtau1, dt2, dtau2 = branch_periods(config, R1, f)
    except (GeometryError, GeodesicError):
        return math.nan
    return dtau1 / dt1 - dtau2 / dt2


def _f_bracket(config: SearchConfig, R1: float) -> tuple[float, float]:
    f_lo = (2.0 * config.M + F_MARGIN * R1 - config.R2) / (R1 - config.R2)
    if f_lo >= F_UPPER:
        raise NoSolutionAtRadius(f"no admissible f interval at R1={R1}")
    return max(f_lo, 0.0), F_UPPER


def solve_contour(R1: float, config: SearchConfig) -> float:
    """First root (in ascending f) of the equal-clock-rate residual at fixed R1."""
    f_lo, f_hi = _f_bracket(config, R1)
    fs = [f_lo + (f_hi - f_lo) * i / BRACKET_SCAN for i in range(BRACKET_SCAN + 1)]
    vals = [ratio_residual(R1, f, config) for f in fs]
    for i in range(BRACKET_SCAN):
        a, b = vals[i], vals[i + 1]
        if math.isnan(a) or math.isnan(b):
            continue
        if a == 0.0:
            return fs[i]
        if a * b < 0.0:
            return brentq(
                lambda f: ratio_residual(R1, f, config),
                fs[i], fs[i + 1], xtol=config.root_tol, rtol=8.9e-16,
            )
    raise NoSolutionAtRadius(
        f"no sign change of the clock-rate residual in f at R1={R1}"
    )


def _curve_point(args: tuple[float, SearchConfig]):
    R1, config = args
    try:
        f_star = solve_contour(R1, config)
    except NoSolutionAtRadius:
        return None
    dt1, _, dt2, _ = branch_periods(config, R1, f_star)
    return (R1, f_star, dt1 / dt2)


def period_ratio_curve(config: SearchConfig, jobs: int = 1) -> list[tuple[float, float, float]]:
    """(R1, f_star, Dt1/Dt2) along the contour over the configured R1 grid.

    Grid points are independent; results are merged in grid order so the worker
    count never changes the output.
    """
    grid = [
        config.R1_min + (config.R1_max - config.R1_min) * i / (config.grid - 1)
        for i in range(config.grid)
    ]
    args = [(R1, config) for R1 in grid]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            points = list(pool.map(_curve_point, args, chunksize=8))
    else:
        points = [_curve_point(a) for a in args]
    return [p for p in points if p is not None]


def solve_switch_configuration(config: SearchConfig, jobs: int = 1) -> SwitchSolution:
    """Solve both conditions: returns the geometry with Dt1/Dt2 = p/q on the contour."""
    curve = period_ratio_curve(config, jobs=jobs)
    if len(curve) < 2:
        raise SearchError("contour could not be traced over the R1 grid")
    target = config.target_ratio
    ratios = [pt[2] for pt in curve]
    bracket = None
    for i in range(len(curve) - 1):
        if (ratios[i] - target) * (ratios[i + 1] - target) <= 0.0:
            bracket = (curve[i][0], curve[i + 1][0])
            break
    if bracket is None:
        raise UnattainableRatioError(target, min(ratios), max(ratios))

    def g(R1: float) -> float:
        return _curve_point((R1, config))[2] - target

    R1_star = brentq(g, bracket[0], bracket[1], xtol=config.root_tol, rtol=8.9e-16)
    f_star = solve_contour(R1_star, config)
    R_star = shell_radius(config, R1_star, f_star)
    dt1, dtau1, dt2, dtau2 = branch_periods(config, R1_star, f_star)
    solution = SwitchSolution(
        R1=R1_star, f=f_star, R=R_star,
        dt1=dt1, dtau1=dtau1, dt2=dt2, dtau2=dtau2,
        achieved_ratio=dt1 / dt2,
        clock_residual=dtau1 / dt1 - dtau2 / dt2,
        ratio_residual=dt1 / dt2 - target,
        config=config,
    )
    _validate_solution(solution)
    return solution


def _validate_solution(sol: SwitchSolution) -> None:
    cfg = sol.config
    if not (2.0 * cfg.M < sol.R < sol.R1 and cfg.R2 < sol.R):
        raise SearchError(f"solved geometry invalid: R={sol.R}, R1={sol.R1}")
    if abs(sol.clock_residual) > cfg.residual_tol:
        raise SearchError(f"clock-rate residual {sol.clock_residual} above tolerance")
    if abs(sol.ratio_residual) > cfg.residual_tol:
        raise SearchError(f"period-ratio residual {sol.ratio_residual} above tolerance")


# ---------------------------------------------------------------------------
# Meeting event on the far side

def exterior_cycloid(config: SearchConfig) -> CycloidParams:
    return CycloidParams.from_rest(config.M, config.r_i)


def _exterior_spans(config: SearchConfig, r: float) -> tuple[float, float]:
    """(t, tau) spans from rest at r_i down to r in the shared exterior metric."""
    params = exterior_cycloid(config)
    eta = eta_of_radius(params, r)
    return coordinate_time(params, eta, r), proper_time(params, eta)


def find_meeting_radius(solution: SwitchSolution, config: SearchConfig) -> MeetingEvent:
    """Radius where the two branch geodesics cross at equal proper time.

    On the first far-side excursion the one-shell branch is past its turning
    point (inbound) and the two-shell branch is still outbound; in the shared
    exterior both are time-shifted copies of the same rest-release cycloid, so
    the crossing condition reduces to a bracketed root in r on (R1, r_i).
    """
    half_tau_1 = solution.dtau1 / 2.0
    half_tau_2 = solution.dtau2 / 2.0
    half_t_1 = solution.dt1 / 2.0
    half_t_2 = solution.dt2 / 2.0

    def tau_gap(r: float) -> float:
        _, tau_e = _exterior_spans(config, r)
        return (half_tau_1 + tau_e) - (half_tau_2 - tau_e)

    r_lo = solution.R1 * (1.0 + 1e-12)
    r_hi = config.r_i * (1.0 - 1e-12)
    g_lo, g_hi = tau_gap(r_lo), tau_gap(r_hi)
    if g_lo * g_hi >= 0.0:
        raise NoMeetingError(
            "proper-time curves do not cross transversally on (R1, r_i)"
        )
    r_t = brentq(tau_gap, r_lo, r_hi, xtol=1e-12, rtol=8.9e-16)
    t_e, tau_e = _exterior_spans(config, r_t)
    t_A1 = half_t_1 + t_e
    t_A2 = half_t_2 - t_e
    if not t_A1 < t_A2:
        raise NoMeetingError(f"crossing found but t_A1={t_A1} >= t_A2={t_A2}")
    return MeetingEvent(r_t=r_t, tau_A=half_tau_1 + tau_e, t_A1=t_A1, t_A2=t_A2)


# ---------------------------------------------------------------------------
# JSON interface

def load_search_config(path: str) -> SearchConfig:
    with open(path) as fh:
        return SearchConfig.from_dict(json.load(fh))
