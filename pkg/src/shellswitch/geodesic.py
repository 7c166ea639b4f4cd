"""Piecewise-analytic radial geodesics and null rays in glued shell spacetimes.

Bound radial Schwarzschild geodesics are handled in closed form through the
cycloid parametrization r = r_apo * cos^2(eta/2).  Segments in flat patches are
straight lines.  Crossing a shell transfers the tangent vector between the two
patch descriptions while keeping proper time and global coordinate time
continuous; a full oscillation is composed out of quarter-oscillation legs with
the per-patch lapse factors applied.

The coordinate-time log term is evaluated through (r - 2*mass)/r expressions:
the configurations of interest place shells within ~1e-4 of their horizons,
where the naive tan-difference form loses most of its digits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Literal

from .errors import (
    GeodesicError,
    HorizonViolation,
    NoRestoringForceError,
    UnboundGeodesicError,
    UnreachableRadiusError,
)
from .spacetime import ShellSpacetime, metric_factor

SHELL_TOL = 1e-12  # |r - R| <= SHELL_TOL * R counts as "at the shell"
APOAPSIS_CLAMP = 1e-14

Direction = Literal["inbound", "outbound"]


# ---------------------------------------------------------------------------
# Single-patch cycloid kinematics

@dataclass(frozen=True)
class CycloidParams:
    """Bound radial geodesic in one Schwarzschild patch of the given mass,
    released from rest (possibly fictitiously) at r_apo."""

    mass: float
    r_apo: float
    energy: float

    def __post_init__(self):
        if not 0.0 < self.energy < 1.0:
            raise UnboundGeodesicError(
                f"bound motion requires 0 < E < 1, got E={self.energy}"
            )

    @property
    def eta_horizon(self) -> float:
        return 2.0 * math.asin(self.energy)

    @classmethod
    def from_rest(cls, mass: float, r_apo: float) -> "CycloidParams":
        return cls(mass=mass, r_apo=r_apo, energy=drop_energy(mass, r_apo))

    @classmethod
    def from_state(cls, mass: float, r: float, u_r: float) -> "CycloidParams":
        """Extend a mid-flight state (r, dr/dtau) to its fictitious rest-release
        geodesic in a single metric of this mass."""
        f = metric_factor(mass, r)
        E_sq = u_r * u_r + f
        if E_sq >= 1.0:
            raise UnboundGeodesicError(
                f"local energy E={math.sqrt(E_sq):.12g} >= 1 at r={r}"
            )
        # 1 - E^2 = 2*mass/r - u_r^2, formed without subtracting near-unity terms
        one_minus_E2 = 2.0 * mass / r - u_r * u_r
        return cls(mass=mass, r_apo=2.0 * mass / one_minus_E2, energy=math.sqrt(E_sq))


def drop_energy(mass: float, r_i: float) -> float:
    """Conserved energy of a body released from rest at r_i."""
    if r_i <= 2.0 * mass:
        raise HorizonViolation(
            f"release radius r_i={r_i} at or inside the horizon 2*mass={2.0 * mass}"
        )
    return math.sqrt(metric_factor(mass, r_i))


def eta_of_radius(params: CycloidParams, r: float) -> float:
    """Invert r = r_apo * cos^2(eta/2) on the inbound branch eta in [0, pi)."""
    x = r / params.r_apo
    if x > 1.0:
        if x - 1.0 > APOAPSIS_CLAMP:
            raise UnreachableRadiusError(
                f"radius {r} beyond apoapsis {params.r_apo}"
            )
        x = 1.0
    if x < 0.0:
        raise GeodesicError(f"negative radius {r}")
    return 2.0 * math.acos(math.sqrt(x))


def radius(params: CycloidParams, eta: float) -> float:
    return params.r_apo * math.cos(0.5 * eta) ** 2


def proper_time(params: CycloidParams, eta: float) -> float:
    """Proper time elapsed from rest at r_apo (eta = 0)."""
    return math.sqrt(params.r_apo**3 / (8.0 * params.mass)) * (eta + math.sin(eta))


def coordinate_time(params: CycloidParams, eta: float, r: float | None = None) -> float:
    """Patch coordinate time elapsed from rest at r_apo (eta = 0).

    When the radius at eta is known exactly (e.g. a shell radius), pass it as r
    so that the near-horizon factor r - 2*mass is formed from the exact value.
    """
    E, mass, r_apo = params.energy, params.mass, params.r_apo
    if r is None:
        r = radius(params, eta)
    if r <= 2.0 * mass:
        raise GeodesicError(
            f"coordinate time diverges: r={r} at or inside horizon {2.0 * mass}"
        )
    one_minus_E2 = 2.0 * mass / r_apo
    poly = E * math.sqrt(r_apo**3 / (2.0 * mass)) * (
        0.5 * (eta + math.sin(eta)) + one_minus_E2 * eta
    )
    tan_h = math.sqrt((r_apo - 2.0 * mass) / (2.0 * mass))
    tan_e = math.tan(0.5 * eta)
    # tan_h^2 - tan_e^2 == r_apo*(r - 2*mass) / (2*mass*r), so the log of the
    # ratio (tan_h + tan_e)/(tan_h - tan_e) can be formed without cancellation:
    log_term = 2.0 * mass * math.log(
        (tan_h + tan_e) ** 2 * (2.0 * mass * r) / (r_apo * (r - 2.0 * mass))
    )
    return poly + log_term


def tangent(params: CycloidParams, eta: float, r: float | None = None) -> tuple[float, float]:
    """(U^0, U^1) = (dt/dtau, dr/dtau) on the inbound branch."""
    if r is None:
        r = radius(params, eta)
    U0 = params.energy * r / (r - 2.0 * params.mass)
    U1 = -math.sqrt(2.0 * params.mass / params.r_apo) * math.tan(0.5 * eta)
    return U0, U1


def cycloid_state(params: CycloidParams, eta: float) -> tuple[float, float, float, float, float]:
    """(r, t, tau, U0, U1) at parameter eta on the inbound branch."""
    if not 0.0 <= eta < math.pi:
        raise GeodesicError(f"eta={eta} outside [0, pi)")
    r = radius(params, eta)
    if r <= 2.0 * params.mass:
        raise GeodesicError(f"eta={eta} reaches r={r} inside the horizon")
    t = coordinate_time(params, eta, r)
    tau = proper_time(params, eta)
    U0, U1 = tangent(params, eta, r)
    return r, t, tau, U0, U1


# ---------------------------------------------------------------------------
# Per-patch segments and shell crossings

@dataclass(frozen=True)
class GeodesicState:
    """Kinematic state in the local coordinates of one patch."""

    patch_index: int
    r: float
    u_r: float  # dr/dtau, local
    u_t: float  # dt_local/dtau
    tau: float
    t_global: float
    direction: Direction

    def norm_defect(self, mass: float) -> float:
        """Deviation of the local 4-velocity norm from -1."""
        f = metric_factor(mass, self.r)
        return abs(-f * self.u_t**2 + self.u_r**2 / f + 1.0)


@dataclass(frozen=True)
class SegmentResult:
    dt_local: float
    dtau: float
    exit_state: GeodesicState
    cycloid: CycloidParams | None = None
    eta_entry: float | None = None
    eta_exit: float | None = None


def segment_schwarzschild(mass: float, entry: GeodesicState, r_exit: float) -> SegmentResult:
    """Propagate through one Schwarzschild patch from entry.r to r_exit.

    The motion is a piece of the fictitious rest-release cycloid through the
    entry state; outbound pieces use the time-reflection of the inbound branch,
    so both spans are absolute values of parametric differences.
    """
    if mass <= 0.0:
        raise GeodesicError("segment_schwarzschild needs mass > 0")
    params = CycloidParams.from_state(mass, entry.r, entry.u_r)
    if r_exit > params.r_apo * (1.0 + APOAPSIS_CLAMP):
        raise UnreachableRadiusError(
            f"exit radius {r_exit} beyond fictitious apoapsis {params.r_apo}"
        )
    eta_a = eta_of_radius(params, entry.r)
    eta_b = eta_of_radius(params, r_exit)
    dt = abs(
        coordinate_time(params, eta_b, r_exit) - coordinate_time(params, eta_a, entry.r)
    )
    dtau = abs(proper_time(params, eta_b) - proper_time(params, eta_a))
    sign = 1.0 if r_exit > entry.r else (-1.0 if r_exit < entry.r else math.copysign(1.0, entry.u_r))
    U0, U1 = tangent(params, eta_b, r_exit)
    exit_state = GeodesicState(
        patch_index=entry.patch_index,
        r=r_exit,
        u_r=sign * abs(U1),
        u_t=U0,
        tau=entry.tau + dtau,
        t_global=entry.t_global,  # caller applies the lapse
        direction="outbound" if sign > 0 else "inbound",
    )
    return SegmentResult(dt, dtau, exit_state, params, eta_a, eta_b)


def segment_minkowski(entry: GeodesicState, r_exit: float) -> SegmentResult:
    """Uniform straight-line motion in a flat patch."""
    dr = r_exit - entry.r
    if dr == 0.0:
        return SegmentResult(0.0, 0.0, entry)
    if entry.u_r == 0.0:
        raise GeodesicError("stationary particle cannot reach a different radius")
    dtau = abs(dr / entry.u_r)
    dt = entry.u_t * dtau
    exit_state = replace(
        entry,
        r=r_exit,
        tau=entry.tau + dtau,
        direction="outbound" if dr > 0 else "inbound",
    )
    return SegmentResult(dt, dtau, exit_state)


def cross_shell(state: GeodesicState, spacetime: ShellSpacetime, shell_index: int) -> GeodesicState:
    """Re-express the tangent vector on the other side of a shell.

    Proper time and global coordinate time are continuous; only the local
    components (u_t, u_r) and the patch index change.
    """
    R = spacetime.shells[shell_index]
    if abs(state.r - R) > SHELL_TOL * R:
        raise GeodesicError(f"state at r={state.r} is not at shell R={R}")
    mu_in, mu_out = spacetime.shell_masses(shell_index)
    f_in = metric_factor(mu_in, R)
    f_out = metric_factor(mu_out, R)
    inward = state.patch_index == shell_index + 1
    if not inward and state.patch_index != shell_index:
        raise GeodesicError(
            f"state in patch {state.patch_index} is not adjacent to shell {shell_index}"
        )
    k = math.sqrt(f_out / f_in)  # u_r(out) = k * u_r(in); u_t(out) = u_t(in)/k
    if inward:
        new = replace(state, patch_index=shell_index, u_r=state.u_r / k, u_t=state.u_t * k)
    else:
        new = replace(state, patch_index=shell_index + 1, u_r=state.u_r * k, u_t=state.u_t / k)
    return new


# ---------------------------------------------------------------------------
# Full oscillations

@dataclass(frozen=True)
class Leg:
    """One patch traversal of the quarter oscillation, with global-time span."""

    patch_index: int
    r_outer: float
    r_inner: float
    dt_local: float
    dt_global: float
    dtau: float
    entry: GeodesicState
    segment: SegmentResult


def release_state(spacetime: ShellSpacetime, r_i: float) -> GeodesicState:
    outer = spacetime.n_patches - 1
    mass = spacetime.patches[outer].mass
    if mass <= 0.0:
        raise NoRestoringForceError("outermost patch is flat: nothing pulls the body back")
    if r_i < spacetime.patches[outer].r_min:
        raise GeodesicError(f"release radius {r_i} below the outermost patch")
    E = drop_energy(mass, r_i)
    f = metric_factor(mass, r_i)
    return GeodesicState(
        patch_index=outer, r=r_i, u_r=0.0, u_t=E / f,
        tau=0.0, t_global=0.0, direction="inbound",
    )


def quarter_oscillation(spacetime: ShellSpacetime, r_i: float) -> list[Leg]:
    """Inbound legs from rest at r_i down to the center, one per patch."""
    if spacetime.patches[0].mass != 0.0:
        raise NoRestoringForceError(
            "oscillation through the center requires a flat core"
        )
    state = release_state(spacetime, r_i)
    legs: list[Leg] = []
    t_global = 0.0
    for k in range(spacetime.n_patches - 1, -1, -1):
        patch = spacetime.patches[k]
        r_target = patch.r_min  # 0 for the core
        if patch.mass > 0.0:
            seg = segment_schwarzschild(patch.mass, state, r_target)
        else:
            seg = segment_minkowski(state, r_target)
        dt_global = spacetime.lapses[k] * seg.dt_local
        exit_state = replace(seg.exit_state, t_global=t_global + dt_global)
        seg = replace(seg, exit_state=exit_state)
        legs.append(
            Leg(
                patch_index=k,
                r_outer=state.r,
                r_inner=r_target,
                dt_local=seg.dt_local,
                dt_global=dt_global,
                dtau=seg.dtau,
                entry=state,
                segment=seg,
            )
        )
        t_global += dt_global
        state = exit_state
        if k > 0:
            state = cross_shell(state, spacetime, k - 1)
    return legs


def oscillation_period(spacetime: ShellSpacetime, r_i: float) -> tuple[float, float, list[Leg]]:
    """(Dt_global, Dtau, quarter legs) for one full radial oscillation.

    The full period is exactly four mirrored quarter oscillations of the
    time-symmetric motion through the center.
    """
    legs = quarter_oscillation(spacetime, r_i)
    dt = 4.0 * sum(leg.dt_global for leg in legs)
    dtau = 4.0 * sum(leg.dtau for leg in legs)
    return dt, dtau, legs


# ---------------------------------------------------------------------------
# Trajectory sampling in global time

def _invert_leg(leg: Leg, t_in_leg: float) -> tuple[float, float]:
    """(r, tau elapsed within leg) at global-time offset t_in_leg from leg start."""
    seg = leg.segment
    if t_in_leg <= 0.0:
        return leg.r_outer, 0.0
    if t_in_leg >= leg.dt_global:
        return leg.r_inner, leg.dtau
    if seg.cycloid is None:
        # flat patch: r and tau are linear in t
        frac = t_in_leg / leg.dt_global
        return (
            leg.r_outer + frac * (leg.r_inner - leg.r_outer),
            frac * leg.dtau,
        )
    params = seg.cycloid
    t_local_target = t_in_leg / (leg.dt_global / leg.dt_local)
    t0 = coordinate_time(params, seg.eta_entry, leg.r_outer)
    lo, hi = seg.eta_entry, seg.eta_exit
    # t(eta) is strictly increasing on the inbound branch; bisect to 1e-12 in eta
    while hi - lo > 1e-12:
        mid = 0.5 * (lo + hi)
        if coordinate_time(params, mid) - t0 < t_local_target:
            lo = mid
        else:
            hi = mid
    eta = 0.5 * (lo + hi)
    tau0 = proper_time(params, seg.eta_entry)
    return radius(params, eta), proper_time(params, eta) - tau0


def _quarter_sample(legs: list[Leg], t_quarter_offset: float) -> tuple[float, float]:
    """(r, tau) within the inbound quarter at global-time offset from release."""
    t0 = 0.0
    for leg in legs:
        if t_quarter_offset <= t0 + leg.dt_global or leg is legs[-1]:
            r, dtau = _invert_leg(leg, t_quarter_offset - t0)
            tau0 = leg.entry.tau
            return r, tau0 + dtau
        t0 += leg.dt_global
    raise AssertionError("unreachable")


def trajectory(
    spacetime: ShellSpacetime, r_i: float, t_global_max: float, sample_count: int
) -> list[tuple[float, float, float]]:
    """Uniform global-time samples (t_global, r, tau) of the oscillating drop."""
    if sample_count <= 0:
        raise GeodesicError("sample_count must be positive")
    dt_period, dtau_period, legs = oscillation_period(spacetime, r_i)
    t_quarter = dt_period / 4.0
    t_half = dt_period / 2.0
    tau_quarter = dtau_period / 4.0
    tau_half = dtau_period / 2.0

    samples = []
    for i in range(sample_count):
        t = t_global_max * i / (sample_count - 1) if sample_count > 1 else 0.0
        n_half, rem = divmod(t, t_half)
        if rem <= t_quarter:
            r, tau_q = _quarter_sample(legs, rem)
            tau = n_half * tau_half + tau_q
        else:
            r, tau_q = _quarter_sample(legs, t_half - rem)
            tau = (n_half + 1.0) * tau_half - tau_q
        samples.append((t, r, tau))
    return samples


# ---------------------------------------------------------------------------
# Null rays and static observers

def _null_dt_schwarzschild(mass: float, r_near: float, r_far: float) -> float:
    """Coordinate time for a radial light ray between two radii (one patch)."""
    if r_near <= 2.0 * mass:
        raise HorizonViolation(
            f"null segment reaches r={r_near} at or inside horizon {2.0 * mass}"
        )
    return (r_far - r_near) + 2.0 * mass * math.log(
        (r_far - 2.0 * mass) / (r_near - 2.0 * mass)
    )


def null_crossing_time(spacetime: ShellSpacetime, r_a: float, r_b: float) -> float:
    """Global coordinate time for a radial null ray from r_a to r_b.

    Each patch contributes its local closed-form crossing time, converted to
    global time by the patch lapse.
    """
    lo, hi = min(r_a, r_b), max(r_a, r_b)
    total = 0.0
    for k, patch in enumerate(spacetime.patches):
        p_lo = max(lo, patch.r_min)
        p_hi = hi if patch.r_max is None else min(hi, patch.r_max)
        if p_hi <= p_lo:
            continue
        if patch.mass > 0.0:
            dt_local = _null_dt_schwarzschild(patch.mass, p_lo, p_hi)
        else:
            dt_local = p_hi - p_lo
        total += spacetime.lapses[k] * dt_local
    return total


def diametral_crossing_time(spacetime: ShellSpacetime, r_from: float, r_to: float) -> float:
    """Radial ray through the center: r_from down to 0, then out to r_to."""
    return null_crossing_time(spacetime, r_from, 0.0) + null_crossing_time(
        spacetime, 0.0, r_to
    )


def static_exchange(r_a: float, r_b: float, tau_a: float, M: float) -> float:
    """Proper time of a static observer at r_b receiving a radial light signal
    emitted at proper time tau_a by a static observer at r_a (same exterior
    Schwarzschild patch of mass M, r_b > r_a)."""
    if not r_b > r_a:
        raise GeodesicError(f"need r_b > r_a, got r_a={r_a}, r_b={r_b}")
    if r_a <= 2.0 * M:
        raise HorizonViolation(f"static observer at r_a={r_a} inside horizon")
    if M == 0.0:
        return tau_a + (r_b - r_a)
    f_a = metric_factor(M, r_a)
    f_b = metric_factor(M, r_b)
    dt = _null_dt_schwarzschild(M, r_a, r_b)
    return math.sqrt(f_b) * (tau_a / math.sqrt(f_a) + dt)
