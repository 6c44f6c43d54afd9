"""Gap modes bound by a Dirac kick -lambda * delta(t) at the origin.

A gap mode joins the solution decaying for t -> +inf to the one decaying
for t -> -inf. Continuity at 0 and the derivative jump x'(0+) - x'(0-) =
lambda x(0) fix the strength:

    lambda = m+'(0)/m+(0) - m-'(0)/m-(0) = 2 v0 / x0

where (x0, v0) is the forward-decaying Floquet state and the backward one is
its parity image. The required strength vanishes at the even-solution edge of
the gap, diverges at the odd-solution edge, and grows monotonically in
between, so each admissible strength binds exactly one mode per gap.
"""

import logging
import math
from collections.abc import Sequence
from typing import Final

import numpy as np
from scipy.optimize import brentq

from arnold_gap_modes.dynamics.engine import DEFAULT_TOL, propagate_samples, trajectory
from arnold_gap_modes.dynamics.models import PERIOD, FloatArray, KickSpec, MathieuParams, State
from arnold_gap_modes.errors import (
    ContractViolationError,
    FitError,
    InconsistentModeError,
    NearDegenerateError,
    NoGapModeError,
    NotInGapError,
    PoleError,
    RootNotFoundError,
)
from arnold_gap_modes.floquet.analysis import (
    DEFAULT_EDGE_TOL,
    DEFAULT_ROOT_TOL,
    EIGEN_MIN_EXCESS,
    classify,
    decaying_mode,
    gap_interval,
    monodromy,
)
from arnold_gap_modes.floquet.models import Direction, FloquetMode, GapInterval
from arnold_gap_modes.modes.envelope import fit_envelope
from arnold_gap_modes.modes.models import FlowPoint, GapMode, LambdaForms, Profile

POLE_TOL: Final = 1e-12
FORMS_AGREEMENT: Final = 1e-6
CONSISTENCY_TOL: Final = 1e-6
SHOOTING_CONTAMINATION: Final = 1e-12
SHOOTING_MIN_PERIODS: Final = 6
SHOOTING_MAX_PERIODS: Final = 400
BRACKET_FRACTIONS: Final = (1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9, 1e-10)
DIAGNOSTIC_POINTS: Final = 21

logger = logging.getLogger(__name__)


def lambda_required(
    params: MathieuParams,
    tol: float = DEFAULT_TOL,
    edge_tol: float = DEFAULT_EDGE_TOL,
) -> float:
    """Kick strength for which (delta, epsilon) carries a gap mode.

    Raises:
        NotInGapError: parameters on a band or an edge
        PoleError: the forward state has x0 = 0 (odd-solution limit)
    """
    mode = decaying_mode(params, Direction.FORWARD, tol, edge_tol)
    x0 = mode.init_state.x
    if x0 <= POLE_TOL:
        raise PoleError(
            f"m+(0) = {x0:.3e} at delta={params.delta:g}; the required strength diverges"
        )
    return 2.0 * mode.init_state.v / x0


def lambda_required_forms(params: MathieuParams, tol: float = DEFAULT_TOL) -> LambdaForms:
    """Both evaluations of the required strength.

    ``general`` uses the two eigenvectors of the directly integrated period
    map (contracting for m+, expanding for m-); ``reduced`` is 2 v0 / x0.
    """
    reduced = lambda_required(params, tol)
    direct = monodromy(params, tol, direct=True)
    if direct.excess <= EIGEN_MIN_EXCESS:
        logger.debug(f"Gap too narrow for the two-sided form at delta={params.delta:g}")
        return LambdaForms(general=None, reduced=reduced)

    values, vectors = np.linalg.eig(direct.matrix)
    order = np.argsort(np.abs(values))
    plus = np.real(vectors[:, order[0]])
    minus = np.real(vectors[:, order[1]])
    general = float(plus[1] / plus[0] - minus[1] / minus[0])
    if abs(general - reduced) > FORMS_AGREEMENT * max(1.0, abs(reduced)):
        logger.warning(
            f"Required-strength forms disagree at delta={params.delta:g}: "
            f"{general:.12g} vs {reduced:.12g}"
        )
    return LambdaForms(general=general, reduced=reduced)


def shooting_periods(multiplier: float) -> int:
    """Periods needed for a generic start to shed its growing component."""
    decay = -math.log(abs(multiplier))
    wanted = math.ceil(-math.log(SHOOTING_CONTAMINATION) / (2.0 * decay))
    return min(max(wanted, SHOOTING_MIN_PERIODS), SHOOTING_MAX_PERIODS)


def lambda_required_shooting(
    params: MathieuParams,
    periods: int | None = None,
    tol: float = DEFAULT_TOL,
) -> float:
    """Independent estimate of the required strength by long-window shooting.

    A generic state is started at +2 pi N and at -2 pi N and integrated
    towards the origin, where each has collapsed onto the solution decaying
    away from it.
    """
    if periods is None:
        mode = decaying_mode(params, Direction.FORWARD, tol)
        periods = shooting_periods(mode.multiplier)
        if periods == SHOOTING_MAX_PERIODS:
            logger.warning(
                f"Shooting window capped at {periods} periods; multiplier {mode.multiplier:.6g}"
            )
    if periods < 1:
        raise ContractViolationError(f"periods must be >= 1, got {periods}")

    reach = periods * PERIOD
    start = 1.0 / math.sqrt(2.0)
    right = _collapse(params, State(x=start, v=start, t=reach), tol)
    left = _collapse(params, State(x=start, v=start, t=-reach), tol)
    if abs(right.x) <= POLE_TOL * right.norm or abs(left.x) <= POLE_TOL * left.norm:
        raise PoleError(f"shooting reached x(0) = 0 at delta={params.delta:g}")
    logger.debug(f"Shooting oracle over {periods} periods at delta={params.delta:g}")
    return right.v / right.x - left.v / left.x


def _collapse(params: MathieuParams, state: State, tol: float) -> State:
    """Integrate to t = 0 one period at a time, renormalizing as the state grows."""
    steps = round(abs(state.t) / PERIOD)
    direction = -1.0 if state.t > 0 else 1.0
    current = state
    for k in range(steps - 1, -1, -1):
        end = -direction * k * PERIOD
        current, _ = trajectory(params, KickSpec.none(), current, end, (), tol)
        norm = current.norm
        current = State(x=current.x / norm, v=current.v / norm, t=end)
    return current


def _strength_gap(strength: float, epsilon: float, n: int) -> GapInterval:
    if strength == 0:
        raise NoGapModeError(
            "a zero-strength kick binds no mode: the matching determinant vanishes"
        )
    gap = gap_interval(epsilon, n)
    if math.copysign(1, strength) != gap.admissible_sign:
        raise NoGapModeError(
            f"gap {n} binds modes only for strength of sign {gap.admissible_sign:+d}, "
            f"got {strength:g}"
        )
    return gap


def _safe_required(params: MathieuParams, tol: float) -> float | None:
    try:
        return lambda_required(params, tol)
    except (NotInGapError, NearDegenerateError, PoleError):
        return None


def _diagnostic_scan(
    base: MathieuParams, lower: float, upper: float, tol: float
) -> list[tuple[float, float]]:
    rows: list[tuple[float, float]] = []
    for delta in np.linspace(lower, upper, DIAGNOSTIC_POINTS)[1:-1]:
        value = _safe_required(base.with_delta(float(delta)), tol)
        rows.append((float(delta), math.nan if value is None else value))
    return rows


def solve_delta(
    strength: float,
    epsilon: float,
    n: int,
    tol: float = DEFAULT_ROOT_TOL,
    solver_tol: float = DEFAULT_TOL,
) -> float:
    """Spectral parameter of the gap mode bound by a kick of this strength.

    Raises:
        NoGapModeError: zero strength, or a sign the gap cannot bind
        RootNotFoundError: no bracket inside the gap (carries a scan table)
    """
    gap = _strength_gap(strength, epsilon, n)
    base = MathieuParams(delta=gap.midpoint, epsilon=epsilon)

    def excess_strength(delta: float) -> float:
        return lambda_required(base.with_delta(delta), solver_tol) - strength

    lo: float | None = None
    hi: float | None = None
    for fraction in BRACKET_FRACTIONS:
        if lo is None:
            candidate = gap.interior(fraction)
            value = _safe_required(base.with_delta(candidate), solver_tol)
            if value is not None and value < strength:
                lo = candidate
        if hi is None:
            candidate = gap.interior(1.0 - fraction)
            value = _safe_required(base.with_delta(candidate), solver_tol)
            if value is not None and value > strength:
                hi = candidate
        if lo is not None and hi is not None:
            break

    if lo is None or hi is None:
        raise RootNotFoundError(
            f"no bracket for strength {strength:g} in gap {n} at epsilon={epsilon:g}",
            _diagnostic_scan(base, gap.lower, gap.upper, solver_tol),
        )
    logger.debug(f"Bracket [{lo:.12g}, {hi:.12g}] for strength {strength:g} in gap {n}")
    return float(brentq(excess_strength, lo, hi, xtol=tol))


def _branch_samples(
    params: MathieuParams, mode: FloquetMode, times: FloatArray, tol: float
) -> FloatArray:
    """Values of one Floquet branch on ``times`` (all of one sign, or zero).

    One period is integrated and the rest follows from x(t + 2 pi k) = mu^k x(t),
    applied through logarithms so long windows cannot overflow.
    """
    span = np.abs(times)
    k = np.floor(span / PERIOD)
    offsets, inverse = np.unique(np.maximum(span - k * PERIOD, 0.0), return_inverse=True)
    sign = 1.0 if mode.direction is Direction.FORWARD else -1.0
    state = mode.init_state
    base = propagate_samples(params, KickSpec.none(), state, sign * offsets, tol)[0]
    log_scale = k * math.log(abs(mode.multiplier))
    parity = np.where(np.mod(k, 2) == 1, math.copysign(1.0, mode.multiplier), 1.0)
    return np.asarray(parity * np.exp(log_scale) * base[inverse], dtype=np.float64)


def _symmetric_grid(half_window: float, samples: int) -> FloatArray:
    if not half_window > 0:
        raise ContractViolationError(f"half_window must be positive, got {half_window}")
    if samples < 3:
        raise ContractViolationError(f"samples must be >= 3, got {samples}")
    return np.linspace(-half_window, half_window, samples)


def _measured_decay(profile: Profile) -> float:
    try:
        return fit_envelope(profile)
    except FitError as e:
        logger.debug(f"No envelope fit: {e}")
        return math.nan


def build_profile(
    delta: float,
    epsilon: float,
    strength: float,
    half_window: float,
    samples: int,
    tol: float = DEFAULT_TOL,
) -> GapMode:
    """Assemble the gap mode on [-T, T] from the two decaying branches.

    Each branch is scaled to x(0) = 1 and the whole profile to max |x| = 1.

    Raises:
        NotInGapError: (delta, epsilon) on a band or an edge
        InconsistentModeError: the kick strength does not bind a mode at delta
    """
    params = MathieuParams(delta=delta, epsilon=epsilon)
    required = lambda_required(params, tol)
    if abs(required - strength) > CONSISTENCY_TOL * max(1.0, abs(strength)):
        raise InconsistentModeError(
            f"strength {strength:g} does not bind a mode at delta={delta:.12g} "
            f"(requires {required:.12g})"
        )
    stability = classify(params, tol=tol)
    assert stability.gap_index is not None

    t = _symmetric_grid(half_window, samples)
    plus = decaying_mode(params, Direction.FORWARD, tol)
    minus = decaying_mode(params, Direction.BACKWARD, tol)
    x = np.empty_like(t)
    right = t >= 0
    x[right] = _branch_samples(params, plus, t[right], tol) / plus.init_state.x
    x[~right] = _branch_samples(params, minus, t[~right], tol) / minus.init_state.x

    jump = (plus.init_state.v - minus.init_state.v) / plus.init_state.x
    profile = Profile.normalized(t, x)
    n = stability.gap_index
    mode = GapMode(
        params=params,
        kick=KickSpec.dirac(strength),
        gap_index=n,
        strength=strength,
        profile=profile,
        measured_decay=_measured_decay(profile),
        delta1=(delta - 0.25) / epsilon if n == 1 else None,
        jump_defect=abs(jump - strength) / max(1.0, abs(strength)),
    )
    logger.debug(
        f"Built gap mode n={n} at delta={delta:.12g}, decay {mode.measured_decay:.6g}"
    )
    return mode


def spectral_flow(
    epsilon: float,
    n: int,
    strengths: Sequence[float],
    tol: float = DEFAULT_ROOT_TOL,
) -> list[FlowPoint]:
    """Gap-mode delta for each strength, with delta1 = (delta - n^2/4) / epsilon."""
    grid = list(strengths)
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ContractViolationError("strengths must be strictly increasing")

    seed = n * n / 4.0
    flow: list[FlowPoint] = []
    for strength in grid:
        delta = solve_delta(strength, epsilon, n, tol)
        flow.append(FlowPoint(strength=strength, delta=delta, delta1=(delta - seed) / epsilon))
    for before, after in zip(flow, flow[1:]):
        if not after.delta > before.delta:
            logger.warning(
                f"Spectral flow not increasing between strengths {before.strength:g} "
                f"and {after.strength:g}"
            )
    return flow


def wronskian_check(params: MathieuParams, tol: float = DEFAULT_TOL) -> float:
    """Wronskian m+ m-' - m- m+' of the two decaying branches at t = 0.

    It is nonzero inside a gap, so a zero-strength kick can never bind a mode.
    """
    plus = decaying_mode(params, Direction.FORWARD, tol).init_state
    minus = decaying_mode(params, Direction.BACKWARD, tol).init_state
    return plus.x * minus.v - minus.x * plus.v


def edge_profile(
    epsilon: float,
    n: int,
    offset: float,
    half_window: float,
    samples: int,
    tol: float = DEFAULT_TOL,
) -> Profile:
    """Even, quasiperiodic band solution just below the lower edge of gap n."""
    if not offset > 0:
        raise ContractViolationError(f"offset must be positive, got {offset}")
    gap = gap_interval(epsilon, n)
    params = MathieuParams(delta=gap.lower - offset, epsilon=epsilon)
    t = _symmetric_grid(half_window, samples)
    right = t >= 0
    even = State(x=1.0, v=0.0)
    x = np.empty_like(t)
    x[right] = propagate_samples(params, KickSpec.none(), even, t[right], tol)[0]
    x[~right] = propagate_samples(params, KickSpec.none(), even, t[~right][::-1], tol)[0][::-1]
    return Profile.normalized(t, x)
