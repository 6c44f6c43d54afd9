"""Adaptive propagation of (x, x') under delta + epsilon cos t + F(t).

All integration goes through scipy's DOP853 embedded pair. Finite-width
kicks are integrated directly; inside |t| <= 8 w the step is capped at w/4
so the controller cannot step over the kick.
"""

import logging
import math
from collections.abc import Callable, Sequence
from functools import lru_cache
from typing import Final

import numpy as np
from scipy.integrate import solve_ivp

from arnold_gap_modes.dynamics.models import (
    HALF_PERIOD,
    FloatArray,
    HalfPeriodMap,
    KickSpec,
    MathieuParams,
    State,
)
from arnold_gap_modes.errors import ContractViolationError, IntegrationError

DEFAULT_TOL: Final = 1e-10
METHOD: Final = "DOP853"
KICK_ZONE_WIDTHS: Final = 8.0
KICK_STEP_FRACTION: Final = 0.25

logger = logging.getLogger(__name__)

Rhs = Callable[[float, FloatArray], FloatArray]


def potential_value(params: MathieuParams, kick: KickSpec, t: float) -> float:
    """Return delta + epsilon cos t + F(t).

    Raises:
        ContractViolationError: for a Dirac kick, which is matched analytically
    """
    if kick.is_dirac:
        raise ContractViolationError("potential_value is undefined for a Dirac kick")
    return params.background(t) + kick.forcing(t)


def _make_rhs(params: MathieuParams, kick: KickSpec) -> Rhs:
    """Right-hand side for any number of stacked (x, v) pairs."""
    if kick.is_dirac:
        raise ContractViolationError(
            "Dirac kicks are handled by jump matching, never by quadrature"
        )
    delta = params.delta
    epsilon = params.epsilon
    localized = kick.is_localized

    def rhs(t: float, y: FloatArray) -> FloatArray:
        q = delta + epsilon * math.cos(t)
        if localized:
            q += kick.forcing(t)
        dy = np.empty_like(y)
        dy[0::2] = y[1::2]
        dy[1::2] = -q * y[0::2]
        return dy

    return rhs


def _segments(kick: KickSpec, t0: float, t1: float) -> list[tuple[float, float, float]]:
    """Split [t0, t1] (either direction) into (start, end, max_step) pieces."""
    scale = kick.scale
    if scale is None or t0 == t1:
        return [(t0, t1, math.inf)]

    zone = KICK_ZONE_WIDTHS * scale
    cap = KICK_STEP_FRACTION * scale
    sign = 1.0 if t1 > t0 else -1.0
    cuts = [c for c in (-zone, zone) if (c - t0) * sign > 0 and (t1 - c) * sign > 0]
    cuts.sort(key=lambda c: c * sign)
    points = [t0, *cuts, t1]

    pieces: list[tuple[float, float, float]] = []
    for start, end in zip(points[:-1], points[1:]):
        mid = 0.5 * (start + end)
        pieces.append((start, end, cap if abs(mid) < zone else math.inf))
    return pieces


def _last_finite_state(y: FloatArray, t: FloatArray, fallback: State) -> State:
    for k in range(y.shape[1] - 1, -1, -1):
        if np.all(np.isfinite(y[:2, k])):
            return State.from_array(y[:2, k], float(t[k]))
    return fallback


def _integrate(
    params: MathieuParams,
    kick: KickSpec,
    y0: FloatArray,
    t0: float,
    t1: float,
    tol: float,
    times: FloatArray | None = None,
) -> tuple[FloatArray, FloatArray]:
    """Integrate stacked pairs from t0 to t1.

    Returns:
        Tuple of (final y, samples at ``times`` as columns)
    """
    if not tol > 0:
        raise ContractViolationError(f"tol must be positive, got {tol}")
    rhs = _make_rhs(params, kick)
    atol = tol * max(float(np.max(np.abs(y0))), np.finfo(np.float64).tiny)

    y = np.array(y0, dtype=np.float64)
    sign = 1.0 if t1 >= t0 else -1.0
    sample_times = np.empty(0) if times is None else np.asarray(times, dtype=np.float64)
    columns: list[FloatArray] = []
    cursor = 0

    pieces = _segments(kick, t0, t1)
    if len(pieces) > 1:
        logger.debug(
            f"Integrating {kick.describe()} over [{t0:.6g}, {t1:.6g}] in {len(pieces)} segments"
        )
    for start, end, max_step in pieces:
        upto = cursor
        while upto < sample_times.size and (sample_times[upto] - end) * sign <= 0:
            upto += 1
        t_eval = sample_times[cursor:upto]
        cursor = upto
        if start == end:
            columns.extend(np.repeat(y[:, None], t_eval.size, axis=1).T)
            continue

        sol = solve_ivp(
            rhs,
            (start, end),
            y,
            method=METHOD,
            rtol=tol,
            atol=atol,
            max_step=max_step,
            dense_output=bool(t_eval.size),
        )
        if sol.status != 0:
            fallback = State.from_array(y, start)
            last = _last_finite_state(sol.y, sol.t, fallback)
            raise IntegrationError(f"integration failed: {sol.message}", last)
        if t_eval.size:
            columns.extend(np.asarray(sol.sol(t_eval), dtype=np.float64).T)
        y = np.asarray(sol.y[:, -1], dtype=np.float64)

    samples = np.array(columns, dtype=np.float64).T if columns else np.empty((y.size, 0))
    return y, samples


def propagate(
    params: MathieuParams,
    kick: KickSpec,
    state: State,
    t_end: float,
    tol: float = DEFAULT_TOL,
) -> State:
    """Advance ``state`` to ``t_end`` (forward or backward in time).

    Raises:
        ContractViolationError: Dirac kick or non-positive tol
        IntegrationError: step-size underflow, with the last good state
    """
    y, _ = _integrate(params, kick, state.as_array(), state.t, t_end, tol)
    return State.from_array(y, t_end)


def trajectory(
    params: MathieuParams,
    kick: KickSpec,
    state: State,
    t_end: float,
    times: Sequence[float] | FloatArray = (),
    tol: float = DEFAULT_TOL,
) -> tuple[State, FloatArray]:
    """Advance ``state`` to ``t_end`` and sample (x, v) at ``times`` on the way.

    ``times`` must lie between state.t and t_end, ordered in the direction of
    integration.

    Returns:
        Tuple of (state at t_end, 2 x len(times) samples)
    """
    grid = np.asarray(times, dtype=np.float64)
    sign = 1.0 if t_end >= state.t else -1.0
    if grid.size and (
        np.any(np.diff(grid) * sign < 0)
        or (grid[0] - state.t) * sign < 0
        or (t_end - grid[-1]) * sign < 0
    ):
        raise ContractViolationError("sample times must move monotonically from state.t to t_end")
    y, samples = _integrate(params, kick, state.as_array(), state.t, t_end, tol, grid)
    return State.from_array(y, t_end), samples


def propagate_samples(
    params: MathieuParams,
    kick: KickSpec,
    state: State,
    times: Sequence[float] | FloatArray,
    tol: float = DEFAULT_TOL,
) -> FloatArray:
    """Sample the trajectory through ``state`` at ``times``.

    ``times`` must be ordered away from ``state.t``. Returns a 2 x len(times)
    array of (x, v).
    """
    grid = np.asarray(times, dtype=np.float64)
    if grid.size == 0:
        return np.empty((2, 0))
    _, samples = trajectory(params, kick, state, float(grid[-1]), grid, tol)
    return samples


def fundamental_matrix(
    params: MathieuParams,
    kick: KickSpec,
    t0: float,
    t1: float,
    tol: float = DEFAULT_TOL,
) -> FloatArray:
    """Columns are the images of (1, 0) and (0, 1) carried from t0 to t1."""
    if t0 == t1:
        return np.eye(2)
    y, _ = _integrate(params, kick, np.array([1.0, 0.0, 0.0, 1.0]), t0, t1, tol)
    return np.array([[y[0], y[2]], [y[1], y[3]]], dtype=np.float64)


@lru_cache(maxsize=8192)
def half_period_map(params: MathieuParams, tol: float = DEFAULT_TOL) -> HalfPeriodMap:
    """Even and odd fundamental solutions of the bare equation at t = pi."""
    phi = fundamental_matrix(params, KickSpec.none(), 0.0, HALF_PERIOD, tol)
    return HalfPeriodMap(
        u1=float(phi[0, 0]), du1=float(phi[1, 0]), u2=float(phi[0, 1]), du2=float(phi[1, 1])
    )


def propagate_fixed(
    params: MathieuParams,
    kick: KickSpec,
    state: State,
    t_end: float,
    steps: int,
) -> State:
    """Classical fixed-step RK4, used as an independent verification oracle."""
    if steps < 1:
        raise ContractViolationError(f"steps must be >= 1, got {steps}")
    rhs = _make_rhs(params, kick)
    h = (t_end - state.t) / steps
    t = state.t
    y = state.as_array()
    for _ in range(steps):
        k1 = rhs(t, y)
        k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1)
        k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2)
        k4 = rhs(t + h, y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t += h
    return State.from_array(y, t_end)
