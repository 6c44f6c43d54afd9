"""Stability classification, gap edges and decaying Floquet solutions.

Everything here works from the half-period map of the bare equation. Because
delta + epsilon cos t is even, the period map is fixed by the even and odd
fundamental solutions at t = pi, which keeps the stability excess and the
gap-edge functions free of cancellation even inside very narrow tongues.
"""

import logging
import math
from collections.abc import Callable
from functools import lru_cache
from typing import Final

import numpy as np
from scipy.optimize import brentq

from arnold_gap_modes.dynamics.engine import (
    DEFAULT_TOL,
    fundamental_matrix,
    half_period_map,
    propagate_samples,
)
from arnold_gap_modes.dynamics.models import (
    PERIOD,
    FloatArray,
    HalfPeriodMap,
    KickSpec,
    MathieuParams,
    State,
)
from arnold_gap_modes.errors import (
    ContractViolationError,
    EdgeNotFoundError,
    NearDegenerateError,
    NotInGapError,
)
from arnold_gap_modes.floquet.models import (
    ChartPoint,
    Direction,
    EdgeSide,
    FloquetMode,
    GapInterval,
    Monodromy,
    StabilityClass,
)

DEFAULT_EDGE_TOL: Final = 1e-9
DEFAULT_ROOT_TOL: Final = 1e-12
DEFAULT_SCAN_POINTS: Final = 400
MIN_SPLITTING: Final = 1e-6
# Numerical eigen-decomposition of an integrated period map is unreliable below
# this excess. decaying_mode builds its eigenvector in closed form from the
# half-period map and is gated by edge_tol and MIN_SPLITTING instead.
EIGEN_MIN_EXCESS: Final = 1e-7
SCAN_HALF_WIDTH: Final = 1.0

logger = logging.getLogger(__name__)


def monodromy(
    params: MathieuParams, tol: float = DEFAULT_TOL, *, direct: bool = False
) -> Monodromy:
    """Period map of the bare equation over [0, 2 pi].

    By default it is assembled from the half-period map. ``direct=True``
    integrates the full period instead and computes |trace| - 2 naively,
    which is the independent cross-check.
    """
    if direct:
        matrix = fundamental_matrix(params, KickSpec.none(), 0.0, PERIOD, tol)
        return Monodromy(matrix=matrix, trace=float(np.trace(matrix)))
    half = half_period_map(params, tol)
    return Monodromy(
        matrix=half.period_matrix(), trace=2.0 * half.diagonal, excess=half.excess
    )


def _decaying_eigenstate(half: HalfPeriodMap) -> tuple[State, float]:
    """Unit eigenvector (x0 >= 0) and multiplier of the contracting branch."""
    a = half.diagonal
    b = half.upper
    c = half.lower
    root = math.sqrt(half.product)
    sign = -math.copysign(1.0, a) * math.copysign(1.0, b)
    x0 = math.sqrt(abs(b))
    v0 = sign * math.sqrt(abs(c))
    norm = math.hypot(x0, v0)
    multiplier = math.copysign(1.0, a) / (abs(a) + 2.0 * root)
    return State(x=x0 / norm, v=v0 / norm), multiplier


def rotation_index(
    params: MathieuParams, state: State, tol: float = DEFAULT_TOL
) -> int:
    """Number of half-turns the phase-space angle of ``state`` makes per period.

    For a Floquet solution the angle advances by an exact multiple of pi,
    which is the index of the gap (0 below the first band).
    """
    reach = abs(params.delta) + params.epsilon
    samples = 32 * (1 + math.ceil(reach)) + 1
    times = np.linspace(state.t, state.t + PERIOD, samples)
    path = propagate_samples(params, KickSpec.none(), state, times, tol)
    angle = np.unwrap(np.arctan2(path[0], path[1]))
    return max(0, round(float(angle[-1] - angle[0]) / math.pi))


def classify(
    params: MathieuParams,
    edge_tol: float = DEFAULT_EDGE_TOL,
    tol: float = DEFAULT_TOL,
) -> StabilityClass:
    """Stable band, gap edge, or unstable gap with its index."""
    if not edge_tol > 0:
        raise ContractViolationError(f"edge_tol must be positive, got {edge_tol}")
    half = half_period_map(params, tol)
    excess = half.excess
    if abs(excess) <= edge_tol:
        return StabilityClass.edge()
    if excess < 0:
        return StabilityClass.stable()
    state, _ = _decaying_eigenstate(half)
    return StabilityClass.unstable(rotation_index(params, state, tol))


def decaying_mode(
    params: MathieuParams,
    direction: Direction = Direction.FORWARD,
    tol: float = DEFAULT_TOL,
    edge_tol: float = DEFAULT_EDGE_TOL,
) -> FloquetMode:
    """Floquet solution decaying as t -> +inf (FORWARD) or t -> -inf (BACKWARD).

    The backward solution is the parity image (x0, -v0) of the forward one and
    shares its multiplier, applied per period in negative time.

    The eigenvector comes in closed form from the half-period map, so points
    with |trace| - 2 below EIGEN_MIN_EXCESS are accepted down to ``edge_tol``.

    Raises:
        NotInGapError: parameters on a band or an edge
        NearDegenerateError: the two multipliers are too close to separate
    """
    half = half_period_map(params, tol)
    if half.excess <= edge_tol:
        raise NotInGapError(
            f"(delta={params.delta:g}, epsilon={params.epsilon:g}) is not inside a gap "
            f"(|trace| - 2 = {half.excess:.3e})"
        )
    splitting = 4.0 * math.sqrt(half.product)
    if splitting < MIN_SPLITTING:
        raise NearDegenerateError(
            f"multiplier splitting {splitting:.3e} below {MIN_SPLITTING:g}"
        )
    state, multiplier = _decaying_eigenstate(half)
    if direction is Direction.BACKWARD:
        state = State(x=state.x, v=-state.v)
    return FloquetMode(
        multiplier=multiplier,
        exponent=math.log(abs(multiplier)) / PERIOD,
        init_state=state,
        direction=direction,
    )


def _edge_root(
    fn: Callable[[float], float],
    grid: FloatArray,
    values: FloatArray,
    seed: float,
    tol: float,
) -> float:
    """Root of ``fn`` in the sign-change interval of ``values`` nearest ``seed``."""
    hits = np.flatnonzero(values == 0.0)
    changes = np.flatnonzero(values[:-1] * values[1:] < 0)
    candidates = [(abs(float(grid[i]) - seed), float(grid[i]), float(grid[i])) for i in hits]
    candidates += [
        (abs(0.5 * float(grid[i] + grid[i + 1]) - seed), float(grid[i]), float(grid[i + 1]))
        for i in changes
    ]
    if not candidates:
        raise EdgeNotFoundError(
            f"no sign change of the edge function near delta = {seed:g}",
            (float(grid[0]), float(grid[-1])),
        )
    _, left, right = min(candidates)
    if left == right:
        return left
    return float(brentq(fn, left, right, xtol=tol))


@lru_cache(maxsize=256)
def gap_interval(
    epsilon: float,
    n: int,
    tol: float = DEFAULT_ROOT_TOL,
    scan_points: int = DEFAULT_SCAN_POINTS,
    solver_tol: float = DEFAULT_TOL,
) -> GapInterval:
    """Locate the n-th tongue at fixed epsilon.

    Each edge is a simple root of one parity edge function (even or odd
    fundamental solution at t = pi). Both are scanned on
    [n^2/4 - 1, n^2/4 + 1], the sign change nearest n^2/4 is kept and
    refined with brentq.

    Raises:
        ContractViolationError: epsilon <= 0, n < 1 or scan_points < 2
        EdgeNotFoundError: an edge function has no sign change in the scan
    """
    if not epsilon > 0:
        raise ContractViolationError(f"gap edges need epsilon > 0, got {epsilon}")
    if n < 1:
        raise ContractViolationError(f"gap index must be >= 1, got {n}")
    if scan_points < 2:
        raise ContractViolationError(f"scan_points must be >= 2, got {scan_points}")

    seed = n * n / 4.0
    grid = np.linspace(seed - SCAN_HALF_WIDTH, seed + SCAN_HALF_WIDTH, scan_points)
    base = MathieuParams(delta=seed, epsilon=epsilon)

    def even_fn(delta: float) -> float:
        return half_period_map(base.with_delta(delta), solver_tol).edge_values(n)[0]

    def odd_fn(delta: float) -> float:
        return half_period_map(base.with_delta(delta), solver_tol).edge_values(n)[1]

    pairs = np.array(
        [half_period_map(base.with_delta(float(d)), solver_tol).edge_values(n) for d in grid]
    )
    even_root = _edge_root(even_fn, grid, pairs[:, 0], seed, tol)
    odd_root = _edge_root(odd_fn, grid, pairs[:, 1], seed, tol)
    logger.debug(
        f"Gap {n} at epsilon={epsilon:g}: even edge {even_root:.12g}, odd edge {odd_root:.12g}"
    )

    if even_root <= odd_root:
        return GapInterval(epsilon, n, even_root, odd_root, EdgeSide.LOWER)
    return GapInterval(epsilon, n, odd_root, even_root, EdgeSide.UPPER)


def gap_edges(
    epsilon: float, n: int, tol: float = DEFAULT_ROOT_TOL
) -> tuple[float, float]:
    """(lower, upper) edges of the n-th tongue."""
    return gap_interval(epsilon, n, tol).as_tuple()


def stability_chart(
    delta_range: tuple[float, float],
    epsilon_range: tuple[float, float],
    grid: tuple[int, int],
    edge_tol: float = DEFAULT_EDGE_TOL,
    tol: float = DEFAULT_TOL,
) -> list[ChartPoint]:
    """Classify a (delta, epsilon) grid, one row per epsilon value.

    Args:
        delta_range: inclusive (first, last) delta
        epsilon_range: inclusive (first, last) epsilon
        grid: (delta points, epsilon points)
    """
    n_delta, n_epsilon = grid
    if n_delta < 1 or n_epsilon < 1:
        raise ContractViolationError(f"grid dimensions must be positive, got {grid}")

    deltas = np.linspace(delta_range[0], delta_range[1], n_delta)
    epsilons = np.linspace(epsilon_range[0], epsilon_range[1], n_epsilon)
    chart: list[ChartPoint] = []
    for epsilon in epsilons:
        for delta in deltas:
            params = MathieuParams(delta=float(delta), epsilon=float(epsilon))
            chart.append(
                ChartPoint(params.delta, params.epsilon, classify(params, edge_tol, tol))
            )
    logger.debug(f"Classified {len(chart)} chart points")
    return chart
