"""Data models for gap modes, asymptotic predictions and shooting problems."""

import math
from dataclasses import dataclass, field
from typing import Final, Self

import numpy as np

from arnold_gap_modes.dynamics.models import PERIOD, FloatArray, KickSpec, MathieuParams
from arnold_gap_modes.errors import ContractViolationError

PERIOD_MATCH_TOL: Final = 1e-9


@dataclass(frozen=True, eq=False)
class Profile:
    """Sampled solution x(t) on an increasing time grid."""

    t: FloatArray
    x: FloatArray

    def __post_init__(self) -> None:
        if self.t.ndim != 1 or self.t.shape != self.x.shape:
            raise ContractViolationError(
                f"profile arrays must be 1-D and equal length, got {self.t.shape} and {self.x.shape}"
            )
        if self.t.size > 1 and np.any(np.diff(self.t) <= 0):
            raise ContractViolationError("profile times must be strictly increasing")

    @classmethod
    def normalized(cls, t: FloatArray, x: FloatArray) -> Self:
        """Scale so that max |x| = 1."""
        peak = float(np.max(np.abs(x)))
        if not peak > 0:
            raise ContractViolationError("cannot normalize an identically zero profile")
        return cls(t=t, x=x / peak)

    @property
    def peak(self) -> float:
        return float(np.max(np.abs(self.x)))

    @property
    def is_symmetric_grid(self) -> bool:
        return bool(np.allclose(self.t, -self.t[::-1], rtol=0.0, atol=1e-12 * max(1.0, self.t[-1])))

    def parity_defect(self) -> float:
        """max |x(t) - x(-t)| relative to max |x|, on a grid symmetric about 0."""
        if not self.is_symmetric_grid:
            raise ContractViolationError("parity needs a time grid symmetric about t = 0")
        return float(np.max(np.abs(self.x - self.x[::-1]))) / self.peak

    def value_at(self, t: float) -> float:
        return float(np.interp(t, self.t, self.x))


@dataclass(frozen=True, eq=False)
class GapMode:
    """A solution decaying on both sides of a localized kick.

    ``strength`` is the kick strength for Dirac, Gaussian and Lorentzian kicks
    and the equivalent strength pi s / 2 for the shear profile.
    """

    params: MathieuParams
    kick: KickSpec
    gap_index: int
    strength: float
    profile: Profile
    measured_decay: float
    delta1: float | None = None
    jump_defect: float = math.nan

    @property
    def delta(self) -> float:
        return self.params.delta

    @property
    def epsilon(self) -> float:
        return self.params.epsilon


@dataclass(frozen=True)
class LambdaForms:
    """Required kick strength from the two-sided and the parity-reduced formulas."""

    general: float | None
    reduced: float

    @property
    def discrepancy(self) -> float | None:
        if self.general is None:
            return None
        return abs(self.general - self.reduced)


@dataclass(frozen=True)
class FlowPoint:
    strength: float
    delta: float
    delta1: float


@dataclass(frozen=True)
class AsymptoticPrediction:
    """First-order multiple-scales description of the first-gap mode.

    The amplitude ratios compare the sin(t/2) and cos(t/2) envelopes on either
    side of the kick.
    """

    strength: float
    epsilon: float
    delta1: float
    decay_rate_per_eps: float
    amp_ratio_plus: float
    amp_ratio_minus: float

    def __post_init__(self) -> None:
        if not -0.5 < self.delta1 < 0.5:
            raise ContractViolationError(f"delta1 must lie in (-1/2, 1/2), got {self.delta1}")
        if not 0.0 < self.decay_rate_per_eps <= 0.5:
            raise ContractViolationError(
                f"decay rate per epsilon must lie in (0, 1/2], got {self.decay_rate_per_eps}"
            )

    @property
    def delta(self) -> float:
        return 0.25 + self.epsilon * self.delta1

    @property
    def decay_rate(self) -> float:
        return self.epsilon * self.decay_rate_per_eps


@dataclass(frozen=True)
class EnvelopeFit:
    """Exponential envelope rates fitted separately on each side of t = 0."""

    rate: float
    rate_positive: float
    rate_negative: float
    asymmetry: float
    extrema_positive: int
    extrema_negative: int


@dataclass(frozen=True)
class ComparisonRow:
    epsilon: float
    strength: float
    delta1_numeric: float
    delta1_formula: float
    delta1_displayed: float
    error: float

    @property
    def error_displayed(self) -> float:
        return abs(self.delta1_numeric - self.delta1_displayed)


@dataclass(frozen=True)
class ShootingProblem:
    """Finite-width kick with a whole number of periods to the match radius."""

    params: MathieuParams
    kick: KickSpec
    match_time: float
    tol: float = 1e-10

    def __post_init__(self) -> None:
        if self.kick.is_dirac or not self.kick.is_localized:
            raise ContractViolationError(
                f"shooting needs a finite-width kick, got {self.kick.describe()}"
            )
        periods = self.match_time / PERIOD
        if round(periods) < 1 or abs(periods - round(periods)) > PERIOD_MATCH_TOL * periods:
            raise ContractViolationError(
                f"match_time must be a positive multiple of 2 pi, got {self.match_time}"
            )
        if not self.tol > 0:
            raise ContractViolationError(f"tol must be positive, got {self.tol}")

    @classmethod
    def with_periods(
        cls, params: MathieuParams, kick: KickSpec, periods: int, tol: float = 1e-10
    ) -> Self:
        return cls(params=params, kick=kick, match_time=periods * PERIOD, tol=tol)

    @property
    def periods(self) -> int:
        return round(self.match_time / PERIOD)


@dataclass(frozen=True)
class WidthRow:
    width: float
    delta: float
    delta_dirac: float
    deviation: float = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "deviation", abs(self.delta - self.delta_dirac))
