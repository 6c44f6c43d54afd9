"""Core data models for the kicked Mathieu equation."""

import math
from dataclasses import dataclass, replace
from enum import StrEnum
from typing import Final, Self, overload

import numpy as np
from numpy.typing import NDArray

from arnold_gap_modes.errors import ContractViolationError

FloatArray = NDArray[np.float64]

PERIOD: Final = 2.0 * math.pi
HALF_PERIOD: Final = math.pi


@dataclass(frozen=True)
class MathieuParams:
    """Spectral parameter delta and modulation strength epsilon."""

    delta: float
    epsilon: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.delta) or not math.isfinite(self.epsilon):
            raise ContractViolationError(
                f"delta and epsilon must be finite, got ({self.delta}, {self.epsilon})"
            )
        if self.epsilon < 0:
            raise ContractViolationError(
                f"epsilon must be non-negative (shift time by pi instead), got {self.epsilon}"
            )

    def with_delta(self, delta: float) -> Self:
        """Same modulation, different spectral parameter."""
        return replace(self, delta=delta)

    def background(self, t: float) -> float:
        """Periodic part delta + epsilon cos t of the potential."""
        return self.delta + self.epsilon * math.cos(t)


@dataclass(frozen=True)
class State:
    """Phase-space point (x, dx/dt) at time t."""

    x: float
    v: float
    t: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.v) and math.isfinite(self.t)):
            raise ContractViolationError(f"non-finite state {self}")

    @classmethod
    def from_array(cls, y: FloatArray, t: float) -> Self:
        return cls(x=float(y[0]), v=float(y[1]), t=float(t))

    def as_array(self) -> FloatArray:
        return np.array([self.x, self.v], dtype=np.float64)

    @property
    def norm(self) -> float:
        return math.hypot(self.x, self.v)


class KickKind(StrEnum):
    """Shape of the localized perturbation F(t)."""

    NONE = "none"
    DIRAC = "dirac"
    GAUSSIAN = "gaussian"
    LORENTZIAN = "lorentzian"
    TAE_SHEAR = "tae-shear"


@dataclass(frozen=True)
class KickSpec:
    """Localized, non-periodic addition F(t) to the Mathieu potential.

    Gaussian and Lorentzian profiles are unit-area, so F = -strength * g_w
    tends to -strength * delta(t) as the width shrinks. The shear profile is
    F = -s^2 / (1 + s^2 t^2)^2 with no separate strength.
    """

    kind: KickKind = KickKind.NONE
    strength: float = 0.0
    width: float | None = None
    shear: float | None = None

    def __post_init__(self) -> None:
        if not math.isfinite(self.strength):
            raise ContractViolationError(f"kick strength must be finite, got {self.strength}")
        if self.kind in (KickKind.GAUSSIAN, KickKind.LORENTZIAN):
            if self.width is None or not self.width > 0:
                raise ContractViolationError(
                    f"{self.kind} kick needs a positive width, got {self.width}"
                )
        if self.kind is KickKind.TAE_SHEAR and (self.shear is None or not self.shear > 0):
            raise ContractViolationError(f"shear must be positive, got {self.shear}")

    @classmethod
    def none(cls) -> Self:
        return cls()

    @classmethod
    def dirac(cls, strength: float) -> Self:
        return cls(kind=KickKind.DIRAC, strength=strength)

    @classmethod
    def gaussian(cls, strength: float, width: float) -> Self:
        return cls(kind=KickKind.GAUSSIAN, strength=strength, width=width)

    @classmethod
    def lorentzian(cls, strength: float, width: float) -> Self:
        return cls(kind=KickKind.LORENTZIAN, strength=strength, width=width)

    @classmethod
    def tae_shear(cls, shear: float) -> Self:
        return cls(kind=KickKind.TAE_SHEAR, shear=shear)

    @property
    def is_dirac(self) -> bool:
        return self.kind is KickKind.DIRAC

    @property
    def is_localized(self) -> bool:
        """True for every kick that actually perturbs the equation."""
        return self.kind is not KickKind.NONE

    @property
    def scale(self) -> float | None:
        """Time scale over which the kick acts (width, or 1/s)."""
        match self.kind:
            case KickKind.GAUSSIAN | KickKind.LORENTZIAN:
                return self.width
            case KickKind.TAE_SHEAR:
                assert self.shear is not None
                return 1.0 / self.shear
            case _:
                return None

    @property
    def peak(self) -> float:
        """Magnitude |F(0)|, which is also the maximum of |F|."""
        match self.kind:
            case KickKind.NONE:
                return 0.0
            case KickKind.DIRAC:
                return math.inf
            case KickKind.GAUSSIAN:
                assert self.width is not None
                return abs(self.strength) / (self.width * math.sqrt(2.0 * math.pi))
            case KickKind.LORENTZIAN:
                assert self.width is not None
                return abs(self.strength) / (math.pi * self.width)
            case KickKind.TAE_SHEAR:
                assert self.shear is not None
                return self.shear**2

    @property
    def effective_strength(self) -> float:
        """Integral of -F over the real line, the equivalent Dirac strength."""
        match self.kind:
            case KickKind.NONE:
                return 0.0
            case KickKind.TAE_SHEAR:
                assert self.shear is not None
                return math.pi * self.shear / 2.0
            case _:
                return self.strength

    @overload
    def forcing(self, t: float) -> float: ...

    @overload
    def forcing(self, t: FloatArray) -> FloatArray: ...

    def forcing(self, t: float | FloatArray) -> float | FloatArray:
        """Evaluate F(t); the Dirac kick has no pointwise value."""
        match self.kind:
            case KickKind.NONE:
                value = np.zeros_like(t, dtype=np.float64)
            case KickKind.DIRAC:
                raise ContractViolationError(
                    "a Dirac kick has no pointwise value; use jump matching"
                )
            case KickKind.GAUSSIAN:
                assert self.width is not None
                w = self.width
                value = -self.strength * np.exp(-np.square(t) / (2.0 * w * w)) / (
                    w * math.sqrt(2.0 * math.pi)
                )
            case KickKind.LORENTZIAN:
                assert self.width is not None
                w = self.width
                value = -self.strength * w / (math.pi * (w * w + np.square(t)))
            case KickKind.TAE_SHEAR:
                assert self.shear is not None
                s2 = self.shear**2
                value = -s2 / np.square(1.0 + s2 * np.square(t))
        if isinstance(t, np.ndarray):
            return np.asarray(value, dtype=np.float64)
        return float(value)

    def describe(self) -> str:
        """Short label used in output metadata."""
        match self.kind:
            case KickKind.NONE:
                return "none"
            case KickKind.DIRAC:
                return f"dirac(strength={self.strength:g})"
            case KickKind.GAUSSIAN | KickKind.LORENTZIAN:
                return f"{self.kind}(strength={self.strength:g}, width={self.width:g})"
            case KickKind.TAE_SHEAR:
                return f"tae-shear(shear={self.shear:g})"


@dataclass(frozen=True)
class HalfPeriodMap:
    """Even (u1) and odd (u2) fundamental solutions of the bare equation at t = pi.

    For the even potential delta + epsilon cos t the period map factors
    through these four numbers: both diagonal entries equal u1 u2' + u1' u2,
    the off-diagonal entries are 2 u2 u2' and 2 u1 u1'.
    """

    u1: float
    du1: float
    u2: float
    du2: float

    @property
    def wronskian(self) -> float:
        return self.u1 * self.du2 - self.du1 * self.u2

    @property
    def diagonal(self) -> float:
        return self.u1 * self.du2 + self.du1 * self.u2

    @property
    def upper(self) -> float:
        return 2.0 * self.u2 * self.du2

    @property
    def lower(self) -> float:
        return 2.0 * self.u1 * self.du1

    @property
    def product(self) -> float:
        """u1 u1' u2 u2'; positive exactly inside an instability gap."""
        return self.u1 * self.du1 * self.u2 * self.du2

    @property
    def excess(self) -> float:
        """|trace| - 2 of the period map, free of cancellation.

        Uses a^2 - 1 = 4P (unit Wronskian) so narrow tongues keep their sign.
        """
        return 8.0 * self.product / (abs(self.diagonal) + 1.0)

    def period_matrix(self) -> FloatArray:
        a = self.diagonal
        return np.array([[a, self.upper], [self.lower, a]], dtype=np.float64)

    def edge_values(self, n: int) -> tuple[float, float]:
        """(even-solution, odd-solution) edge functions of gap n.

        Odd n: antiperiodic edges, u1(pi) = 0 or u2'(pi) = 0.
        Even n: periodic edges, u1'(pi) = 0 or u2(pi) = 0.
        """
        if n % 2:
            return self.u1, self.du2
        return self.du1, self.u2
