"""Data models for period-map (Floquet) analysis."""

import math
from dataclasses import dataclass, field
from enum import StrEnum
from typing import Self

import numpy as np

from arnold_gap_modes.dynamics.models import FloatArray, State
from arnold_gap_modes.errors import ContractViolationError


class Direction(StrEnum):
    """Half-line on which a Floquet solution decays."""

    FORWARD = "+"
    BACKWARD = "-"


class StabilityKind(StrEnum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    EDGE = "edge"


class EdgeSide(StrEnum):
    LOWER = "lower"
    UPPER = "upper"


@dataclass(frozen=True)
class StabilityClass:
    """Stable band, unstable gap (with its index), or gap edge."""

    kind: StabilityKind
    gap_index: int | None = None

    def __post_init__(self) -> None:
        if (self.kind is StabilityKind.UNSTABLE) != (self.gap_index is not None):
            raise ContractViolationError("gap_index is required exactly for unstable points")

    @classmethod
    def stable(cls) -> Self:
        return cls(StabilityKind.STABLE)

    @classmethod
    def edge(cls) -> Self:
        return cls(StabilityKind.EDGE)

    @classmethod
    def unstable(cls, gap_index: int) -> Self:
        return cls(StabilityKind.UNSTABLE, gap_index)

    @property
    def is_unstable(self) -> bool:
        return self.kind is StabilityKind.UNSTABLE

    def __str__(self) -> str:
        if self.gap_index is None:
            return str(self.kind)
        return f"{self.kind}({self.gap_index})"


@dataclass(frozen=True, eq=False)
class Monodromy:
    """Period map over [0, 2 pi] of the bare Mathieu equation."""

    matrix: FloatArray
    trace: float
    excess: float = field(default=math.nan)

    def __post_init__(self) -> None:
        if math.isnan(self.excess):
            object.__setattr__(self, "excess", abs(self.trace) - 2.0)

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.matrix))

    @property
    def multipliers(self) -> tuple[complex, complex]:
        """Both Floquet multipliers, smallest modulus first."""
        mu = sorted(np.linalg.eigvals(self.matrix), key=abs)
        return complex(mu[0]), complex(mu[1])


@dataclass(frozen=True)
class FloquetMode:
    """A solution decaying on one half-line, x(t + 2 pi) = multiplier * x(t)."""

    multiplier: float
    exponent: float
    init_state: State
    direction: Direction

    def __post_init__(self) -> None:
        if not abs(self.multiplier) < 1.0:
            raise ContractViolationError(f"decaying multiplier must be < 1, got {self.multiplier}")
        if self.init_state.x < 0:
            raise ContractViolationError("Floquet states are normalized with x0 >= 0")


@dataclass(frozen=True)
class GapInterval:
    """Edges of the n-th instability gap at fixed epsilon."""

    epsilon: float
    n: int
    lower: float
    upper: float
    even_edge: EdgeSide

    def __post_init__(self) -> None:
        if not self.lower <= self.upper:
            raise ContractViolationError(f"gap edges out of order: {self.lower} > {self.upper}")

    @property
    def width(self) -> float:
        return self.upper - self.lower

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lower + self.upper)

    @property
    def admissible_sign(self) -> int:
        """Sign of the kick strength that binds a gap mode in this gap.

        The required strength vanishes at the even edge and diverges at the
        odd one, and the gap-mode delta rises with the strength.
        """
        return 1 if self.even_edge is EdgeSide.LOWER else -1

    def contains(self, delta: float) -> bool:
        return self.lower < delta < self.upper

    def interior(self, fraction: float) -> float:
        """Point at the given fraction of the way from lower to upper."""
        return self.lower + fraction * self.width

    def as_tuple(self) -> tuple[float, float]:
        return self.lower, self.upper


@dataclass(frozen=True)
class ChartPoint:
    delta: float
    epsilon: float
    stability: StabilityClass
