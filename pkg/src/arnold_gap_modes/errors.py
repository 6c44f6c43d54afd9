"""Exception hierarchy for the gap-mode toolkit."""

from __future__ import annotations

from collections.abc import Sequence
from typing import TYPE_CHECKING, Any

if TYPE_CHECKING:
    from arnold_gap_modes.dynamics.models import State


class GapModeError(Exception):
    """Base class for every error raised by the toolkit."""

    def details(self) -> dict[str, Any]:
        """Structured context attached to the error."""
        return {}

    def to_record(self) -> dict[str, Any]:
        """Machine-readable error record for the command-line front end."""
        return {
            "error": type(self).__name__,
            "message": str(self),
            "details": self.details(),
        }


class ContractViolationError(GapModeError, ValueError):
    """An operation was called outside its precondition."""


class DomainError(GapModeError, ValueError):
    """A closed-form expression was evaluated outside its domain."""


class IntegrationError(GapModeError, RuntimeError):
    """The adaptive integrator gave up before reaching the end time."""

    def __init__(self, message: str, last_state: State) -> None:
        super().__init__(message)
        self.last_state = last_state

    def details(self) -> dict[str, Any]:
        return {
            "last_t": self.last_state.t,
            "last_x": self.last_state.x,
            "last_v": self.last_state.v,
        }


class NotInGapError(GapModeError, ValueError):
    """The parameters are not strictly inside an instability gap."""


class NearDegenerateError(GapModeError, ValueError):
    """Floquet multipliers are too close for a reliable eigenvector."""


class EdgeNotFoundError(GapModeError, RuntimeError):
    """The coarse scan found no sign change for a gap edge."""

    def __init__(self, message: str, scan_bounds: tuple[float, float]) -> None:
        super().__init__(message)
        self.scan_bounds = scan_bounds

    def details(self) -> dict[str, Any]:
        return {"scan_lower": self.scan_bounds[0], "scan_upper": self.scan_bounds[1]}


class PoleError(GapModeError, ArithmeticError):
    """The required kick strength diverges (odd-parity limit)."""


class NoGapModeError(GapModeError, ValueError):
    """No gap mode exists for a kick of this strength or sign."""


class RootNotFoundError(GapModeError, RuntimeError):
    """A bracketed root search failed; carries the diagnostic scan."""

    def __init__(
        self, message: str, scan: Sequence[tuple[float, float]] = ()
    ) -> None:
        super().__init__(message)
        self.scan = list(scan)

    def details(self) -> dict[str, Any]:
        return {"scan": [list(row) for row in self.scan]}


class InconsistentModeError(GapModeError, ValueError):
    """Kick strength and spectral parameter do not form a gap mode."""


class FitError(GapModeError, ValueError):
    """Envelope fit impossible (too few extrema)."""


class NoModeFoundError(RootNotFoundError):
    """Shooting found no bracketed eigenvalue in the gap."""
