"""Small-epsilon predictions for the first-gap mode and their numerical check.

Near delta = 1/4 the solution is A(eta) cos(t/2) + B(eta) sin(t/2) with slow
time eta = epsilon t. With delta = 1/4 + epsilon delta1 the slow flow gives
envelopes decaying like exp(-sqrt(1/4 - delta1^2) epsilon |t|) and, on the
decaying branch, B/A = +-sqrt((1 + 2 delta1) / (1 - 2 delta1)) for t >< 0.
The kick enters through x'(0+) - x'(0-) = (B+ - B-)/2 = lambda A, which gives

    delta1 = (lambda^2 - 1) / (2 (1 + lambda^2)).

The slow-flow result is sometimes quoted as 2 sqrt(1 - 4 delta1^2) / (1 - 2 delta1);
that form drops the 1/2 carried by the derivative of sin(t/2) and is kept here
only for comparison.
"""

import logging
import math
from collections.abc import Sequence
from typing import Final

from arnold_gap_modes.errors import ContractViolationError, DomainError
from arnold_gap_modes.floquet.analysis import DEFAULT_ROOT_TOL
from arnold_gap_modes.modes.delta_kick import solve_delta
from arnold_gap_modes.modes.models import AsymptoticPrediction, ComparisonRow

MAX_COMPARISON_EPSILON: Final = 0.1

logger = logging.getLogger(__name__)


def _require_positive(strength: float) -> None:
    if not strength > 0:
        raise DomainError(f"the first gap binds modes only for strength > 0, got {strength}")


def delta1_of_lambda(strength: float) -> float:
    """First-order offset (delta - 1/4) / epsilon of the gap mode."""
    _require_positive(strength)
    square = strength * strength
    return (square - 1.0) / (2.0 * (1.0 + square))


def lambda_of_delta1(delta1: float) -> float:
    """Exact inverse of :func:`delta1_of_lambda`."""
    if not -0.5 < delta1 < 0.5:
        raise DomainError(f"delta1 must lie in (-1/2, 1/2), got {delta1}")
    return math.sqrt((1.0 + 2.0 * delta1) / (1.0 - 2.0 * delta1))


def lambda_of_delta1_displayed(delta1: float) -> float:
    """The quoted slow-flow form 2 sqrt(1 - 4 delta1^2) / (1 - 2 delta1)."""
    if not -0.5 < delta1 < 0.5:
        raise DomainError(f"delta1 must lie in (-1/2, 1/2), got {delta1}")
    return 2.0 * math.sqrt(1.0 - 4.0 * delta1 * delta1) / (1.0 - 2.0 * delta1)


def delta1_of_lambda_displayed(strength: float) -> float:
    """Inverse of the quoted form: (lambda^2 - 4) / (2 (lambda^2 + 4))."""
    _require_positive(strength)
    square = strength * strength
    return (square - 4.0) / (2.0 * (square + 4.0))


def decay_rate(strength: float, epsilon: float) -> float:
    """Envelope decay rate epsilon sqrt(1/4 - delta1^2)."""
    if not epsilon > 0:
        raise DomainError(f"epsilon must be positive, got {epsilon}")
    delta1 = delta1_of_lambda(strength)
    return epsilon * math.sqrt(0.25 - delta1 * delta1)


def first_gap_edges(epsilon: float) -> tuple[float, float]:
    """Leading-order edges 1/4 -+ epsilon/2 of the first tongue."""
    return 0.25 - 0.5 * epsilon, 0.25 + 0.5 * epsilon


def predict(strength: float, epsilon: float) -> AsymptoticPrediction:
    """Leading-order first-gap mode for this strength and modulation."""
    if not epsilon > 0:
        raise DomainError(f"epsilon must be positive, got {epsilon}")
    delta1 = delta1_of_lambda(strength)
    ratio = lambda_of_delta1(delta1)
    return AsymptoticPrediction(
        strength=strength,
        epsilon=epsilon,
        delta1=delta1,
        decay_rate_per_eps=math.sqrt(0.25 - delta1 * delta1),
        amp_ratio_plus=ratio,
        amp_ratio_minus=-ratio,
    )


def compare_asymptotic(
    epsilons: Sequence[float],
    strengths: Sequence[float],
    tol: float = DEFAULT_ROOT_TOL,
) -> list[ComparisonRow]:
    """Numerical delta1 in the first gap against both closed forms.

    Rows are ordered by epsilon, then by strength.
    """
    for epsilon in epsilons:
        if not 0.0 < epsilon <= MAX_COMPARISON_EPSILON:
            raise ContractViolationError(
                f"comparison epsilon must lie in (0, {MAX_COMPARISON_EPSILON}], got {epsilon}"
            )
    for strength in strengths:
        _require_positive(strength)

    rows: list[ComparisonRow] = []
    for epsilon in epsilons:
        for strength in strengths:
            numeric = (solve_delta(strength, epsilon, 1, tol) - 0.25) / epsilon
            formula = delta1_of_lambda(strength)
            rows.append(
                ComparisonRow(
                    epsilon=epsilon,
                    strength=strength,
                    delta1_numeric=numeric,
                    delta1_formula=formula,
                    delta1_displayed=delta1_of_lambda_displayed(strength),
                    error=abs(numeric - formula),
                )
            )
        logger.debug(f"Compared {len(strengths)} strengths at epsilon={epsilon:g}")
    return rows
