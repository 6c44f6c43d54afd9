"""Tests for the small-epsilon predictions and their numerical check."""

import math

import numpy as np
import pytest

from arnold_gap_modes.errors import ContractViolationError, DomainError
from arnold_gap_modes.floquet.analysis import gap_edges
from arnold_gap_modes.modes.asymptotics import (
    compare_asymptotic,
    decay_rate,
    delta1_of_lambda,
    delta1_of_lambda_displayed,
    first_gap_edges,
    lambda_of_delta1,
    lambda_of_delta1_displayed,
    predict,
)


class TestClosedForms:
    """Test the closed-form delta1(lambda) relations."""

    def test_unit_strength(self) -> None:
        """Test that lambda = 1 sits at the centre of the tongue."""
        assert delta1_of_lambda(1.0) == 0.0
        assert lambda_of_delta1(0.0) == 1.0

    def test_limits(self) -> None:
        """Test the approach to both gap edges."""
        assert delta1_of_lambda(1e-6) == pytest.approx(-0.5, abs=1e-9)
        assert delta1_of_lambda(1e6) == pytest.approx(0.5, abs=1e-9)
        assert lambda_of_delta1(-0.5 + 1e-12) == pytest.approx(0.0, abs=1e-5)

    def test_half_strength(self) -> None:
        """Test (0.25 - 1) / (2 * 1.25) = -0.3."""
        assert delta1_of_lambda(0.5) == pytest.approx(-0.3)

    def test_round_trip(self) -> None:
        """Test that both directions invert each other."""
        for strength in np.geomspace(0.05, 20.0, 40):
            assert lambda_of_delta1(delta1_of_lambda(float(strength))) == pytest.approx(
                strength, rel=1e-12
            )

    def test_displayed_form_round_trip(self) -> None:
        """Test the quoted slow-flow form against its inverse."""
        for strength in (0.5, 1.0, 2.0, 4.0):
            delta1 = delta1_of_lambda_displayed(strength)
            assert lambda_of_delta1_displayed(delta1) == pytest.approx(strength, rel=1e-12)

    def test_displayed_form_differs_by_factor_two(self) -> None:
        """Test that the quoted form is the exact form with lambda halved."""
        for strength in (0.5, 1.0, 2.0, 4.0):
            assert delta1_of_lambda_displayed(strength) == pytest.approx(
                delta1_of_lambda(strength / 2.0)
            )

    def test_domain(self) -> None:
        """Test the domain checks."""
        with pytest.raises(DomainError):
            delta1_of_lambda(0.0)
        with pytest.raises(DomainError):
            lambda_of_delta1(0.5)
        with pytest.raises(DomainError):
            lambda_of_delta1_displayed(-0.5)
        with pytest.raises(ValueError):
            delta1_of_lambda(-1.0)


class TestDecayRate:
    """Test the predicted envelope decay rate."""

    def test_unit_strength(self) -> None:
        """Test the maximal rate epsilon / 2 at lambda = 1."""
        assert decay_rate(1.0, 0.1) == pytest.approx(0.05)

    def test_strength_two(self) -> None:
        """Test 0.05 * sqrt(1/4 - 0.09) = 0.02."""
        assert decay_rate(2.0, 0.05) == pytest.approx(0.02)

    def test_weak_kick(self) -> None:
        """Test that a vanishing kick gives a vanishing rate."""
        assert decay_rate(1e-8, 0.3) == pytest.approx(0.0, abs=1e-6)

    def test_epsilon_must_be_positive(self) -> None:
        """Test the epsilon check."""
        with pytest.raises(DomainError):
            decay_rate(1.0, 0.0)


class TestPrediction:
    """Test the assembled first-gap prediction."""

    @pytest.mark.parametrize("strength", [0.3, 1.0, 2.5])
    def test_amplitude_ratio_identity(self, strength: float) -> None:
        """Test that the sine/cosine amplitude ratio equals the kick strength."""
        prediction = predict(strength, 0.05)

        assert prediction.amp_ratio_plus == pytest.approx(strength)
        assert prediction.amp_ratio_minus == pytest.approx(-strength)
        expected = math.sqrt((1 + 2 * prediction.delta1) / (1 - 2 * prediction.delta1))
        assert prediction.amp_ratio_plus == pytest.approx(expected)

    def test_delta_and_rate(self) -> None:
        """Test the derived delta and decay rate."""
        prediction = predict(2.0, 0.05)

        assert prediction.delta == pytest.approx(0.25 + 0.05 * 0.3)
        assert prediction.decay_rate == pytest.approx(0.02)

    def test_first_gap_edges(self) -> None:
        """Test the leading-order edges against the computed tongue."""
        lower, upper = first_gap_edges(0.05)
        numeric = gap_edges(0.05, 1)

        assert lower == pytest.approx(numeric[0], abs=2 * 0.05**2)
        assert upper == pytest.approx(numeric[1], abs=2 * 0.05**2)


class TestCompareAsymptotic:
    """Test the numerical delta1 against both closed forms."""

    def test_small_epsilon_rows(self) -> None:
        """Test lambda in {0.5, 1} at epsilon = 0.01."""
        rows = compare_asymptotic([0.01], [0.5, 1.0])

        assert [(row.epsilon, row.strength) for row in rows] == [(0.01, 0.5), (0.01, 1.0)]
        assert rows[0].delta1_numeric == pytest.approx(-0.3, abs=0.03)
        assert rows[1].delta1_numeric == pytest.approx(0.0, abs=0.03)

    @pytest.mark.slow
    def test_first_order_law(self) -> None:
        """Test |delta1_numeric - formula| <= 3 epsilon over a strength grid."""
        epsilons = [0.01, 0.02, 0.05]
        strengths = [0.5, 1.0, 2.0, 4.0]

        rows = compare_asymptotic(epsilons, strengths)

        assert len(rows) == 12
        for row in rows:
            assert row.error <= 3 * row.epsilon
            assert row.delta1_formula == pytest.approx(delta1_of_lambda(row.strength))

    def test_error_shrinks_linearly(self) -> None:
        """Test that halving epsilon halves the first-order error at lambda = 1."""
        coarse, fine = compare_asymptotic([0.02, 0.01], [1.0])

        assert fine.error > 0
        assert coarse.error / fine.error == pytest.approx(2.0, rel=0.3)
        for row in (coarse, fine):
            assert row.error / row.epsilon < 0.5

    def test_exact_form_beats_displayed_form(self) -> None:
        """Test that the numbers side with the exact relation away from lambda = 2."""
        rows = compare_asymptotic([0.01], [0.5, 1.0, 4.0])

        for row in rows:
            assert row.error < row.error_displayed

    def test_rejects_large_epsilon(self) -> None:
        """Test the comparison range."""
        with pytest.raises(ContractViolationError):
            compare_asymptotic([0.2], [1.0])

    def test_rejects_non_positive_strength(self) -> None:
        """Test that the first gap needs positive strengths."""
        with pytest.raises(DomainError):
            compare_asymptotic([0.01], [-1.0])
