"""Tests for the data models."""

import math

import numpy as np
import pytest

from arnold_gap_modes.dynamics.models import (
    PERIOD,
    HalfPeriodMap,
    KickKind,
    KickSpec,
    MathieuParams,
    State,
)
from arnold_gap_modes.errors import ContractViolationError
from arnold_gap_modes.floquet.models import (
    EdgeSide,
    FloquetMode,
    GapInterval,
    Direction,
    Monodromy,
    StabilityClass,
    StabilityKind,
)
from arnold_gap_modes.modes.models import (
    AsymptoticPrediction,
    LambdaForms,
    Profile,
    ShootingProblem,
    WidthRow,
)


def _free_half_map(omega: float) -> HalfPeriodMap:
    """Half-period values of x'' + omega^2 x = 0."""
    c, s = math.cos(omega * math.pi), math.sin(omega * math.pi)
    return HalfPeriodMap(u1=c, du1=-omega * s, u2=s / omega, du2=c)


class TestMathieuParams:
    """Test MathieuParams dataclass."""

    def test_with_delta(self) -> None:
        """Test replacing the spectral parameter."""
        params = MathieuParams(delta=0.25, epsilon=0.5)

        shifted = params.with_delta(0.3)

        assert shifted == MathieuParams(delta=0.3, epsilon=0.5)
        assert params.delta == 0.25

    def test_background(self) -> None:
        """Test the periodic potential."""
        params = MathieuParams(delta=1.0, epsilon=0.5)

        assert params.background(0.0) == pytest.approx(1.5)
        assert params.background(math.pi) == pytest.approx(0.5)

    @pytest.mark.parametrize("delta,epsilon", [(math.nan, 0.1), (0.2, math.inf), (0.2, -0.1)])
    def test_invalid(self, delta: float, epsilon: float) -> None:
        """Test rejection of non-finite or negative values."""
        with pytest.raises(ContractViolationError):
            MathieuParams(delta=delta, epsilon=epsilon)


class TestState:
    """Test State dataclass."""

    def test_array_conversion(self) -> None:
        """Test conversion to and from arrays."""
        state = State.from_array(np.array([3.0, 4.0]), 1.5)

        assert state == State(x=3.0, v=4.0, t=1.5)
        assert state.norm == pytest.approx(5.0)
        np.testing.assert_array_equal(state.as_array(), [3.0, 4.0])

    def test_non_finite(self) -> None:
        """Test that NaN states are rejected."""
        with pytest.raises(ContractViolationError):
            State(x=math.nan, v=0.0)


class TestKickSpec:
    """Test KickSpec dataclass."""

    def test_gaussian_is_unit_area(self) -> None:
        """Test that the Gaussian kick integrates to -strength."""
        kick = KickSpec.gaussian(0.8, 0.3)
        t = np.linspace(-5.0, 5.0, 20001)

        area = np.trapezoid(kick.forcing(t), t)

        assert area == pytest.approx(-0.8, rel=1e-8)
        assert kick.forcing(0.0) == pytest.approx(-kick.peak)
        assert kick.scale == 0.3
        assert kick.effective_strength == 0.8

    def test_lorentzian_peak(self) -> None:
        """Test the Lorentzian peak value."""
        kick = KickSpec.lorentzian(1.0, 0.25)

        assert kick.peak == pytest.approx(1.0 / (math.pi * 0.25))
        assert kick.forcing(0.0) == pytest.approx(-kick.peak)

    def test_tae_shear(self) -> None:
        """Test the shear profile's scale and equivalent strength."""
        kick = KickSpec.tae_shear(2.0)

        assert kick.kind is KickKind.TAE_SHEAR
        assert kick.peak == 4.0
        assert kick.scale == 0.5
        assert kick.effective_strength == pytest.approx(math.pi)
        assert kick.describe() == "tae-shear(shear=2)"

    def test_dirac_has_no_pointwise_value(self) -> None:
        """Test that evaluating a Dirac kick is a contract violation."""
        kick = KickSpec.dirac(1.0)

        assert kick.is_dirac
        assert kick.peak == math.inf
        assert kick.scale is None
        with pytest.raises(ContractViolationError):
            kick.forcing(0.0)

    def test_none_kick(self) -> None:
        """Test the absent kick."""
        kick = KickSpec.none()

        assert not kick.is_localized
        assert kick.forcing(1.0) == 0.0
        np.testing.assert_array_equal(kick.forcing(np.array([0.0, 1.0])), [0.0, 0.0])

    @pytest.mark.parametrize("width", [None, 0.0, -1.0])
    def test_width_required(self, width: float | None) -> None:
        """Test that finite kicks need a positive width."""
        with pytest.raises(ContractViolationError):
            KickSpec(kind=KickKind.GAUSSIAN, strength=1.0, width=width)


class TestHalfPeriodMap:
    """Test the half-period factorization of the period map."""

    def test_free_oscillator(self) -> None:
        """Test the factorization against x'' + omega^2 x = 0."""
        omega = 0.7
        half = _free_half_map(omega)

        assert half.wronskian == pytest.approx(1.0)
        assert half.diagonal == pytest.approx(math.cos(PERIOD * omega))
        assert half.excess == pytest.approx(2.0 * abs(math.cos(PERIOD * omega)) - 2.0)
        assert half.product < 0

    def test_period_matrix_has_unit_determinant(self) -> None:
        """Test that the assembled period map is area preserving."""
        matrix = _free_half_map(1.3).period_matrix()

        assert np.linalg.det(matrix) == pytest.approx(1.0)

    def test_edge_values_by_parity(self) -> None:
        """Test the edge functions for odd and even gaps."""
        half = HalfPeriodMap(u1=1.0, du1=2.0, u2=3.0, du2=4.0)

        assert half.edge_values(1) == (1.0, 4.0)
        assert half.edge_values(3) == (1.0, 4.0)
        assert half.edge_values(2) == (2.0, 3.0)


class TestFloquetModels:
    """Test the period-map models."""

    def test_stability_class(self) -> None:
        """Test construction and text form."""
        assert str(StabilityClass.unstable(2)) == "unstable(2)"
        assert str(StabilityClass.stable()) == "stable"
        assert StabilityClass.unstable(0).is_unstable
        assert StabilityClass.edge().kind is StabilityKind.EDGE

    def test_stability_class_requires_index(self) -> None:
        """Test that only unstable points carry a gap index."""
        with pytest.raises(ContractViolationError):
            StabilityClass(StabilityKind.UNSTABLE)
        with pytest.raises(ContractViolationError):
            StabilityClass(StabilityKind.STABLE, 1)

    def test_monodromy(self) -> None:
        """Test multipliers and the default excess."""
        matrix = np.array([[2.0, 0.0], [0.0, 0.5]])
        mono = Monodromy(matrix=matrix, trace=2.5)

        assert mono.excess == pytest.approx(0.5)
        assert mono.det == pytest.approx(1.0)
        assert mono.multipliers == (complex(0.5), complex(2.0))

    def test_floquet_mode_must_decay(self) -> None:
        """Test that a growing multiplier is rejected."""
        with pytest.raises(ContractViolationError):
            FloquetMode(1.2, 0.1, State(1.0, 0.0), Direction.FORWARD)
        with pytest.raises(ContractViolationError):
            FloquetMode(0.5, 0.1, State(-1.0, 0.0), Direction.FORWARD)

    def test_gap_interval(self) -> None:
        """Test gap geometry and the admissible kick sign."""
        gap = GapInterval(epsilon=0.5, n=1, lower=0.0, upper=0.5, even_edge=EdgeSide.LOWER)

        assert gap.width == 0.5
        assert gap.midpoint == 0.25
        assert gap.interior(0.2) == pytest.approx(0.1)
        assert gap.contains(0.25)
        assert not gap.contains(0.5)
        assert gap.admissible_sign == 1
        assert gap.as_tuple() == (0.0, 0.5)

        upper = GapInterval(epsilon=0.5, n=2, lower=1.0, upper=1.1, even_edge=EdgeSide.UPPER)
        assert upper.admissible_sign == -1

    def test_gap_interval_order(self) -> None:
        """Test that inverted edges are rejected."""
        with pytest.raises(ContractViolationError):
            GapInterval(epsilon=0.5, n=1, lower=0.5, upper=0.0, even_edge=EdgeSide.LOWER)


class TestModeModels:
    """Test gap-mode related models."""

    def test_profile_normalization_and_parity(self) -> None:
        """Test normalization and the parity defect of an even profile."""
        t = np.linspace(-10.0, 10.0, 201)
        profile = Profile.normalized(t, 3.0 * np.exp(-np.abs(t)) * np.cos(t))

        assert profile.peak == pytest.approx(1.0)
        assert profile.is_symmetric_grid
        assert profile.parity_defect() == pytest.approx(0.0, abs=1e-12)
        assert profile.value_at(0.0) == pytest.approx(1.0)

    def test_profile_rejects_bad_grids(self) -> None:
        """Test shape and ordering checks."""
        with pytest.raises(ContractViolationError):
            Profile(np.array([0.0, 1.0]), np.array([1.0]))
        with pytest.raises(ContractViolationError):
            Profile(np.array([0.0, 0.0]), np.array([1.0, 1.0]))
        with pytest.raises(ContractViolationError):
            Profile.normalized(np.array([0.0, 1.0]), np.zeros(2))

    def test_parity_needs_symmetric_grid(self) -> None:
        """Test that parity is undefined on a one-sided grid."""
        profile = Profile(np.linspace(0.0, 1.0, 5), np.ones(5))

        with pytest.raises(ContractViolationError):
            profile.parity_defect()

    def test_lambda_forms(self) -> None:
        """Test the discrepancy between the two formulas."""
        assert LambdaForms(general=1.0, reduced=1.25).discrepancy == pytest.approx(0.25)
        assert LambdaForms(general=None, reduced=1.0).discrepancy is None

    def test_asymptotic_prediction_ranges(self) -> None:
        """Test the validated ranges of the first-gap prediction."""
        prediction = AsymptoticPrediction(
            strength=1.0,
            epsilon=0.1,
            delta1=0.0,
            decay_rate_per_eps=0.5,
            amp_ratio_plus=1.0,
            amp_ratio_minus=-1.0,
        )

        assert prediction.delta == pytest.approx(0.25)
        assert prediction.decay_rate == pytest.approx(0.05)
        with pytest.raises(ContractViolationError):
            AsymptoticPrediction(1.0, 0.1, 0.5, 0.1, 1.0, 1.0)

    def test_shooting_problem(self) -> None:
        """Test the whole-period match radius."""
        params = MathieuParams(delta=0.25, epsilon=0.5)
        problem = ShootingProblem.with_periods(params, KickSpec.gaussian(1.0, 0.2), 6)

        assert problem.periods == 6
        assert problem.match_time == pytest.approx(6 * PERIOD)
        with pytest.raises(ContractViolationError):
            ShootingProblem(params, KickSpec.gaussian(1.0, 0.2), match_time=7.0)
        with pytest.raises(ContractViolationError):
            ShootingProblem.with_periods(params, KickSpec.dirac(1.0), 6)

    def test_width_row_deviation(self) -> None:
        """Test that the deviation is derived."""
        assert WidthRow(width=0.1, delta=0.30, delta_dirac=0.32).deviation == pytest.approx(0.02)
