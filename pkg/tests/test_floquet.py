"""Tests for stability classification, gap edges and Floquet modes."""

import math

import numpy as np
import pytest

from arnold_gap_modes.dynamics.engine import propagate
from arnold_gap_modes.dynamics.models import PERIOD, KickSpec, MathieuParams, State
from arnold_gap_modes.errors import ContractViolationError, NearDegenerateError, NotInGapError
from arnold_gap_modes.floquet.analysis import (
    EIGEN_MIN_EXCESS,
    classify,
    decaying_mode,
    gap_edges,
    gap_interval,
    monodromy,
    rotation_index,
    stability_chart,
)
from arnold_gap_modes.floquet.models import Direction, EdgeSide, StabilityClass, StabilityKind


class TestMonodromy:
    """Test the period map."""

    def test_closed_forms(self) -> None:
        """Test the unmodulated cases delta = 1/4 and delta = 1."""
        half = monodromy(MathieuParams(0.25, 0.0))
        full = monodromy(MathieuParams(1.0, 0.0))

        np.testing.assert_allclose(half.matrix, -np.eye(2), atol=1e-8)
        assert half.trace == pytest.approx(-2.0)
        np.testing.assert_allclose(full.matrix, np.eye(2), atol=1e-8)
        assert full.trace == pytest.approx(2.0)

    def test_inside_first_tongue(self) -> None:
        """Test that delta = 1/4 is unstable for epsilon > 0."""
        mono = monodromy(MathieuParams(0.25, 0.5))

        assert abs(mono.trace) > 2.0
        assert mono.excess > 0

    @pytest.mark.parametrize("delta,epsilon", [(0.25, 0.3), (1.3, 0.4), (2.0, 0.05)])
    def test_assembled_matches_direct(self, delta: float, epsilon: float) -> None:
        """Test the half-period assembly against full-period integration."""
        params = MathieuParams(delta, epsilon)

        assembled = monodromy(params)
        direct = monodromy(params, direct=True)

        np.testing.assert_allclose(assembled.matrix, direct.matrix, atol=1e-8)
        assert assembled.excess == pytest.approx(direct.excess, abs=1e-8)
        assert direct.det == pytest.approx(1.0, abs=1e-8)

    @pytest.mark.slow
    def test_unit_determinant_over_chart_grid(self) -> None:
        """Test area preservation over a 50 x 20 grid."""
        for epsilon in np.linspace(0.0, 0.5, 20):
            for delta in np.linspace(0.0, 2.5, 50):
                mono = monodromy(MathieuParams(float(delta), float(epsilon)), direct=True)
                assert mono.det == pytest.approx(1.0, abs=1e-8)


class TestClassify:
    """Test stability classification."""

    def test_stable_below_first_tongue(self) -> None:
        """Test a point in the first band."""
        assert classify(MathieuParams(0.1, 0.1)) == StabilityClass.stable()

    def test_first_tongue(self) -> None:
        """Test a point inside the first tongue."""
        assert classify(MathieuParams(0.25, 0.3)) == StabilityClass.unstable(1)

    def test_edge_without_modulation(self) -> None:
        """Test that delta = 1/4 is an edge when epsilon = 0."""
        assert classify(MathieuParams(0.25, 0.0)) == StabilityClass.edge()

    def test_below_first_band(self) -> None:
        """Test the semi-infinite region below the first band."""
        assert classify(MathieuParams(-0.2, 0.1)) == StabilityClass.unstable(0)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_gap_index_matches_tongue(self, n: int) -> None:
        """Test that each tongue midpoint is labelled with its own index."""
        midpoint = gap_interval(0.5, n).midpoint

        assert classify(MathieuParams(midpoint, 0.5)) == StabilityClass.unstable(n)

    def test_edge_tol_validated(self) -> None:
        """Test that edge_tol must be positive."""
        with pytest.raises(ContractViolationError):
            classify(MathieuParams(0.25, 0.3), edge_tol=0.0)


class TestGapEdges:
    """Test the location of the tongues."""

    def test_first_gap_first_order(self) -> None:
        """Test edges 1/4 -+ epsilon/2 for small epsilon."""
        epsilon = 0.1
        lower, upper = gap_edges(epsilon, 1)

        assert lower == pytest.approx(0.25 - epsilon / 2, abs=2 * epsilon**2)
        assert upper == pytest.approx(0.25 + epsilon / 2, abs=2 * epsilon**2)

    def test_first_gap_reference_values(self) -> None:
        """Test the first tongue at epsilon = 0.5 against Mathieu characteristic values."""
        lower, upper = gap_edges(0.5, 1)

        assert lower == pytest.approx(-0.0276, abs=1e-3)
        assert upper == pytest.approx(0.4648, abs=1e-3)

    def test_second_gap_contains_one(self) -> None:
        """Test that the second tongue at epsilon = 0.1 straddles delta = 1."""
        lower, upper = gap_edges(0.1, 2)

        assert lower < 1.0 < upper
        assert upper - lower < 0.01

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_gaps_close_as_epsilon_vanishes(self, n: int) -> None:
        """Test that every tongue opens from n^2/4."""
        widths = []
        for epsilon in (0.1, 0.05, 0.01):
            gap = gap_interval(epsilon, n)
            assert gap.midpoint == pytest.approx(n * n / 4, abs=epsilon)
            widths.append(gap.width)

        assert widths[0] > widths[1] > widths[2] > 0

    def test_parity_of_edges(self) -> None:
        """Test which edge carries the even solution."""
        assert gap_interval(0.3, 1).even_edge is EdgeSide.LOWER
        assert gap_interval(0.3, 2).even_edge is EdgeSide.UPPER
        assert gap_interval(0.3, 3).even_edge is EdgeSide.LOWER

    def test_edges_are_marginal(self) -> None:
        """Test that both edges classify as edges or sit right at the boundary."""
        gap = gap_interval(0.3, 1)
        inside = gap.interior(0.5)

        assert classify(MathieuParams(gap.lower - 1e-3, 0.3)).kind is StabilityKind.STABLE
        assert classify(MathieuParams(inside, 0.3)).is_unstable
        assert classify(MathieuParams(gap.upper + 1e-3, 0.3)).kind is StabilityKind.STABLE

    def test_invalid_arguments(self) -> None:
        """Test argument validation."""
        with pytest.raises(ContractViolationError):
            gap_interval(0.0, 1)
        with pytest.raises(ContractViolationError):
            gap_interval(0.1, 0)


class TestDecayingMode:
    """Test the Floquet solutions decaying on either half-line."""

    def test_forward_mode_scales_by_multiplier(self) -> None:
        """Test that one period scales the state by the multiplier."""
        params = MathieuParams(0.25, 0.3)
        mode = decaying_mode(params, Direction.FORWARD)

        end = propagate(params, KickSpec.none(), mode.init_state, PERIOD)

        assert abs(mode.multiplier) < 1
        assert end.x == pytest.approx(mode.multiplier * mode.init_state.x, abs=1e-7)
        assert end.v == pytest.approx(mode.multiplier * mode.init_state.v, abs=1e-7)

    def test_eigenvector_residual(self) -> None:
        """Test against an independently integrated period map."""
        params = MathieuParams(0.3, 0.3)
        mode = decaying_mode(params)
        matrix = monodromy(params, direct=True).matrix
        vector = mode.init_state.as_array()

        np.testing.assert_allclose(matrix @ vector, mode.multiplier * vector, atol=1e-7)

    def test_closed_form_below_eigen_threshold(self) -> None:
        """Test the eigenvector inside a tongue too narrow for numerical eigen-decomposition."""
        epsilon = 0.05
        params = MathieuParams(gap_interval(epsilon, 3).midpoint, epsilon)
        period_map = monodromy(params)

        assert 0 < period_map.excess < EIGEN_MIN_EXCESS

        mode = decaying_mode(params, edge_tol=1e-14)
        vector = mode.init_state.as_array()

        np.testing.assert_allclose(
            period_map.matrix @ vector, mode.multiplier * vector, atol=1e-10
        )

        with pytest.raises(NotInGapError):
            decaying_mode(params, edge_tol=EIGEN_MIN_EXCESS)

    def test_near_degenerate_multipliers(self) -> None:
        """Test the splitting guard next to the edge of a very narrow tongue."""
        epsilon = 0.05
        params = MathieuParams(gap_interval(epsilon, 3).interior(1e-3), epsilon)

        with pytest.raises(NearDegenerateError):
            decaying_mode(params, edge_tol=1e-16)

    def test_backward_mode_is_parity_image(self) -> None:
        """Test the backward solution and its decay in negative time."""
        params = MathieuParams(0.25, 0.3)
        forward = decaying_mode(params, Direction.FORWARD)
        backward = decaying_mode(params, Direction.BACKWARD)

        assert backward.init_state.x == pytest.approx(forward.init_state.x)
        assert backward.init_state.v == pytest.approx(-forward.init_state.v)
        assert backward.multiplier == forward.multiplier

        end = propagate(params, KickSpec.none(), backward.init_state, -PERIOD)
        assert end.x == pytest.approx(backward.multiplier * backward.init_state.x, abs=1e-7)

    def test_exponent(self) -> None:
        """Test the Floquet exponent."""
        mode = decaying_mode(MathieuParams(1.0, 0.5))

        assert mode.exponent == pytest.approx(math.log(abs(mode.multiplier)) / PERIOD)
        assert mode.exponent < 0

    def test_edge_rejected(self) -> None:
        """Test that an edge has no decaying mode."""
        with pytest.raises(NotInGapError):
            decaying_mode(MathieuParams(0.25, 0.0))

    def test_band_rejected(self) -> None:
        """Test that a stable point has no decaying mode."""
        with pytest.raises(NotInGapError):
            decaying_mode(MathieuParams(0.6, 0.1))

    def test_rotation_index_of_modes(self) -> None:
        """Test the rotation count of Floquet solutions in the first two tongues."""
        for n in (1, 2):
            params = MathieuParams(gap_interval(0.4, n).midpoint, 0.4)
            state = decaying_mode(params).init_state
            assert rotation_index(params, State(state.x, state.v)) == n


class TestStabilityChart:
    """Test the stability chart."""

    def test_unmodulated_row(self) -> None:
        """Test the epsilon = 0 row on [0, 1]."""
        chart = stability_chart((0.0, 1.0), (0.0, 0.0), (5, 1))
        kinds = {point.delta: point.stability.kind for point in chart}

        assert kinds == {
            0.0: StabilityKind.EDGE,
            0.25: StabilityKind.EDGE,
            0.5: StabilityKind.STABLE,
            0.75: StabilityKind.STABLE,
            1.0: StabilityKind.EDGE,
        }

    def test_first_tongue_wedge(self) -> None:
        """Test that the first tongue covers a wedge around 1/4."""
        chart = stability_chart((0.22, 0.28), (0.1, 0.5), (4, 3))

        assert len(chart) == 12
        assert all(point.stability == StabilityClass.unstable(1) for point in chart)

    def test_rows_ordered_by_epsilon(self) -> None:
        """Test the row-major layout."""
        chart = stability_chart((0.0, 1.0), (0.0, 0.2), (3, 2))

        assert [point.epsilon for point in chart] == [0.0, 0.0, 0.0, 0.2, 0.2, 0.2]

    def test_single_point_third_tongue(self) -> None:
        """Test a chart of one point inside the third tongue."""
        midpoint = gap_interval(0.5, 3).midpoint

        chart = stability_chart((midpoint, midpoint), (0.5, 0.5), (1, 1))

        assert chart[0].stability == StabilityClass.unstable(3)

    def test_invalid_grid(self) -> None:
        """Test grid validation."""
        with pytest.raises(ContractViolationError):
            stability_chart((0.0, 1.0), (0.0, 0.5), (0, 3))
