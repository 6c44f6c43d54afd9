"""Exponential envelope fits over the extrema of a sampled profile."""

import logging
from typing import Final

import numpy as np
from scipy.signal import find_peaks

from arnold_gap_modes.dynamics.models import FloatArray
from arnold_gap_modes.errors import ContractViolationError, FitError
from arnold_gap_modes.modes.models import EnvelopeFit, Profile

MIN_EXTREMA: Final = 10

logger = logging.getLogger(__name__)


def _side_rate(distance: FloatArray, x: FloatArray, min_extrema: int, label: str) -> tuple[float, int]:
    """Least-squares decay rate of ln|extremum| against distance from the origin."""
    maxima, _ = find_peaks(x)
    minima, _ = find_peaks(-x)
    idx = np.sort(np.concatenate([maxima, minima]))
    idx = idx[np.abs(x[idx]) > 0]
    if idx.size < min_extrema:
        raise FitError(
            f"{label} side has {idx.size} extrema, need at least {min_extrema}"
        )
    slope, _ = np.polyfit(distance[idx], np.log(np.abs(x[idx])), 1)
    return float(-slope), int(idx.size)


def envelope_fit(
    t: FloatArray, x: FloatArray, min_extrema: int = MIN_EXTREMA
) -> EnvelopeFit:
    """Fit exp(-rate |t|) to the extrema on each side of t = 0.

    Raises:
        FitError: fewer than ``min_extrema`` extrema on either side
    """
    t = np.asarray(t, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    if t.shape != x.shape or t.ndim != 1:
        raise ContractViolationError("t and x must be 1-D arrays of equal length")

    positive = t > 0
    negative = t < 0
    order = np.argsort(-t[negative])
    rate_pos, count_pos = _side_rate(t[positive], x[positive], min_extrema, "positive")
    rate_neg, count_neg = _side_rate(
        -t[negative][order], x[negative][order], min_extrema, "negative"
    )

    rate = 0.5 * (rate_pos + rate_neg)
    scale = max(abs(rate), np.finfo(np.float64).eps)
    asymmetry = abs(rate_pos - rate_neg) / scale
    logger.debug(
        f"Envelope rates {rate_pos:.6g} (t>0, {count_pos} extrema), "
        f"{rate_neg:.6g} (t<0, {count_neg} extrema)"
    )
    return EnvelopeFit(
        rate=rate,
        rate_positive=rate_pos,
        rate_negative=rate_neg,
        asymmetry=asymmetry,
        extrema_positive=count_pos,
        extrema_negative=count_neg,
    )


def fit_envelope(profile: Profile, min_extrema: int = MIN_EXTREMA) -> float:
    """Average decay rate of the profile's envelope on both sides."""
    return envelope_fit(profile.t, profile.x, min_extrema).rate
