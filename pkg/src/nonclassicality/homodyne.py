"""Unbalanced homodyne detection.

The signal is displaced by a strong local oscillator on a highly
transmissive beam splitter and photons are counted with efficiency
``eta_h``. The s-parameterized distribution at the displacement point is
a geometrically weighted alternating sum of the count probabilities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import binom

from .channel import ChannelParams
from .errors import SeriesDivergenceError, TruncationError, ValidationError
from .states import DensityMatrix, displaced_populations
from .witness import GaussianWitness, compensate_gaussian

DEFAULT_COUNT_TAIL_TOL = 1e-8


@dataclass(frozen=True)
class CountDistribution:
    probs: np.ndarray
    tail_mass: float

    def __post_init__(self):
        p = np.array(self.probs, dtype=float)
        if p.ndim != 1 or p.size < 1:
            raise ValidationError("count probabilities must be a non-empty vector")
        if np.any(p < -1e-12) or np.any(p > 1 + 1e-12):
            raise ValidationError("count probabilities must lie in [0, 1]")
        if abs(p.sum() + self.tail_mass - 1.0) > 1e-9:
            raise ValidationError("probabilities and tail mass do not add up to 1")
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    def mean(self) -> float:
        return float(np.arange(self.probs.size) @ self.probs)


@dataclass(frozen=True)
class SeriesResult:
    value: float
    terms_used: int
    ratio: float
    converged: bool
    truncation_bound: float

    def to_json_obj(self) -> dict:
        return {
            "value": self.value,
            "terms_used": self.terms_used,
            "ratio": self.ratio,
            "converged": self.converged,
            "truncation_bound": self.truncation_bound,
        }


def _loss_matrix(eta_h, levels):
    n = np.arange(levels)
    return binom.pmf(n[:, None], n[None, :], eta_h)


def count_distribution(
    dm: DensityMatrix, gamma: complex, eta_h: float, dim: int | None = None, tol: float = DEFAULT_COUNT_TAIL_TOL
) -> CountDistribution:
    """Photon-count statistics behind the homodyne beam splitter.

    The state is shifted so that phase-space point ``gamma`` moves to the
    origin, then each photon is detected with probability ``eta_h``.

    Raises:
        TruncationError: more than ``tol`` probability falls beyond ``dim``
            counts.
    """
    if not 0 < eta_h <= 1:
        raise ValidationError(f"detector efficiency must lie in (0, 1], got {eta_h}")
    levels = dm.dim if dim is None else int(dim)
    if levels < 1:
        raise ValidationError("dim must be positive")
    pops = displaced_populations(dm, complex(gamma), levels)
    probs = _loss_matrix(eta_h, levels) @ pops
    tail = 1.0 - math.fsum(probs)
    if tail > tol:
        raise TruncationError(f"{levels} count bins too few at gamma={gamma}", tail)
    return CountDistribution(probs, tail)


def _alternating_sum(counts, base, prefactor, tolerance):
    ratio = abs(base)
    if ratio >= 1:
        raise SeriesDivergenceError("reconstruction series diverges", ratio)
    p = counts.probs
    weights = base ** np.arange(p.size)
    partial = np.cumsum(weights * p)
    # Remaining probability after each term; the geometric envelope bounds the rest.
    remaining = np.maximum(1.0 - np.cumsum(p), 0.0)
    remaining[-1] = max(remaining[-1], counts.tail_mass)
    bounds = prefactor * ratio ** np.arange(1, p.size + 1) * remaining / (1.0 - ratio)
    hit = np.nonzero(bounds < tolerance)[0]
    last = int(hit[0]) if hit.size else p.size - 1
    return SeriesResult(
        value=float(prefactor * partial[last]),
        terms_used=last + 1,
        ratio=ratio,
        converged=bool(hit.size),
        truncation_bound=float(bounds[last]),
    )


def wall_series(counts: CountDistribution, a2: float, eta_h: float, tolerance: float = 1e-10) -> SeriesResult:
    """s = 1 - 2 a2 distribution at the displacement point from count probabilities.

    Sums ``1/(pi a2) * sum_n base^n P_n`` with ``base = -(1 - eta_h a2) / (eta_h a2)``.

    Raises:
        SeriesDivergenceError: ``|base| >= 1``, i.e. ``eta_h * a2 <= 1/2``.
    """
    if not a2 > 0:
        raise ValidationError("a2 must be > 0")
    if not 0 < eta_h <= 1:
        raise ValidationError(f"detector efficiency must lie in (0, 1], got {eta_h}")
    x = eta_h * a2
    return _alternating_sum(counts, -(1.0 - x) / x, 1.0 / (math.pi * a2), tolerance)


def modified_series(
    noisy_counts: CountDistribution,
    w: GaussianWitness,
    ch: ChannelParams,
    eta_h: float,
    tolerance: float = 1e-10,
) -> SeriesResult:
    """Clean-state value of witness ``w`` from counts on the noisy state.

    ``noisy_counts`` must be recorded at displacement ``w.center * sqrt(eta)``.
    The series is the plain reconstruction with the compensated width
    ``a2_eff = eta a2 - nbar (1 - eta)`` and an extra factor ``eta``.

    Raises:
        ThresholdError: the compensated witness does not exist.
        SeriesDivergenceError: ``eta_h * a2_eff <= 1/2``.
    """
    if not 0 < eta_h <= 1:
        raise ValidationError(f"detector efficiency must lie in (0, 1], got {eta_h}")
    cw = compensate_gaussian(w, ch)
    x = eta_h * cw.a2_eff
    return _alternating_sum(noisy_counts, -(1.0 - x) / x, cw.scale / (math.pi * cw.a2_eff), tolerance)


def sample_counts(counts: CountDistribution, shots: int, seed: int) -> np.ndarray:
    """Histogram of ``shots`` seeded draws from ``counts`` (tail mass folded back in)."""
    if int(shots) != shots or shots < 1:
        raise ValidationError(f"shots must be a positive integer, got {shots!r}")
    rng = np.random.default_rng(seed)
    p = np.clip(counts.probs, 0.0, None)
    return rng.multinomial(int(shots), p / p.sum())


def _series_weights(size, a2, eta_h, ch):
    if ch is None:
        x = eta_h * a2
        prefactor = 1.0 / (math.pi * a2)
    else:
        cw = compensate_gaussian(GaussianWitness(a2), ch)
        x = eta_h * cw.a2_eff
        prefactor = cw.scale / (math.pi * cw.a2_eff)
    base = -(1.0 - x) / x
    if abs(base) >= 1:
        raise SeriesDivergenceError("reconstruction series diverges", abs(base))
    return prefactor * base ** np.arange(size)


def reconstruct_with_shot_noise(
    histogram, a2: float, eta_h: float, ch: ChannelParams | None = None
) -> tuple[float, float]:
    """Series estimate from an empirical histogram, with its standard error.

    The series is linear in the frequencies, so the multinomial covariance
    propagates exactly: var = (sum w_n^2 f_n - estimate^2) / shots.
    With ``ch`` the compensated (noisy-state) series is used.
    """
    hist = np.asarray(histogram, dtype=float)
    shots = hist.sum()
    if shots < 1:
        raise ValidationError("histogram is empty")
    freq = hist / shots
    weights = _series_weights(hist.size, a2, eta_h, ch)
    estimate = float(weights @ freq)
    var = max(float((weights**2) @ freq) - estimate**2, 0.0) / shots
    return estimate, math.sqrt(var)
