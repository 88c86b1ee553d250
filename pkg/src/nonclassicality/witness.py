"""Witness functions: Gaussian (unbalanced homodyning) and discrete (Bochner).

A witness W(alpha) >= 0 whose average over the P-function is negative
certifies nonclassicality. Thermal noise smooths the P-function; the
compensated Gaussian witness undoes that smoothing on the witness side so
that the noisy-state average reproduces the clean-state one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .channel import ChannelParams, apply_channel_charfn
from .errors import GridResolutionError, ThresholdError, ValidationError
from .states import DensityMatrix, StateSpec, char_fn, s_distribution, s_distribution_charfn, s_distribution_dm


@dataclass(frozen=True)
class GaussianWitness:
    """Normalized Gaussian of variance ``a2`` centred at ``center``."""

    a2: float
    center: complex = 0j

    def __post_init__(self):
        if not self.a2 > 0:
            raise ValidationError(f"witness width a2 must be > 0, got {self.a2}")
        object.__setattr__(self, "center", complex(self.center))

    @property
    def s(self) -> float:
        """Ordering parameter of the distribution this witness samples."""
        return 1.0 - 2.0 * self.a2


@dataclass(frozen=True)
class CompensatedGaussianWitness:
    """``scale / (pi a2_eff) * exp(-|alpha - center|^2 / a2_eff)``."""

    scale: float
    a2_eff: float
    center: complex

    def __post_init__(self):
        if not self.a2_eff > 0:
            raise ValidationError(f"compensated width must be > 0, got {self.a2_eff}")
        if not self.scale > 0:
            raise ValidationError(f"compensated scale must be > 0, got {self.scale}")

    def value(self, alpha):
        return self.scale * np.exp(-np.abs(alpha - self.center) ** 2 / self.a2_eff) / (np.pi * self.a2_eff)


def gaussian_witness_value(w: GaussianWitness, alpha):
    return np.exp(-np.abs(alpha - w.center) ** 2 / w.a2) / (np.pi * w.a2)


def gaussian_witness_mean(spec: StateSpec, w: GaussianWitness) -> float:
    """Average of the witness over the P-function: the s = 1 - 2 a2 distribution at the center."""
    return s_distribution(spec, w.center, w.s)


def compensate_gaussian(w: GaussianWitness, ch: ChannelParams) -> CompensatedGaussianWitness:
    """Gaussian witness for the channel output with the same mean as ``w`` on the input.

    Anti-diffusing the rescaled witness shrinks its variance to
    ``eta * a2 - nbar * (1 - eta)``; it exists only while that stays positive.

    Raises:
        ThresholdError: the bath is too hot for this witness width.
    """
    a2_eff = ch.eta * w.a2 - ch.added_noise
    if not a2_eff > 0:
        raise ThresholdError(
            f"no positive compensated witness: eta*a2 - nbar*(1-eta) = {a2_eff:.6g} <= 0 "
            f"(nbar={ch.nbar:g} exceeds eta*a2/(1-eta))"
        )
    return CompensatedGaussianWitness(ch.eta, a2_eff, w.center * math.sqrt(ch.eta))


def compensated_witness_mean(noisy, cw: CompensatedGaussianWitness, ch: ChannelParams | None = None) -> float:
    """Average of ``cw`` over the P-function of a noisy state.

    ``noisy`` is either a :class:`DensityMatrix` of the channel output, or a
    clean :class:`StateSpec` together with ``ch``. In the latter case the
    output characteristic function is Gaussian-damped and Fourier-inverted
    numerically. The density-matrix route uses displaced photon statistics
    and needs ``a2_eff >= 1/2``.
    """
    s = 1.0 - 2.0 * cw.a2_eff
    if isinstance(noisy, DensityMatrix):
        return cw.scale * s_distribution_dm(noisy, cw.center, s)
    if ch is None:
        raise ValidationError("a state spec needs the channel that produced the noisy state")
    phi_out = apply_channel_charfn(char_fn(noisy), ch)
    return cw.scale * s_distribution_charfn(phi_out, cw.center, s)


def uncompensated_noisy_mean(spec: StateSpec, ch: ChannelParams, w: GaussianWitness) -> float:
    """Average of the unmodified witness ``w`` over the noisy P-function."""
    if not ch.eta > 0:
        raise ValidationError("eta must be > 0")
    s_prime = 1.0 - 2.0 * (ch.added_noise + w.a2) / ch.eta
    return s_distribution(spec, w.center / math.sqrt(ch.eta), s_prime) / ch.eta


# ----------------------------------------------------------------------------
# Discrete witnesses
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class DiscreteWitness:
    points: tuple[complex, ...]
    coeffs: tuple[complex, ...]

    def __post_init__(self):
        pts = tuple(complex(p) for p in self.points)
        cfs = tuple(complex(c) for c in self.coeffs)
        if not pts:
            raise ValidationError("discrete witness needs at least one point")
        if len(pts) != len(cfs):
            raise ValidationError("points and coefficients differ in length")
        if len(set(pts)) != len(pts):
            raise ValidationError("discrete witness points must be pairwise distinct")
        if not any(cfs):
            raise ValidationError("at least one coefficient must be nonzero")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "coeffs", cfs)


def discrete_witness_value(dw: DiscreteWitness, alpha):
    """|sum_k xi_k exp(alpha^* alpha_k - alpha alpha_k^*)|^2, vectorized over ``alpha``."""
    alpha = np.asarray(alpha, dtype=complex)
    pts = np.asarray(dw.points)
    amp = np.exp(np.multiply.outer(np.conj(alpha), pts) - np.multiply.outer(alpha, np.conj(pts))) @ np.asarray(
        dw.coeffs
    )
    out = np.abs(amp) ** 2
    return float(out) if out.ndim == 0 else out


def _evolved_symbol(dw, ch):
    pts = np.asarray(dw.points)
    xi = np.asarray(dw.coeffs)
    diff = pts[:, None] - pts[None, :]
    weight = np.outer(xi, np.conj(xi)) * np.exp(ch.nbar * (1 - ch.eta) / ch.eta * np.abs(diff) ** 2)
    scaled = diff / math.sqrt(ch.eta)

    def symbol(alpha):
        alpha = np.asarray(alpha, dtype=complex)
        phase = np.multiply.outer(np.conj(alpha), scaled) - np.multiply.outer(alpha, np.conj(scaled))
        return np.real(np.sum(weight * np.exp(phase), axis=(-2, -1)))

    return symbol


def evolved_discrete_witness_min(dw: DiscreteWitness, ch: ChannelParams, step: float | None = None) -> float:
    """Minimum of the anti-diffused discrete witness over phase space.

    The symbol is a trigonometric polynomial in alpha. It is scanned on a
    square grid (default step pi / (8 w) with w = max |alpha_k - alpha_l| /
    sqrt(eta)) covering two periods of the slowest phase, then the best grid
    cells are polished with a local optimizer.

    Raises:
        GridResolutionError: ``step`` exceeds pi / (4 w).
    """
    if not ch.eta > 0:
        raise ValidationError("eta must be > 0")
    if len(dw.points) < 2:
        raise ValidationError("need at least two distinct points")
    pts = np.asarray(dw.points)
    gaps = np.abs(pts[:, None] - pts[None, :])[~np.eye(len(pts), dtype=bool)]
    fastest = gaps.max() / math.sqrt(ch.eta)
    slowest = gaps.min() / math.sqrt(ch.eta)
    coarsest = math.pi / (4 * fastest)
    step = math.pi / (8 * fastest) if step is None else step
    if step > coarsest:
        raise GridResolutionError(f"grid step {step:g} cannot resolve the phase; need <= {coarsest:g}")

    symbol = _evolved_symbol(dw, ch)
    radius = 2 * math.pi / slowest
    axis = np.arange(-radius, radius + step / 2, step)
    grid = axis[None, :] + 1j * axis[:, None]
    values = np.concatenate([symbol(row) for row in grid])
    best = np.argsort(values)[:5]
    flat = grid.ravel()

    def objective(x):
        return float(symbol(complex(x[0], x[1])))

    lowest = float(values[best[0]])
    for idx in best:
        res = minimize(objective, [flat[idx].real, flat[idx].imag], method="BFGS", options={"gtol": 1e-12})
        lowest = min(lowest, float(res.fun))
    return lowest
