"""Thermal-loss channel.

The input mode is mixed with a thermal bath mode on a beam splitter of
transmissivity ``eta``; the bath holds ``nbar`` mean photons. On the
characteristic-function side this is

    Phi_out(beta) = Phi_in(sqrt(eta) beta) * exp(-nbar (1 - eta) |beta|^2),

which is the reference definition everything else here is checked against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import expm

from .errors import ThresholdError, TruncationError, UnboundedThresholdError, ValidationError
from .grid import PhaseSpaceGrid
from .states import CharFn, DensityMatrix, StateSpec, s_distribution

ANCILLA_TAIL_TOL = 1e-12


@dataclass(frozen=True)
class ChannelParams:
    eta: float
    nbar: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.eta <= 1.0:
            raise ValidationError(f"efficiency eta must lie in [0, 1], got {self.eta}")
        if not (np.isfinite(self.nbar) and self.nbar >= 0):
            raise ValidationError(f"thermal photon number must be >= 0, got {self.nbar}")

    @property
    def added_noise(self) -> float:
        """Variance nbar * (1 - eta) the channel adds to the P-function."""
        return self.nbar * (1.0 - self.eta)


def compose(first: ChannelParams, second: ChannelParams) -> ChannelParams:
    """Single channel equivalent to ``first`` followed by ``second``."""
    eta = first.eta * second.eta
    noise = first.added_noise * second.eta + second.added_noise
    if eta == 1.0:
        return ChannelParams(1.0, 0.0)
    return ChannelParams(eta, noise / (1.0 - eta))


def apply_channel_charfn(phi: CharFn, ch: ChannelParams) -> CharFn:
    root = math.sqrt(ch.eta)
    noise = ch.added_noise

    def out(beta):
        return phi.func(root * beta) * np.exp(-noise * np.abs(beta) ** 2)

    return CharFn(out, phi.provenance, radial=phi.radial, label=phi.label)


def thermal_threshold(eta: float) -> float:
    """Bath photon number eta / (1 - eta) above which the output P-function is nonnegative."""
    if not 0.0 <= eta <= 1.0:
        raise ValidationError(f"efficiency eta must lie in [0, 1], got {eta}")
    if eta == 1.0:
        raise UnboundedThresholdError("thermal threshold is unbounded for eta = 1")
    return eta / (1.0 - eta)


def output_s_param(ch: ChannelParams) -> float:
    """Ordering parameter s' with P_out(alpha) = P_in(alpha / sqrt(eta), s') / eta."""
    if ch.eta == 0:
        raise ValidationError("output ordering parameter undefined for eta = 0")
    return 1.0 - 2.0 * ch.nbar * (1.0 - ch.eta) / ch.eta


def input_s_param(ch: ChannelParams, s: float = 1.0) -> float:
    """Input ordering that reproduces the output s-distribution after rescaling."""
    if ch.eta == 0:
        raise ValidationError("eta = 0 erases the input state")
    return 1.0 - (2.0 * ch.added_noise + (1.0 - s)) / ch.eta


def output_s_distribution(spec: StateSpec, ch: ChannelParams, alpha, s: float = 1.0):
    """s-distribution of the channel output, through the input state's closed forms.

    With ``s=1`` this is the output P-function, a regular function whenever
    the channel adds noise (``nbar * (1 - eta) > 0``).
    """
    s_in = input_s_param(ch, s)
    if not s_in < 1:
        raise ThresholdError("output P-function is singular: the channel adds no noise")
    root = math.sqrt(ch.eta)
    return np.asarray(s_distribution(spec, np.asarray(alpha) / root, s_in)) / ch.eta


# ----------------------------------------------------------------------------
# Fock-basis realization
# ----------------------------------------------------------------------------


@lru_cache(maxsize=32)
def _beam_splitter_blocks(theta: float, n_max: int) -> np.ndarray:
    """Beam-splitter unitary exp(theta (a^dag c - a c^dag)) per total photon number.

    ``blocks[N, k, m]`` is the amplitude |m, N-m> -> |k, N-k> (first index is
    the signal occupation). Each block is an invariant subspace, so the
    exponential is exact.
    """
    blocks = np.zeros((n_max + 1, n_max + 1, n_max + 1))
    for total in range(n_max + 1):
        k = np.arange(total)
        gen = np.zeros((total + 1, total + 1))
        up = np.sqrt((k + 1) * (total - k))
        gen[k + 1, k] = up
        gen[k, k + 1] = -up
        blocks[total, : total + 1, : total + 1] = expm(theta * gen)
    blocks.setflags(write=False)
    return blocks


def default_ancilla_dim(nbar: float, tol: float = ANCILLA_TAIL_TOL) -> int:
    if nbar == 0:
        return 1
    ratio = nbar / (1.0 + nbar)
    return int(math.ceil(math.log(tol / 10) / math.log(ratio)))


def apply_channel_dm(
    dm: DensityMatrix, ch: ChannelParams, ancilla_dim: int | None = None, out_dim: int | None = None
) -> DensityMatrix:
    """Thermal-loss channel by explicit beam splitter and traced-out thermal ancilla.

    Args:
        dm: input state.
        ch: channel parameters.
        ancilla_dim: Fock cutoff of the bath mode; its thermal tail must stay
            below 1e-12. Chosen automatically when omitted.
        out_dim: cutoff of the returned matrix, ``dm.dim`` by default.

    Raises:
        TruncationError: the ancilla cutoff or the output cutoff drops too
            much probability.
    """
    anc = default_ancilla_dim(ch.nbar) if ancilla_dim is None else int(ancilla_dim)
    if anc < 1:
        raise ValidationError("ancilla_dim must be positive")
    ratio = ch.nbar / (1.0 + ch.nbar)
    anc_tail = ratio**anc
    if anc_tail >= ANCILLA_TAIL_TOL:
        raise TruncationError(f"ancilla_dim={anc} too small for bath nbar={ch.nbar}", anc_tail)
    out_dim = dm.dim if out_dim is None else int(out_dim)

    dim = dm.dim
    n_max = dim + anc - 2
    blocks = _beam_splitter_blocks(math.acos(math.sqrt(ch.eta)), n_max)
    tau = ratio ** np.arange(anc) / (1.0 + ch.nbar)
    rho = dm.entries
    full = np.zeros((n_max + 1, n_max + 1), dtype=complex)
    for j in range(anc):
        if tau[j] == 0.0:
            continue
        for r in range(dim + j):
            shift = r - j
            k = np.arange(max(0, -shift), dim - shift)
            coeff = blocks[k + r, k, k + shift]
            if not np.any(coeff):
                continue
            sub = rho[np.ix_(k + shift, k + shift)]
            full[np.ix_(k, k)] += tau[j] * (coeff[:, None] * coeff[None, :]) * sub

    out = full[:out_dim, :out_dim]
    dropped = float(np.trace(full).real - np.trace(out).real)
    if dropped > dm.tail_tol:
        raise TruncationError(f"out_dim={out_dim} too small for the channel output", dropped)
    return DensityMatrix(out, tail_tol=dm.tail_tol + anc_tail + max(dropped, 0.0))


# ----------------------------------------------------------------------------
# Diffusion law
# ----------------------------------------------------------------------------


def _stencil_laplacian(values, h):
    """Fourth-order central Laplacian; the outer two rows/columns are left as NaN."""
    v = values
    out = np.full(v.shape, np.nan)
    c = v[2:-2, 2:-2]
    d2x = (-v[2:-2, :-4] + 16 * v[2:-2, 1:-3] - 30 * c + 16 * v[2:-2, 3:-1] - v[2:-2, 4:]) / (12 * h * h)
    d2y = (-v[:-4, 2:-2] + 16 * v[1:-3, 2:-2] - 30 * c + 16 * v[3:-1, 2:-2] - v[4:, 2:-2]) / (12 * h * h)
    out[2:-2, 2:-2] = d2x + d2y
    return out


def _spectral_laplacian(values, h):
    ny, nx = values.shape
    kx = 2 * np.pi * np.fft.fftfreq(nx, d=h)
    ky = 2 * np.pi * np.fft.fftfreq(ny, d=h)
    symbol = -(kx[None, :] ** 2 + ky[:, None] ** 2)
    return np.real(np.fft.ifft2(symbol * np.fft.fft2(values)))


def laplacian(values, h, edge_tol=1e-12):
    """Real Laplacian of gridded samples.

    Spectral when the samples vanish at the grid edge (the periodic
    extension is then smooth), fourth-order stencil otherwise.
    """
    edge = max(np.max(np.abs(values[[0, -1], :])), np.max(np.abs(values[:, [0, -1]])))
    if edge <= edge_tol * np.max(np.abs(values)):
        return _spectral_laplacian(values, h)
    return _stencil_laplacian(values, h)


def diffusion_residual(
    spec: StateSpec, ch: ChannelParams, grid: PhaseSpaceGrid | None = None, d_nbar: float = 1e-3
) -> float:
    """Max residual of dP/dnbar = (1 - eta) d^2 P / (d alpha d alpha^*) on ``grid``.

    The output P-function is sampled at ``nbar`` and ``nbar +- d_nbar``; the
    bath-photon derivative is a central difference and the mixed derivative
    d^2/(d alpha d alpha^*) is a quarter of the real Laplacian. Expected size
    O(d_nbar^2) plus the discretization error of :func:`laplacian`.
    """
    grid = PhaseSpaceGrid(4.0, 0.05) if grid is None else grid
    if abs(grid.center) + grid.radius > 4.0 + 1e-12:
        raise ValidationError("diffusion residual grid must stay within radius 4")
    if not 0 < d_nbar < ch.nbar:
        raise ValidationError(f"need 0 < d_nbar < nbar, got d_nbar={d_nbar}, nbar={ch.nbar}")
    limit = thermal_threshold(ch.eta)
    if not ch.nbar + d_nbar < limit:
        raise ThresholdError(f"nbar + d_nbar = {ch.nbar + d_nbar:g} not below the thermal threshold {limit:g}")

    pts = grid.points()

    def p_at(nbar):
        return output_s_distribution(spec, ChannelParams(ch.eta, nbar), pts)

    d_dn = (p_at(ch.nbar + d_nbar) - p_at(ch.nbar - d_nbar)) / (2 * d_nbar)
    generator = 0.25 * laplacian(p_at(ch.nbar), grid.step)
    return float(np.nanmax(np.abs(d_dn - (1.0 - ch.eta) * generator)))
