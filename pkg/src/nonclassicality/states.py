"""Single-mode state catalog.

Every state has two interchangeable representations: an analytic
normally ordered characteristic function

    Phi(beta) = Tr[rho exp(beta a^dag) exp(-beta^* a)]

and a truncated Fock-basis density matrix. The s-parameterized
phase-space distributions (P at s=1, Wigner at s=0, Husimi Q at s=-1) are
Gaussian smoothings of the P-function and are evaluated from closed forms
where they exist and by Fourier quadrature otherwise.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Union

import jsonschema
import numpy as np
from scipy.special import gammaln, xlogy
from scipy.stats import poisson

from ._fourier import inverse_fourier
from .errors import OverflowGuardError, TruncationError, ValidationError

DEFAULT_DIM = 64
DEFAULT_TAIL_TOL = 1e-10
MAX_NESTING = 16

# ----------------------------------------------------------------------------
# State specifications
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class Fock:
    n: int

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 0:
            raise ValidationError(f"Fock photon number must be a nonnegative integer, got {self.n!r}")


@dataclass(frozen=True)
class Coherent:
    amplitude: complex

    def __post_init__(self):
        object.__setattr__(self, "amplitude", complex(self.amplitude))
        if not np.isfinite(self.amplitude):
            raise ValidationError("coherent amplitude must be finite")


@dataclass(frozen=True)
class Thermal:
    mean_photons: float

    def __post_init__(self):
        if not (np.isfinite(self.mean_photons) and self.mean_photons >= 0):
            raise ValidationError(f"thermal mean photon number must be >= 0, got {self.mean_photons!r}")


@dataclass(frozen=True)
class Mixture:
    """Convex combination of states; weights are checked, never renormalized."""

    components: tuple[tuple[float, "StateSpec"], ...]

    def __post_init__(self):
        comps = tuple((float(w), spec) for w, spec in self.components)
        object.__setattr__(self, "components", comps)
        if not comps:
            raise ValidationError("mixture needs at least one component")
        for w, _ in comps:
            if not np.isfinite(w) or w < 0:
                raise ValidationError(f"mixture weight must be nonnegative, got {w}")
        total = math.fsum(w for w, _ in comps)
        if abs(total - 1.0) > 1e-12:
            raise ValidationError(f"mixture weights sum to {total!r}, not 1")
        if _depth(self) > MAX_NESTING:
            raise ValidationError(f"mixture nesting deeper than {MAX_NESTING}")


StateSpec = Union[Fock, Coherent, Thermal, Mixture]


def _depth(spec):
    if isinstance(spec, Mixture):
        return 1 + max(_depth(s) for _, s in spec.components)
    return 0


def vacuum() -> Fock:
    return Fock(0)


def mean_photon_number(spec: StateSpec) -> float:
    match spec:
        case Fock(n=n):
            return float(n)
        case Coherent(amplitude=a):
            return abs(a) ** 2
        case Thermal(mean_photons=m):
            return float(m)
        case Mixture(components=comps):
            return math.fsum(w * mean_photon_number(s) for w, s in comps)
    raise TypeError(f"not a state spec: {spec!r}")


# ----------------------------------------------------------------------------
# JSON interface
# ----------------------------------------------------------------------------

STATE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$ref": "#/$defs/state",
    "$defs": {
        "state": {
            "oneOf": [
                {
                    "type": "object",
                    "properties": {"type": {"const": "fock"}, "n": {"type": "integer", "minimum": 0}},
                    "required": ["type", "n"],
                    "additionalProperties": False,
                },
                {
                    "type": "object",
                    "properties": {
                        "type": {"const": "coherent"},
                        "re": {"type": "number"},
                        "im": {"type": "number"},
                    },
                    "required": ["type", "re", "im"],
                    "additionalProperties": False,
                },
                {
                    "type": "object",
                    "properties": {"type": {"const": "thermal"}, "nbar": {"type": "number", "minimum": 0}},
                    "required": ["type", "nbar"],
                    "additionalProperties": False,
                },
                {
                    "type": "object",
                    "properties": {
                        "type": {"const": "mixture"},
                        "components": {
                            "type": "array",
                            "minItems": 1,
                            "items": {
                                "type": "object",
                                "properties": {
                                    "weight": {"type": "number", "minimum": 0},
                                    "state": {"$ref": "#/$defs/state"},
                                },
                                "required": ["weight", "state"],
                                "additionalProperties": False,
                            },
                        },
                    },
                    "required": ["type", "components"],
                    "additionalProperties": False,
                },
            ]
        }
    },
}


def _json_depth(obj, level=0):
    if level > MAX_NESTING + 1:
        raise ValidationError(f"mixture nesting deeper than {MAX_NESTING}")
    if isinstance(obj, dict) and obj.get("type") == "mixture":
        for comp in obj.get("components") or []:
            if isinstance(comp, dict):
                _json_depth(comp.get("state"), level + 1)


def _from_obj(obj) -> StateSpec:
    kind = obj["type"]
    if kind == "fock":
        return Fock(obj["n"])
    if kind == "coherent":
        return Coherent(complex(obj["re"], obj["im"]))
    if kind == "thermal":
        return Thermal(float(obj["nbar"]))
    return Mixture(tuple((c["weight"], _from_obj(c["state"])) for c in obj["components"]))


def parse_state_spec(text: str | dict) -> StateSpec:
    """Parse and validate a JSON state description.

    >>> parse_state_spec('{"type": "fock", "n": 1}')
    Fock(n=1)
    """
    if isinstance(text, (str, bytes)):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"malformed state JSON: {exc}") from None
    else:
        obj = text
    _json_depth(obj)
    try:
        jsonschema.validate(obj, STATE_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ValidationError(f"state spec does not match schema: {exc.message}") from None
    return _from_obj(obj)


def spec_to_obj(spec: StateSpec) -> dict:
    match spec:
        case Fock(n=n):
            return {"type": "fock", "n": n}
        case Coherent(amplitude=a):
            return {"type": "coherent", "re": a.real, "im": a.imag}
        case Thermal(mean_photons=m):
            return {"type": "thermal", "nbar": m}
        case Mixture(components=comps):
            return {"type": "mixture", "components": [{"weight": w, "state": spec_to_obj(s)} for w, s in comps]}
    raise TypeError(f"not a state spec: {spec!r}")


# ----------------------------------------------------------------------------
# Density matrices
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class DensityMatrix:
    """Truncated Fock-basis density matrix.

    ``tail_tol`` is the probability mass the truncation is allowed to drop;
    the trace must lie in ``[1 - tail_tol, 1]``.
    """

    entries: np.ndarray
    tail_tol: float = DEFAULT_TAIL_TOL

    def __post_init__(self):
        rho = np.array(self.entries, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] < 1:
            raise ValidationError(f"density matrix must be square and non-empty, got shape {rho.shape}")
        if np.max(np.abs(rho - rho.conj().T)) > 1e-12:
            raise ValidationError("density matrix is not Hermitian")
        rho = 0.5 * (rho + rho.conj().T)
        tr = float(np.trace(rho).real)
        if not (1.0 - self.tail_tol - 1e-12 <= tr <= 1.0 + 1e-12):
            raise ValidationError(f"trace {tr!r} outside [1 - {self.tail_tol:g}, 1]")
        min_eig = float(np.linalg.eigvalsh(rho)[0])
        if min_eig < -1e-10:
            raise ValidationError(f"density matrix not positive semidefinite (eigenvalue {min_eig:.3e})")
        rho.setflags(write=False)
        object.__setattr__(self, "entries", rho)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def trace(self) -> float:
        return float(np.trace(self.entries).real)

    def populations(self) -> np.ndarray:
        return self.entries.diagonal().real.copy()


def coherent_amplitudes(gamma: complex, dim: int) -> np.ndarray:
    """Fock amplitudes exp(-|gamma|^2/2) gamma^n / sqrt(n!), n < dim, in log form."""
    n = np.arange(dim)
    if gamma == 0:
        out = np.zeros(dim, dtype=complex)
        out[0] = 1.0
        return out
    log_mag = -0.5 * abs(gamma) ** 2 + n * math.log(abs(gamma)) - 0.5 * gammaln(n + 1)
    return np.exp(log_mag + 1j * n * np.angle(gamma))


def _thermal_populations(m, dim):
    n = np.arange(dim)
    # m^n / (1+m)^(n+1); xlogy keeps m = 0 exact.
    return np.exp(xlogy(n, m) - (n + 1) * math.log1p(m))


def _tail(spec, dim):
    match spec:
        case Fock(n=n):
            return 0.0 if n < dim else 1.0
        case Coherent(amplitude=a):
            return float(poisson.sf(dim - 1, abs(a) ** 2))
        case Thermal(mean_photons=m):
            return (m / (1.0 + m)) ** dim
        case Mixture(components=comps):
            return math.fsum(w * _tail(s, dim) for w, s in comps)


def _dm_entries(spec, dim):
    match spec:
        case Fock(n=n):
            rho = np.zeros((dim, dim), dtype=complex)
            rho[n, n] = 1.0
            return rho
        case Coherent(amplitude=a):
            c = coherent_amplitudes(a, dim)
            return np.outer(c, c.conj())
        case Thermal(mean_photons=m):
            return np.diag(_thermal_populations(m, dim)).astype(complex)
        case Mixture(components=comps):
            return sum(w * _dm_entries(s, dim) for w, s in comps)


def build_density_matrix(spec: StateSpec, dim: int = DEFAULT_DIM, tail_tol: float = DEFAULT_TAIL_TOL) -> DensityMatrix:
    """Fock-basis density matrix of ``spec`` truncated to ``dim`` levels.

    Raises:
        TruncationError: the neglected probability exceeds ``tail_tol``.
    """
    if int(dim) != dim or dim < 1:
        raise ValidationError(f"dim must be a positive integer, got {dim!r}")
    tail = _tail(spec, dim)
    if tail >= tail_tol:
        raise TruncationError(f"dim={dim} too small for tail tolerance {tail_tol:g}", tail)
    return DensityMatrix(_dm_entries(spec, dim), tail_tol=tail_tol)


# ----------------------------------------------------------------------------
# Characteristic functions
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class CharFn:
    """Normally ordered characteristic function ``beta -> Phi(beta)``.

    ``func`` must accept complex numpy arrays. ``radial`` marks functions of
    |beta| alone, which enables a one-dimensional Fourier route.
    """

    func: Callable[[np.ndarray], np.ndarray]
    provenance: str = "analytic"
    radial: bool = False
    label: str = field(default="", compare=False)

    def __call__(self, beta):
        out = self.func(np.asarray(beta, dtype=complex))
        return complex(out) if np.ndim(out) == 0 else out


def _laguerre(n, x):
    """L_n(x) by the three-term recurrence; vectorized over x."""
    prev = np.ones_like(x)
    if n == 0:
        return prev
    cur = 1.0 - x
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 - x) * cur - k * prev) / (k + 1)
    return cur


def _is_radial(spec):
    match spec:
        case Coherent(amplitude=a):
            return a == 0
        case Mixture(components=comps):
            return all(_is_radial(s) for _, s in comps)
    return True


def _phi_func(spec):
    match spec:
        case Fock(n=n):
            # <n| e^{beta a^dag} e^{-beta^* a} |n> = L_n(|beta|^2)
            return lambda b: _laguerre(n, np.abs(b) ** 2)
        case Coherent(amplitude=a):
            return lambda b: np.exp(np.conj(a) * b - a * np.conj(b))
        case Thermal(mean_photons=m):
            return lambda b: np.exp(-m * np.abs(b) ** 2) + 0j
        case Mixture(components=comps):
            parts = [(w, _phi_func(s)) for w, s in comps]
            return lambda b: sum(w * f(b) for w, f in parts)


def char_fn(spec: StateSpec) -> CharFn:
    """Analytic characteristic function of a catalog state."""
    return CharFn(_phi_func(spec), "analytic", radial=_is_radial(spec), label=json.dumps(spec_to_obj(spec)))


# ----------------------------------------------------------------------------
# Displacement operator in the Fock basis
# ----------------------------------------------------------------------------


def _displacement_batch(beta, rows, cols):
    """<m|D(beta)|n> for m < rows, n < cols; trailing axis runs over ``beta``.

    For m = n + k >= n the element is
    sqrt(n!/m!) beta^k exp(-|beta|^2/2) L_n^(k)(|beta|^2). The normalized
    magnitudes F_n^(k) obey the Laguerre three-term recurrence in n,
    rescaled so every iterate is itself a matrix element (|F| <= 1):

        sqrt((n+1)(n+1+k)) F_{n+1} = (2n+1+k-x) F_n - sqrt(n(n+k)) F_{n-1}

    Seeds F_0^(k) = |beta|^k exp(-x/2) / sqrt(k!) are built in log form.
    Elements above the diagonal follow from <m|D|n> = (-1)^(n-m) <n|D|m>^*.
    """
    beta = np.atleast_1d(np.asarray(beta, dtype=complex))
    n_low = min(rows, cols)
    n_k = max(rows, cols)
    x = np.abs(beta) ** 2
    k = np.arange(n_k)[:, None]
    log_seed = xlogy(k, np.abs(beta)[None, :]) - 0.5 * x[None, :] - 0.5 * gammaln(k + 1)
    f_prev = np.zeros((n_k, beta.size))
    f_cur = np.exp(log_seed)
    phase = np.exp(1j * k * np.angle(beta)[None, :])
    mags = np.empty((n_low, n_k, beta.size))
    for n in range(n_low):
        mags[n] = f_cur
        f_next = ((2 * n + 1 + k - x[None, :]) * f_cur - np.sqrt(n * (n + k)) * f_prev) / np.sqrt((n + 1) * (n + 1 + k))
        f_prev, f_cur = f_cur, f_next

    out = np.zeros((rows, cols, beta.size), dtype=complex)
    for n in range(n_low):
        # lower triangle incl. diagonal: column n, rows n..rows-1
        span = rows - n
        out[n:, n, :] = mags[n, :span] * phase[:span]
        # upper triangle: row n, columns n+1..cols-1
        span = cols - n - 1
        if span > 0:
            sign = (-1.0) ** np.arange(1, span + 1)[:, None]
            out[n, n + 1 :, :] = sign * mags[n, 1 : span + 1] * np.conj(phase[1 : span + 1])
    return out


def displacement_matrix(beta: complex, dim: int, cols: int | None = None) -> np.ndarray:
    """Matrix elements <m|D(beta)|n> of D(beta) = exp(beta a^dag - beta^* a).

    Each entry is the exact infinite-space value (nothing is truncated), so
    a rectangular block ``dim x cols`` is as accurate as the leading block
    of a larger matrix.
    """
    return _displacement_batch(beta, dim, dim if cols is None else cols)[:, :, 0]


# Fock-basis evaluation multiplies Tr(rho D) ~ exp(-|beta|^2/2) back up by
# exp(|beta|^2/2); rounding noise grows by the same factor.
_GUARD_LOG = math.log(1e8)


def _check_guard(beta_abs2, dim):
    worst = float(np.max(beta_abs2)) if np.size(beta_abs2) else 0.0
    if 0.5 * worst + math.log(dim) > _GUARD_LOG:
        raise OverflowGuardError(
            f"|beta|^2 = {worst:.3g} too large for Fock-basis evaluation at dim={dim} "
            f"(requires |beta|^2/2 + ln(dim) <= {_GUARD_LOG:.2f})"
        )


def char_fn_from_dm(dm: DensityMatrix, beta):
    """exp(|beta|^2 / 2) * Tr(rho D(beta)); vectorized over ``beta``."""
    b = np.asarray(beta, dtype=complex)
    flat = np.atleast_1d(b).ravel()
    _check_guard(np.abs(flat) ** 2, dm.dim)
    out = np.empty(flat.size, dtype=complex)
    chunk = max(1, 2**20 // dm.dim**2)
    for start in range(0, flat.size, chunk):
        part = flat[start : start + chunk]
        d = _displacement_batch(part, dm.dim, dm.dim)
        out[start : start + chunk] = np.einsum("nm,mnk->k", dm.entries, d) * np.exp(0.5 * np.abs(part) ** 2)
    return complex(out[0]) if b.ndim == 0 else out.reshape(b.shape)


def dm_char_fn(dm: DensityMatrix) -> CharFn:
    return CharFn(lambda b: char_fn_from_dm(dm, b), "from_density_matrix")


def displaced_populations(dm: DensityMatrix, gamma: complex, levels: int) -> np.ndarray:
    """Photon-number populations of D(-gamma) rho D(-gamma)^dag, n < levels.

    These are the counts statistics an ideal detector sees behind an
    unbalanced homodyne setup tuned to phase-space point ``gamma``.
    """
    d = displacement_matrix(-gamma, levels, dm.dim)
    return np.einsum("ij,jk,ik->i", d, dm.entries, d.conj()).real


# ----------------------------------------------------------------------------
# s-parameterized distributions
# ----------------------------------------------------------------------------


def _gaussian(alpha, center, width):
    return np.exp(-np.abs(alpha - center) ** 2 / width) / (np.pi * width)


def fock1_s_distribution(alpha, s):
    """Closed form for |1><1|, valid for every s < 1."""
    x = np.abs(alpha) ** 2
    return 2.0 / (np.pi * (1 - s) ** 3) * (4 * x - 1 + s**2) * np.exp(-2 * x / (1 - s))


def s_distribution(spec: StateSpec, alpha, s: float):
    """s-parameterized quasi-distribution of ``spec`` at ``alpha``.

    Coherent, thermal and single-photon states use closed forms; higher Fock
    states go through Fourier quadrature of the smoothed characteristic
    function. Mixtures are evaluated component by component.

    Raises:
        ValidationError: ``s >= 1``, where the P-function is not a function.
    """
    if not s < 1:
        raise ValidationError(f"s-distribution needs s < 1 for pointwise evaluation, got s={s}")
    alpha = np.asarray(alpha, dtype=complex)
    half_width = 0.5 * (1 - s)
    match spec:
        case Fock(n=0):
            out = _gaussian(alpha, 0, half_width)
        case Fock(n=1):
            out = fock1_s_distribution(alpha, s)
        case Fock():
            out = inverse_fourier(char_fn(spec), alpha, s, radial=True)
        case Coherent(amplitude=a):
            out = _gaussian(alpha, a, half_width)
        case Thermal(mean_photons=m):
            out = _gaussian(alpha, 0, m + half_width)
        case Mixture(components=comps):
            out = sum(w * np.asarray(s_distribution(c, alpha, s)) for w, c in comps)
        case _:
            raise TypeError(f"not a state spec: {spec!r}")
    return float(out) if np.ndim(out) == 0 else np.asarray(out, dtype=float)


def s_distribution_charfn(phi: CharFn, alpha, s: float, tol: float = 1e-11):
    """s-distribution of an arbitrary characteristic function by quadrature."""
    return inverse_fourier(phi, alpha, s, radial=phi.radial, tol=tol)


def s_distribution_dm(dm: DensityMatrix, alpha: complex, s: float) -> float:
    """s-distribution of a density matrix via displaced photon-number statistics.

    Uses P(alpha, s) = 2/(pi(1-s)) sum_n q^n <n|D(-alpha) rho D(-alpha)^dag|n>
    with q = (1+s)/(s-1). Restricted to s <= 0 (|q| <= 1), where the sum is
    a convex-like average and rounding cannot be amplified.
    """
    if not s <= 0:
        raise OverflowGuardError(
            f"Fock-basis s-distribution is ill-conditioned for s={s} > 0; use the characteristic-function route"
        )
    q = (1 + s) / (s - 1)
    levels = dm.dim + 32 + int(4 * abs(alpha) ** 2 + 8 * abs(alpha))
    pops = displaced_populations(dm, alpha, levels)
    return float(2.0 / (np.pi * (1 - s)) * np.sum(q ** np.arange(levels) * pops))
