"""Discrete Bochner test on the characteristic function.

A classical state has a positive P-function, so its characteristic
function is positive definite: for any points alpha_k the matrix
Phi(alpha_k - alpha_l) is positive semidefinite. A negative eigenvalue
therefore certifies nonclassicality.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .states import CharFn

DEFAULT_TOL = 1e-9
HERMITICITY_TOL = 1e-8


@dataclass(frozen=True)
class BochnerReport:
    points: tuple[complex, ...]
    matrix: np.ndarray
    min_eigenvalue: float
    verdict: str
    worst_minor: tuple[tuple[int, ...], float]

    def to_json_obj(self) -> dict:
        def c(z):
            return {"re": float(np.real(z)), "im": float(np.imag(z))}

        return {
            "points": [c(p) for p in self.points],
            "matrix": [[c(z) for z in row] for row in self.matrix],
            "min_eigenvalue": self.min_eigenvalue,
            "verdict": self.verdict,
            "worst_minor": {"indices": list(self.worst_minor[0]), "determinant": self.worst_minor[1]},
        }


def parse_points(text: str) -> list[complex]:
    """Points from a JSON array of ``{"re": .., "im": ..}`` objects."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed points JSON: {exc}") from None
    if not isinstance(raw, list):
        raise ValidationError("points must be a JSON array")
    out = []
    for item in raw:
        if not (isinstance(item, dict) and set(item) == {"re", "im"}):
            raise ValidationError(f"each point needs exactly 're' and 'im', got {item!r}")
        if not all(isinstance(item[k], (int, float)) and not isinstance(item[k], bool) for k in ("re", "im")):
            raise ValidationError(f"point components must be numbers, got {item!r}")
        out.append(complex(item["re"], item["im"]))
    return out


def _check_points(points):
    pts = [complex(p) for p in points]
    if len(pts) < 2:
        raise ValidationError("Bochner test needs at least two points")
    if len(set(pts)) != len(pts):
        raise ValidationError("Bochner points must be pairwise distinct")
    return np.asarray(pts)


def build_bochner_matrix(phi: CharFn, points) -> np.ndarray:
    """Matrix with entry (l, k) equal to Phi(alpha_k - alpha_l)."""
    pts = _check_points(points)
    diffs = pts[None, :] - pts[:, None]
    mat = np.asarray(phi(diffs), dtype=complex).reshape(diffs.shape)
    asym = np.max(np.abs(mat - mat.conj().T))
    if asym > HERMITICITY_TOL:
        raise ValidationError(f"characteristic function violates Phi(-b) = Phi(b)^* by {asym:.3e}")
    return 0.5 * (mat + mat.conj().T)


def _worst_minor(mat):
    n = mat.shape[0]
    pairs = [((i, j), float(np.linalg.det(mat[np.ix_([i, j], [i, j])]).real)) for i, j in itertools.combinations(range(n), 2)]
    best = min(pairs, key=lambda t: t[1])
    i, j = best[0]
    for k in range(n):
        if k in (i, j):
            continue
        idx = tuple(sorted((i, j, k)))
        det = float(np.linalg.det(mat[np.ix_(idx, idx)]).real)
        if det < best[1]:
            best = (idx, det)
    return best


def certify(phi: CharFn, points, tol: float = DEFAULT_TOL) -> BochnerReport:
    """Eigenvalue test of the Bochner matrix.

    The verdict is ``"nonclassical"`` iff the smallest eigenvalue is below
    ``-tol``; otherwise ``"inconclusive"`` (positive semidefiniteness on
    finitely many points does not prove classicality). The most negative
    2x2 or greedily extended 3x3 principal minor is reported for
    inspection only.
    """
    if not tol > 0:
        raise ValidationError("tol must be > 0")
    mat = build_bochner_matrix(phi, points)
    min_eig = float(np.linalg.eigvalsh(mat)[0])
    verdict = "nonclassical" if min_eig < -tol else "inconclusive"
    return BochnerReport(tuple(complex(p) for p in points), mat, min_eig, verdict, _worst_minor(mat))


SCAN_ROUNDOFF = 1e-12


def scan_pair_radius(
    phi: CharFn, r_min: float, r_max: float, steps: int, tol: float = SCAN_ROUNDOFF
) -> list[tuple[float, float]]:
    """Radii r in [r_min, r_max] where the pair {0, r} gives 1 - |Phi(r)|^2 < -tol.

    ``tol`` only absorbs rounding: a coherent state has |Phi| = 1 exactly,
    and its determinant comes out as +-4e-16 in floating point.
    """
    if not 0 < r_min < r_max:
        raise ValidationError("need 0 < r_min < r_max")
    if steps < 2:
        raise ValidationError("need at least two radii")
    radii = np.linspace(r_min, r_max, steps)
    dets = 1.0 - np.abs(np.asarray(phi(radii.astype(complex)))) ** 2
    return [(float(r), float(d)) for r, d in zip(radii, dets) if d < -tol]
