"""Symmetric eigendecomposition, negative-eigenvalue counting, nullity checks.

The decomposition is delegated to LAPACK's symmetric solver (orthogonal
similarity transforms: tridiagonalization followed by implicit-shift
iteration), which is deterministic for a fixed input matrix.  Counting
negatives uses a relative zero tolerance: eigenvalues inside the tolerance
band are reported as uncertain rather than silently classified, since the
torus operator carries a six-dimensional kernel whose truncated eigenvalues
approach zero from above.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .assembly import GalerkinMatrix

__all__ = [
    "SpectrumEstimate",
    "ZERO_TOL_RELATIVE",
    "eigen_symmetric",
    "count_negative",
    "nullity_diagnostic",
]

# Default zero band, relative to ||A||: small enough that the smallest
# genuine negatives seen in practice (a few 1e-2) are never swallowed.
ZERO_TOL_RELATIVE = 1.0e-6
_SYMMETRY_RTOL = 1.0e-12


@dataclass(frozen=True)
class SpectrumEstimate:
    m: int
    eigenvalues: np.ndarray  # ascending
    negative_count: int
    residual_bound: float
    first_positive_six: tuple[float, ...]
    zero_tol: float
    uncertain_count: int
    eigenvectors: np.ndarray | None = None  # columns, same order as eigenvalues

    @property
    def norm(self) -> float:
        return float(max(abs(self.eigenvalues[0]), abs(self.eigenvalues[-1])))

    @property
    def negative_range(self) -> tuple[float, float]:
        if self.negative_count == 0:
            return (0.0, 0.0)
        neg = self.eigenvalues[: self.negative_count]
        return (float(neg[0]), float(neg[-1]))


def _matrix_of(a) -> np.ndarray:
    return a.entries if isinstance(a, GalerkinMatrix) else np.asarray(a, dtype=float)


def eigen_symmetric(a: "GalerkinMatrix | np.ndarray") -> SpectrumEstimate:
    """Full spectrum of a symmetric matrix with a residual certificate.

    Raises ValueError when the input is not symmetric to rounding accuracy.
    """
    mat = _matrix_of(a)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {mat.shape}")
    scale = float(np.max(np.abs(mat))) or 1.0
    asym = float(np.max(np.abs(mat - mat.T)))
    if asym > _SYMMETRY_RTOL * scale:
        raise ValueError(f"matrix is not symmetric: max |A - A^T| = {asym:g}")

    values, vectors = np.linalg.eigh(mat)
    residual = float(np.max(np.linalg.norm(mat @ vectors - vectors * values, axis=0)))
    norm = float(max(abs(values[0]), abs(values[-1]))) or 1.0
    zero_tol = ZERO_TOL_RELATIVE * norm
    negative = int(np.sum(values < -zero_tol))
    uncertain = int(np.sum(np.abs(values) <= zero_tol))
    first_six = tuple(float(v) for v in values[negative + uncertain:][:6])
    return SpectrumEstimate(
        m=mat.shape[0],
        eigenvalues=values,
        negative_count=negative,
        residual_bound=residual,
        first_positive_six=first_six,
        zero_tol=zero_tol,
        uncertain_count=uncertain,
        eigenvectors=vectors,
    )


def count_negative(est: SpectrumEstimate, zero_tol: float | None = None) -> tuple[int, int]:
    """(#eigenvalues below -zero_tol, #eigenvalues inside the zero band)."""
    tol = est.zero_tol if zero_tol is None else zero_tol
    values = est.eigenvalues
    count = int(np.sum(values < -tol))
    uncertain = int(np.sum(np.abs(values) <= tol))
    return count, uncertain


def nullity_diagnostic(est: SpectrumEstimate) -> tuple[float, ...]:
    """The six eigenvalues just above the negative block.

    For a converged truncation these approach zero (the kernel of the
    operator contains the normal parts of the six ambient rigid motions),
    so their size measures truncation quality.
    """
    start = est.negative_count + est.uncertain_count
    if len(est.eigenvalues) < start + 6:
        raise ValueError("spectrum too short for a nullity diagnostic")
    return tuple(float(v) for v in est.eigenvalues[start : start + 6])
