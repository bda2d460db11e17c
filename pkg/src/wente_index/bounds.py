"""Index bounds: nodal-domain count, potential sandwich, negative subspaces.

Three independent routes bound the Morse index of W_{l/n}:

* a nodal-domain argument applied to the rotational Jacobi field gives the
  closed-form lower bound 2n-2 (l odd) or n-2 (l even);
* replacing V by its constant extrema sandwiches the operator between two
  shifted Laplacians whose spectra are explicit lattice sums, giving
  mu - 1 <= Ind <= nu;
* a subspace of Laplacian eigenfunctions on which the quadratic form is
  negative definite certifies Ind >= N - 1.

The Galerkin route (assembly + spectrum) sharpens these: the number k of
negative eigenvalues of A_m grows monotonically toward the true count, and
the volume constraint leaves the index as k-1 or k.

SUBSPACE_SETS records, for each catalogued surface that has one, a basis
selection whose restricted operator is negative definite at H = 1/2; these
selections are data (they were found by search), shipped so the certified
lower bounds can be reproduced directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .assembly import AssemblyConfig, assemble, b_entry_fourier, sample_potential
from .basis import count_alpha_below, enumerate_basis, shell_complete_sizes
from .spectrum import count_negative, eigen_symmetric, nullity_diagnostic
from .surface import SurfaceParams, lattice, potential_extrema

__all__ = [
    "ConsistencyError",
    "SandwichBounds",
    "SubspaceVerdict",
    "IndexReport",
    "SUBSPACE_SETS",
    "courant_bound",
    "potential_sandwich",
    "subspace_matrix",
    "subspace_bound",
    "greedy_subspace_search",
    "default_m",
    "full_report",
]

BOUNDARY_TOL = 1e-9


class ConsistencyError(RuntimeError):
    """A computed lower bound exceeded a computed upper bound."""


class SandwichBounds(NamedTuple):
    lower: int  # mu - 1
    upper: int  # nu
    near_boundary: int  # lattice eigenvalues within tolerance of either cutoff


class SubspaceVerdict(NamedTuple):
    negative_definite: bool
    implied_lower: int
    max_eigenvalue: float
    matrix: np.ndarray
    indices: tuple[int, ...]


# Basis selections certifying Ind >= N - 1 (negative definite at H = 1/2).
SUBSPACE_SETS: dict[str, tuple[int, ...]] = {
    "3/2": (1, 2, 3, 4, 5, 7, 8, 9, 17),
    "4/3": (*range(1, 10), 13),
    "5/3": (1, 2, 3, 5, 6, 7, 8, 9, 15, 16, 17, 29),
    "5/4": (*range(1, 24), *range(27, 36), 45),
    "7/4": (1, 2, 3, 5, 6, 7, 8, 9, 14, 15, 16, 17, 27, 28, 29, 45),
    "6/5": (*range(1, 20), 29),
    "7/5": (*range(1, 12), *range(14, 20), *range(26, 32), 43, 44, 45, 65),
    "8/5": (*range(1, 8), 10, 11, 12, 13, 29),
    "9/5": (1, 2, 3, 5, 6, 7, 8, 9, 14, 15, 16, 17, 26, 27, 28, 29, 43, 44, 45, 65),
    "8/7": (1, 2, 3, 4, 5, 10, 11, 12, 13),
    "10/7": (1, 2, 3, 4, 5, 10, 11, 12, 13),
    "12/7": (1, 2, 3, 4, 5, 10, 11, 12, 13),
}


def courant_bound(ell: int, n: int) -> int:
    """Nodal-domain lower bound for the index: 2n-2 (l odd) or n-2 (l even)."""
    return 2 * n - 2 if ell % 2 == 1 else n - 2


def _padded_size(p: SurfaceParams, m: int) -> int:
    """Next shell-complete size >= m; keeps index-bound enumerations warning-free."""
    parity = "odd" if p.ell % 2 == 1 else "even"
    sizes = shell_complete_sizes(parity, 4 * m + 8)
    return next(s for s in sizes if s >= m)


def potential_sandwich(p: SurfaceParams) -> SandwichBounds:
    """(mu - 1, nu): lattice eigenvalues strictly below V_min resp. V_max.

    Comparisons are strict; eigenvalues within BOUNDARY_TOL of either cutoff
    are tallied in near_boundary so reports can flag the ambiguity.
    """
    lat = lattice(p)
    v_min, v_max = potential_extrema(p)
    mu, near_min = count_alpha_below(lat, v_min, BOUNDARY_TOL)
    nu, near_max = count_alpha_below(lat, v_max, BOUNDARY_TOL)
    return SandwichBounds(lower=mu - 1, upper=nu, near_boundary=near_min + near_max)


def subspace_matrix(
    p: SurfaceParams, indices: Sequence[int], cfg: AssemblyConfig | None = None
) -> np.ndarray:
    """Restriction of the stability form to the selected basis functions."""
    indices = tuple(int(i) for i in indices)
    if not indices:
        raise ValueError("at least one basis index is required")
    if len(set(indices)) != len(indices):
        raise ValueError("basis indices must be distinct")
    if min(indices) < 1:
        raise ValueError("basis indices are 1-based")
    cfg = cfg or AssemblyConfig()
    basis = enumerate_basis(lattice(p), _padded_size(p, max(indices)))
    chosen = [basis[i - 1] for i in indices]
    nx, ny = cfg.grids_for(p)
    need_x = 2 * max(abs(f.wave_x) for f in chosen)
    need_y = 2 * max(abs(f.wave_y) for f in chosen)
    if p.ell % 2 == 0:
        need_x //= 2
    fld = sample_potential(p, nx, ny, max_wave_x=need_x, max_wave_y=need_y)
    n_sub = len(chosen)
    mat = np.zeros((n_sub, n_sub))
    for r in range(n_sub):
        for s in range(r, n_sub):
            if chosen[r].phase != chosen[s].phase:
                continue
            b = b_entry_fourier(fld, chosen[r], chosen[s])
            mat[r, s] = -b
            mat[s, r] = -b
        mat[r, r] += chosen[r].alpha
    return mat


def subspace_bound(
    p: SurfaceParams, indices: Sequence[int], cfg: AssemblyConfig | None = None
) -> SubspaceVerdict:
    """Check negative definiteness of the restricted form on the given span.

    A negative definite N-dimensional restriction implies Ind >= N - 1 (one
    dimension can be lost to the volume constraint).
    """
    mat = subspace_matrix(p, indices, cfg)
    top = float(eigen_symmetric(mat).eigenvalues[-1])
    definite = top < 0.0
    return SubspaceVerdict(
        negative_definite=definite,
        implied_lower=len(mat) - 1 if definite else 0,
        max_eigenvalue=top,
        matrix=mat,
        indices=tuple(int(i) for i in indices),
    )


def greedy_subspace_search(
    p: SurfaceParams, pool_size: int, cfg: AssemblyConfig | None = None
) -> tuple[tuple[int, ...], int]:
    """Grow a negative definite index set greedily from the first pool_size functions.

    At each step the candidate whose inclusion leaves the largest eigenvalue
    most negative is added; ties break toward the smaller basis index, so
    the search is deterministic.
    """
    if pool_size < 1:
        raise ValueError("pool_size must be at least 1")
    cfg = cfg or AssemblyConfig()
    full = assemble(p, _padded_size(p, pool_size), cfg).entries[:pool_size, :pool_size]
    chosen: list[int] = []
    remaining = list(range(pool_size))
    while remaining:
        best_pos = None
        best_top = None
        for pos in remaining:
            trial = chosen + [pos]
            sub = full[np.ix_(trial, trial)]
            top = float(np.linalg.eigvalsh(sub)[-1])
            if top < 0.0 and (best_top is None or top < best_top):
                best_top = top
                best_pos = pos
        if best_pos is None:
            break
        chosen.append(best_pos)
        remaining.remove(best_pos)
    indices = tuple(sorted(pos + 1 for pos in chosen))
    implied = len(indices) - 1 if indices else 0
    return indices, implied


def default_m(p: SurfaceParams, at_least: int = 81) -> int:
    """Smallest shell-complete basis size >= at_least for the surface parity."""
    parity = "odd" if p.ell % 2 == 1 else "even"
    size = at_least
    while True:
        sizes = shell_complete_sizes(parity, size)
        if sizes and sizes[-1] >= at_least:
            return next(s for s in sizes if s >= at_least)
        size *= 2


@dataclass(frozen=True)
class IndexReport:
    """Every bound for one surface, plus the Galerkin estimate at size m."""

    surface: str
    ell: int
    n: int
    H: float
    theta_degrees: float
    courant_lower: int
    sandwich_lower: int
    sandwich_upper: int
    subspace_lower: int | None
    galerkin_k: int
    index_estimate: tuple[int, int]
    m_used: int
    negative_range: tuple[float, float]
    first_positive_six: tuple[float, float]
    uncertain_count: int
    residual_bound: float
    zero_tol: float
    notes: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "surface": self.surface,
            "ell": self.ell,
            "n": self.n,
            "H": self.H,
            "theta_degrees": self.theta_degrees,
            "courant_lower": self.courant_lower,
            "sandwich_lower": self.sandwich_lower,
            "sandwich_upper": self.sandwich_upper,
            "subspace_lower": self.subspace_lower,
            "galerkin_k": self.galerkin_k,
            "index_estimate": list(self.index_estimate),
            "m_used": self.m_used,
            "negative_range": list(self.negative_range),
            "first_positive_six": list(self.first_positive_six),
            "uncertain_count": self.uncertain_count,
            "residual_bound": self.residual_bound,
            "zero_tol": self.zero_tol,
            "notes": list(self.notes),
        }


def full_report(
    p: SurfaceParams,
    m: int | None = None,
    cfg: AssemblyConfig | None = None,
    zero_tol: float | None = None,
    subspace_indices: Sequence[int] | None = None,
) -> IndexReport:
    """Run every bound plus the Galerkin pipeline and cross-check consistency.

    subspace_indices defaults to the shipped certified set for the surface
    when one exists.  Inconsistent bounds raise ConsistencyError: they can
    only come from a numerical fault, never from the mathematics.
    """
    m = m or default_m(p)
    notes: list[str] = []

    courant = courant_bound(p.ell, p.n)
    sandwich = potential_sandwich(p)
    if sandwich.near_boundary:
        notes.append(
            f"{sandwich.near_boundary} lattice eigenvalue(s) within {BOUNDARY_TOL} of a potential cutoff"
        )

    if subspace_indices is None:
        subspace_indices = SUBSPACE_SETS.get(p.label)
    subspace_lower: int | None = None
    if subspace_indices is not None:
        verdict = subspace_bound(p, subspace_indices, cfg)
        if verdict.negative_definite:
            subspace_lower = verdict.implied_lower
        else:
            notes.append("provided subspace is not negative definite; no bound taken from it")

    matrix = assemble(p, m, cfg)
    est = eigen_symmetric(matrix)
    if zero_tol is not None:
        k, uncertain = count_negative(est, zero_tol)
    else:
        k, uncertain = est.negative_count, est.uncertain_count
        zero_tol = est.zero_tol
    if uncertain:
        notes.append(f"{uncertain} eigenvalue(s) within zero tolerance {zero_tol:g}; count is ambiguous")
    best_lower = max(
        [courant, sandwich.lower] + ([subspace_lower] if subspace_lower is not None else [])
    )
    if best_lower > k:
        # k grows monotonically with m, so an analytic bound above it only
        # means the truncation is not yet converged.
        notes.append(f"analytic lower bound {best_lower} exceeds Galerkin count at m={m}; increase m")
    neg_range = est.negative_range
    try:
        six = nullity_diagnostic(est)
    except ValueError:
        # the truncation is too small to show six values above the block
        tail = est.eigenvalues[k + uncertain :]
        six = tuple(float(v) for v in tail) or (float("nan"), float("nan"))
        notes.append(f"only {len(tail)} eigenvalue(s) above the negative block at m={m}")

    report = IndexReport(
        surface=p.label,
        ell=p.ell,
        n=p.n,
        H=p.H,
        theta_degrees=p.theta_degrees,
        courant_lower=courant,
        sandwich_lower=sandwich.lower,
        sandwich_upper=sandwich.upper,
        subspace_lower=subspace_lower,
        galerkin_k=k,
        index_estimate=(k - 1, k),
        m_used=m,
        negative_range=neg_range,
        first_positive_six=(six[0], six[-1]),
        uncertain_count=uncertain,
        residual_bound=est.residual_bound,
        zero_tol=zero_tol,
        notes=tuple(notes),
    )
    _check_consistency(report)
    return report


def _check_consistency(r: IndexReport) -> None:
    lowers = [r.courant_lower, r.sandwich_lower]
    if r.subspace_lower is not None:
        lowers.append(r.subspace_lower)
    best_lower = max(lowers)
    if best_lower > r.sandwich_upper:
        raise ConsistencyError(
            f"{r.surface}: lower bound {best_lower} exceeds upper bound {r.sandwich_upper}"
        )
    if r.index_estimate[1] > r.sandwich_upper:
        raise ConsistencyError(
            f"{r.surface}: Galerkin count {r.index_estimate[1]} exceeds upper bound {r.sandwich_upper}"
        )
    if r.index_estimate[0] > r.sandwich_upper:
        raise ConsistencyError(f"{r.surface}: estimate exceeds sandwich upper bound")
