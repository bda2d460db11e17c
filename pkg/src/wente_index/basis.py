"""Laplacian eigenfunctions on the flat torus, in a fixed enumeration order.

For a lattice spanned by (a1, a2), (b1, b2) the eigenfunctions of -Laplacian
are sines and cosines of

    (2 pi / D) * ((m2 b2 - m1 a2) x + (m1 a1 - m2 b1) y),   D = a1 b2 - a2 b1,

over integer mode pairs (m1, m2), with eigenvalue the squared length of that
frequency vector.  Only one representative of each pair {(m1, m2), (-m1, -m2)}
is kept, the constant carries only the cosine phase, and every other mode
contributes a sine and a cosine, sine first.

The enumeration walks L1 shells of the integer wave pair (a, b) defined by
writing the angle as 2 pi (a x / W + b y / h) against the fundamental
rectangle widths W = a1 (odd parity) or 2 a1 (even parity) and h = b2:

    odd parity:   shells a + |b| = s,      s = 0, 1, 2, ...
    even parity:  shells a + |b| = 2 s,    s = 0, 1, 2, ...  (a + b is even)

inside a shell a descends, positive b precedes negative b, and the boundary
mode a = 0 is taken with positive b only.  The positive-sign convention on
that boundary is extrapolated past the explicitly tabulated low shells for
even parity; it cannot change any eigenvalue, only the sign of a basis
vector.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .surface import Lattice

__all__ = [
    "BasisFunction",
    "BasisEnumeration",
    "enumerate_basis",
    "sorted_alpha_stream",
    "count_alpha_below",
    "shell_complete_size",
    "shell_complete_sizes",
    "is_shell_complete",
]

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class BasisFunction:
    """One Laplacian eigenfunction: norm * phase(freq_x * x + freq_y * y)."""

    index: int
    m1: int
    m2: int
    phase: str  # 'sin' | 'cos'
    freq_x: float
    freq_y: float
    norm: float
    alpha: float
    wave_x: int  # integer frequency against the rectangle width n*x_period
    wave_y: int  # integer frequency against the rectangle height y_period

    def values(self, x, y):
        """Evaluate on broadcastable coordinates."""
        arg = self.freq_x * np.asarray(x, dtype=float) + self.freq_y * np.asarray(y, dtype=float)
        return self.norm * (np.sin(arg) if self.phase == "sin" else np.cos(arg))


@dataclass(frozen=True)
class BasisEnumeration:
    lattice: Lattice
    functions: tuple[BasisFunction, ...]

    def __len__(self) -> int:
        return len(self.functions)

    def __getitem__(self, i: int) -> BasisFunction:
        return self.functions[i]


def shell_complete_size(parity: str, shells: int) -> int:
    """Basis size containing exactly `shells` full shells (shells >= 1)."""
    if shells < 1:
        raise ValueError("need at least one shell")
    if parity == "odd":
        return 2 * shells * shells - 2 * shells + 1
    return 4 * shells * shells - 4 * shells + 1


def shell_complete_sizes(parity: str, max_size: int) -> list[int]:
    """All shell-complete sizes up to max_size, ascending."""
    sizes = []
    shells = 1
    while shell_complete_size(parity, shells) <= max_size:
        sizes.append(shell_complete_size(parity, shells))
        shells += 1
    return sizes


def is_shell_complete(parity: str, m: int) -> bool:
    return m in shell_complete_sizes(parity, m)


def _shell_waves(parity: str, shell: int) -> list[tuple[int, int]]:
    """Wave pairs (a, b) of one shell, in enumeration order."""
    if shell == 0:
        return [(0, 0)]
    radius = shell if parity == "odd" else 2 * shell
    pairs: list[tuple[int, int]] = []
    for a in range(radius, -1, -1):
        b = radius - a
        if b == 0:
            pairs.append((a, 0))
        elif a > 0:
            pairs.extend([(a, b), (a, -b)])
        else:
            pairs.append((0, radius))
    return pairs


def _mode_from_wave(parity: str, a: int, b: int) -> tuple[int, int]:
    """Recover the lattice mode pair (m1, m2) from the wave pair (a, b)."""
    if parity == "odd":
        return b, a
    return b, (a + b) // 2


def _frequency(lat: Lattice, m1: int, m2: int) -> tuple[float, float, float]:
    """(freq_x, freq_y, alpha) of mode (m1, m2) from the general formula."""
    d = lat.cell_area
    fx = TWO_PI * (m2 * lat.b2 - m1 * lat.a2) / d
    fy = TWO_PI * (m1 * lat.a1 - m2 * lat.b1) / d
    return fx, fy, fx * fx + fy * fy


def enumerate_basis(lat: Lattice, m: int) -> BasisEnumeration:
    """First m eigenfunctions in enumeration order.

    A warning is issued when m cuts a shell in half: the span is then not
    symmetry-complete, which is harmless for the monotone eigenvalue bounds
    but makes results depend on the within-shell ordering.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    if not is_shell_complete(lat.parity, m):
        warnings.warn(f"basis size {m} does not complete a shell ({lat.parity} parity)", stacklevel=2)
    area = abs(lat.cell_area)
    norm_const = math.sqrt(1.0 / area)
    norm_mode = math.sqrt(2.0 / area)

    functions: list[BasisFunction] = []
    shell = 0
    while len(functions) < m:
        for a, b in _shell_waves(lat.parity, shell):
            m1, m2 = _mode_from_wave(lat.parity, a, b)
            fx, fy, alpha = _frequency(lat, m1, m2)
            if (a, b) == (0, 0):
                phases = ("cos",)
                norm = norm_const
            else:
                phases = ("sin", "cos")
                norm = norm_mode
            for phase in phases:
                functions.append(
                    BasisFunction(
                        index=len(functions) + 1,
                        m1=m1,
                        m2=m2,
                        phase=phase,
                        freq_x=fx,
                        freq_y=fy,
                        norm=norm,
                        alpha=alpha,
                        wave_x=a,
                        wave_y=b,
                    )
                )
        shell += 1
    return BasisEnumeration(lattice=lat, functions=tuple(functions[:m]))


def _mode_radius(lat: Lattice, limit: float) -> int:
    """Box radius in (m1, m2) guaranteed to contain every alpha < limit."""
    mat = np.array([[-lat.a2, lat.b2], [lat.a1, -lat.b1]])
    sigma_min = np.linalg.svd(mat, compute_uv=False)[-1]
    return int(math.sqrt(limit) * abs(lat.cell_area) / (TWO_PI * sigma_min)) + 1


def sorted_alpha_stream(lat: Lattice, limit: float) -> np.ndarray:
    """Every Laplacian eigenvalue < limit, one entry per eigenfunction, ascending.

    The enumeration box is derived from the smallest singular value of the
    frequency map, so no mode below the limit can be missed.  Comparison
    with the limit is strict.
    """
    if limit <= 0.0:
        return np.empty(0)
    r = _mode_radius(lat, limit)
    m1, m2 = np.meshgrid(np.arange(-r, r + 1), np.arange(0, r + 1), indexing="ij")
    keep = (m2 > 0) | ((m2 == 0) & (m1 > 0))
    m1, m2 = m1[keep], m2[keep]
    d = lat.cell_area
    fx = TWO_PI * (m2 * lat.b2 - m1 * lat.a2) / d
    fy = TWO_PI * (m1 * lat.a1 - m2 * lat.b1) / d
    alpha = fx * fx + fy * fy
    alpha = alpha[alpha < limit]
    # sine and cosine share each mode; the constant appears once.
    stream = np.concatenate([[0.0], np.repeat(np.sort(alpha), 2)])
    return stream


def count_alpha_below(lat: Lattice, limit: float, boundary_tol: float = 1e-9) -> tuple[int, int]:
    """(#eigenvalues strictly below limit, #eigenvalues within boundary_tol of it).

    The second count flags comparisons too close to call at floating point
    accuracy; callers surface it instead of silently resolving the tie.
    """
    stream = sorted_alpha_stream(lat, limit + 2.0 * boundary_tol + 1e-300)
    below = int(np.sum(stream < limit))
    near = int(np.sum(np.abs(stream - limit) <= boundary_tol))
    return below, near
