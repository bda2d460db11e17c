"""Assembly of the truncated stability operator A_m = (alpha_i d_ij - b_ij).

b_ij integrates V u_i u_j over a fundamental rectangle of the torus:
[0, n x_period) x [0, y_period) for odd l, and [0, n x_period / 2) x
[0, y_period) for even l (an equivalent fundamental domain on which every
integrand is a finite trigonometric sum, so nothing is lost by the change).

Two independent routes produce each entry:

* the Fourier route expands u_i u_j by product-to-sum identities into at
  most two cosine-cosine modes and reads b_ij off a precomputed coefficient
  table of V (one pass over the grid serves every entry);
* the quadrature route evaluates V u_i u_j pointwise and applies the
  periodic trapezoid rule, which is spectrally accurate here because all
  integrands are smooth and periodic.

V is even in x and y, so sine-coupled coefficients vanish; entries pairing
a sine with a cosine are identically zero and are never computed.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .basis import BasisEnumeration, BasisFunction, enumerate_basis
from .surface import SurfaceParams, build_surface, lattice, potential_extrema, potential_grid

__all__ = [
    "AssemblyConfig",
    "PotentialField",
    "GalerkinMatrix",
    "CoefficientRangeError",
    "NyquistError",
    "sample_potential",
    "cached_sample_potential",
    "b_entry_quadrature",
    "b_entry_fourier",
    "required_waves",
    "assemble",
    "field_cache_key",
    "write_field_cache",
    "read_field_cache",
]

DEFAULT_GRID = 1024
# Sharply peaked potentials (V_max in the thousands) get a denser grid so
# that coefficient aliasing stays below the acceptance tolerances.
ESCALATION_VMAX = 1.0e3
ESCALATED_GRID = 4096
DEFAULT_MAX_WAVE = 64


class CoefficientRangeError(ValueError):
    """A requested Fourier coefficient lies outside the stored table."""


class NyquistError(ValueError):
    """The sampling grid cannot resolve the requested mode frequencies."""


@dataclass(frozen=True)
class AssemblyConfig:
    nx: int | None = None
    ny: int | None = None
    method: str = "fourier"  # 'fourier' | 'quadrature'
    max_wave_x: int | None = None
    max_wave_y: int | None = None
    cache_dir: "str | Path | None" = None

    def grids_for(self, p: SurfaceParams) -> tuple[int, int]:
        if self.nx is not None and self.ny is not None:
            return self.nx, self.ny
        _, v_max = potential_extrema(p)
        auto = ESCALATED_GRID if v_max > ESCALATION_VMAX else DEFAULT_GRID
        return self.nx or auto, self.ny or auto


@dataclass(frozen=True)
class PotentialField:
    """V sampled on the fundamental rectangle plus its cosine coefficients.

    coeffs[P, Q] approximates (1/area) * integral of
    V cos(2 pi P x / width) cos(2 pi Q y / height) over the rectangle,
    indexed by the rectangle's own integer frequencies.
    """

    surface: SurfaceParams
    nx: int
    ny: int
    width: float
    height: float
    coeffs: np.ndarray
    grid: np.ndarray | None = field(default=None, repr=False)

    @property
    def parity(self) -> str:
        return "odd" if self.surface.ell % 2 == 1 else "even"

    @property
    def x(self) -> np.ndarray:
        return np.arange(self.nx) * (self.width / self.nx)

    @property
    def y(self) -> np.ndarray:
        return np.arange(self.ny) * (self.height / self.ny)

    @property
    def area(self) -> float:
        return self.width * self.height

    @property
    def fourier(self) -> dict[tuple[int, int], float]:
        """Coefficient table as a plain mapping (p, q) -> value."""
        pmax, qmax = self.coeffs.shape
        return {(p, q): float(self.coeffs[p, q]) for p in range(pmax) for q in range(qmax)}

    def cos_coefficient(self, wave_x: int, wave_y: int) -> float:
        """(1/area) integral of V cos(2 pi (wave_x x / (n x_period) + wave_y y / y_period)).

        Wave integers are measured against (n x_period, y_period) as in the
        basis enumeration.  The potential has x-period x_period/2 and
        y-period y_period/2 (cn flips sign over a half period and V is even
        in it), so its spectrum lives on wave multiples of (2n, 2); every
        other coefficient is structurally zero and returned as exact 0.0.
        """
        a, b = abs(int(wave_x)), abs(int(wave_y))
        if a % (2 * self.surface.n) != 0 or b % 2 != 0:
            return 0.0
        if self.parity == "even":
            a //= 2
        if a >= self.coeffs.shape[0] or b >= self.coeffs.shape[1]:
            raise CoefficientRangeError(
                f"coefficient ({wave_x}, {wave_y}) outside stored range {self.coeffs.shape}"
            )
        return float(self.coeffs[a, b])

    def sine_channel_max(self, pmax: int | None = None, qmax: int | None = None) -> float:
        """Largest |sine-coupled coefficient|; a symmetry diagnostic, ~0 for even V."""
        if self.grid is None:
            raise ValueError("field was loaded without grid samples")
        pmax = self.coeffs.shape[0] - 1 if pmax is None else pmax
        qmax = self.coeffs.shape[1] - 1 if qmax is None else qmax
        cx, sx = _transform_vectors(self.nx, pmax)
        cy, sy = _transform_vectors(self.ny, qmax)
        scale = 1.0 / (self.nx * self.ny)
        worst = 0.0
        for left in (cx, sx):
            for right in (cy, sy):
                if left is cx and right is cy:
                    continue
                worst = max(worst, float(np.max(np.abs(left.T @ self.grid @ right))) * scale)
        return worst


def _transform_vectors(n: int, kmax: int) -> tuple[np.ndarray, np.ndarray]:
    angles = 2.0 * np.pi * np.outer(np.arange(n), np.arange(kmax + 1)) / n
    return np.cos(angles), np.sin(angles)


def _rectangle(p: SurfaceParams) -> tuple[float, float]:
    width = p.n * p.x_period
    if p.ell % 2 == 0:
        width *= 0.5
    return width, p.y_period


def sample_potential(
    p: SurfaceParams,
    nx: int = DEFAULT_GRID,
    ny: int = DEFAULT_GRID,
    max_wave_x: int = DEFAULT_MAX_WAVE,
    max_wave_y: int = DEFAULT_MAX_WAVE,
) -> PotentialField:
    """Sample V on the fundamental rectangle and tabulate cosine coefficients.

    nx, ny must be powers of two, at least 64.  The stored table covers
    rectangle frequencies up to (max_wave_x, max_wave_y), capped below the
    Nyquist index of the grid.
    """
    for label, n in (("nx", nx), ("ny", ny)):
        if n < 64 or (n & (n - 1)) != 0:
            raise ValueError(f"{label} must be a power of two >= 64, got {n}")
    width, height = _rectangle(p)
    x = np.arange(nx) * (width / nx)
    y = np.arange(ny) * (height / ny)
    grid = potential_grid(p, x, y)
    pmax = min(max_wave_x, nx // 2 - 1)
    qmax = min(max_wave_y, ny // 2 - 1)
    cx, _ = _transform_vectors(nx, pmax)
    cy, _ = _transform_vectors(ny, qmax)
    coeffs = (cx.T @ grid @ cy) / (nx * ny)
    return PotentialField(
        surface=p, nx=nx, ny=ny, width=width, height=height, coeffs=coeffs, grid=grid
    )


def _rect_cycles(fld: PotentialField, ui: BasisFunction, uj: BasisFunction) -> tuple[float, float]:
    half = 0.5 if fld.parity == "even" else 1.0
    return (abs(ui.wave_x) + abs(uj.wave_x)) * half, float(abs(ui.wave_y) + abs(uj.wave_y))


def b_entry_quadrature(fld: PotentialField, ui: BasisFunction, uj: BasisFunction) -> float:
    """b_ij by the periodic trapezoid rule on the field's own grid."""
    if fld.grid is None:
        raise ValueError("field was loaded without grid samples; resample to use quadrature")
    cycles_x, cycles_y = _rect_cycles(fld, ui, uj)
    if cycles_x >= fld.nx / 2 or cycles_y >= fld.ny / 2:
        raise NyquistError(
            f"grid {fld.nx}x{fld.ny} cannot resolve combined mode ({cycles_x}, {cycles_y}) cycles"
        )
    x = fld.x[:, None]
    y = fld.y[None, :]
    integrand = fld.grid * ui.values(x, y) * uj.values(x, y)
    cell = (fld.width / fld.nx) * (fld.height / fld.ny)
    return float(integrand.sum()) * cell


def b_entry_fourier(fld: PotentialField, ui: BasisFunction, uj: BasisFunction) -> float:
    """b_ij from the coefficient table; exact zeros are returned without lookups.

    sin(A)cos(B) expands into pure sines, which integrate to zero against the
    even potential, so mixed-phase pairs vanish identically.  Same-phase
    pairs reduce to the two cosine-cosine modes at the wave sum and wave
    difference.
    """
    if ui.phase != uj.phase:
        return 0.0
    diff = fld.cos_coefficient(ui.wave_x - uj.wave_x, ui.wave_y - uj.wave_y)
    total = fld.cos_coefficient(ui.wave_x + uj.wave_x, ui.wave_y + uj.wave_y)
    if ui.phase == "sin":
        value = 0.5 * (diff - total)
    else:
        value = 0.5 * (diff + total)
    return ui.norm * uj.norm * fld.area * value


@dataclass(frozen=True)
class GalerkinMatrix:
    m: int
    entries: np.ndarray
    surface: SurfaceParams
    provenance: dict

    @property
    def basis(self) -> BasisEnumeration:
        return enumerate_basis(lattice(self.surface), self.m)


def required_waves(p: SurfaceParams, m: int) -> tuple[int, int]:
    """Coefficient-table extent needed to assemble an m x m matrix."""
    basis = enumerate_basis(lattice(p), m)
    need_x = 2 * max(abs(f.wave_x) for f in basis.functions)
    need_y = 2 * max(abs(f.wave_y) for f in basis.functions)
    if p.ell % 2 == 0:
        need_x //= 2
    return need_x, need_y


def assemble(
    p: SurfaceParams,
    m: int,
    cfg: AssemblyConfig | None = None,
    fld: PotentialField | None = None,
) -> GalerkinMatrix:
    """Assemble the symmetric m x m truncation of -Laplacian - V.

    Mixed-phase entries are skipped (exact zeros); every remaining entry is
    computed once and mirrored, so the matrix is symmetric bit for bit.
    A prebuilt field may be passed to reuse one potential pass across calls.
    """
    cfg = cfg or AssemblyConfig()
    if cfg.method not in ("fourier", "quadrature"):
        raise ValueError(f"unknown assembly method {cfg.method!r}")
    basis = enumerate_basis(lattice(p), m)
    if fld is None:
        nx, ny = cfg.grids_for(p)
        need_x = 2 * max(abs(f.wave_x) for f in basis.functions)
        need_y = 2 * max(abs(f.wave_y) for f in basis.functions)
        if p.ell % 2 == 0:
            need_x //= 2
        wave_x = max(cfg.max_wave_x or 0, need_x)
        wave_y = max(cfg.max_wave_y or 0, need_y)
        if cfg.method == "quadrature":
            # quadrature needs the grid samples, which the cache does not keep
            fld = sample_potential(p, nx, ny, wave_x, wave_y)
        else:
            fld = cached_sample_potential(p, nx, ny, cfg.cache_dir, wave_x, wave_y)
    entry = b_entry_fourier if cfg.method == "fourier" else b_entry_quadrature

    a = np.zeros((m, m))
    for i in range(m):
        ui = basis[i]
        for j in range(i, m):
            uj = basis[j]
            if ui.phase != uj.phase:
                continue
            b = entry(fld, ui, uj)
            a[i, j] = -b
            a[j, i] = -b
        a[i, i] += ui.alpha
    provenance = {
        "surface": p.label,
        "H": p.H,
        "theta_degrees": p.theta_degrees,
        "m": m,
        "nx": fld.nx,
        "ny": fld.ny,
        "method": cfg.method,
    }
    return GalerkinMatrix(m=m, entries=a, surface=p, provenance=provenance)


# --- potential-field cache -------------------------------------------------
#
# Binary layout: magic, version, the key (l, n, H, theta, nx, ny), the
# rectangle, the coefficient table shape, then the raw float64 coefficients.
# Raw bytes round-trip bit for bit, so a cache hit reproduces the fourier
# assembly exactly.

_CACHE_MAGIC = b"WNTPOT"
_CACHE_VERSION = 1
_HEADER = struct.Struct("<6sH i i d d i i d d i i")


def field_cache_key(p: SurfaceParams, nx: int, ny: int) -> tuple:
    return (p.ell, p.n, p.H, p.theta_degrees, nx, ny)


def write_field_cache(fld: PotentialField, path: "str | Path") -> None:
    p = fld.surface
    header = _HEADER.pack(
        _CACHE_MAGIC,
        _CACHE_VERSION,
        p.ell,
        p.n,
        p.H,
        p.theta_degrees,
        fld.nx,
        fld.ny,
        fld.width,
        fld.height,
        fld.coeffs.shape[0],
        fld.coeffs.shape[1],
    )
    payload = np.ascontiguousarray(fld.coeffs, dtype="<f8").tobytes()
    Path(path).write_bytes(header + payload)


def read_field_cache(path: "str | Path") -> PotentialField:
    """Load a cached coefficient table; grid samples are not stored."""
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise ValueError(f"{path}: truncated cache file")
    magic, version, ell, n, big_h, theta, nx, ny, width, height, pdim, qdim = _HEADER.unpack(
        raw[: _HEADER.size]
    )
    if magic != _CACHE_MAGIC:
        raise ValueError(f"{path}: not a potential cache file")
    if version != _CACHE_VERSION:
        raise ValueError(f"{path}: unsupported cache version {version}")
    expected = _HEADER.size + 8 * pdim * qdim
    if len(raw) != expected:
        raise ValueError(f"{path}: cache payload size mismatch")
    coeffs = np.frombuffer(raw[_HEADER.size :], dtype="<f8").reshape(pdim, qdim).copy()
    p = build_surface(ell, n, big_h, theta)
    fld = PotentialField(
        surface=p, nx=nx, ny=ny, width=width, height=height, coeffs=coeffs, grid=None
    )
    return fld


def cached_sample_potential(
    p: SurfaceParams,
    nx: int,
    ny: int,
    cache_dir: "str | Path | None",
    max_wave_x: int = DEFAULT_MAX_WAVE,
    max_wave_y: int = DEFAULT_MAX_WAVE,
) -> PotentialField:
    """sample_potential with a directory-backed cache of coefficient tables."""
    if cache_dir is None:
        return sample_potential(p, nx, ny, max_wave_x, max_wave_y)
    key = field_cache_key(p, nx, ny)
    name = "pot_{}_{}_H{}_t{}_{}x{}.wntpot".format(*key)
    path = Path(cache_dir) / name
    if path.exists():
        fld = read_field_cache(path)
        if (
            field_cache_key(fld.surface, fld.nx, fld.ny) == key
            and fld.coeffs.shape[0] > min(max_wave_x, nx // 2 - 1)
            and fld.coeffs.shape[1] > min(max_wave_y, ny // 2 - 1)
        ):
            return fld
    fld = sample_potential(p, nx, ny, max_wave_x, max_wave_y)
    path.parent.mkdir(parents=True, exist_ok=True)
    write_field_cache(fld, path)
    return fld
