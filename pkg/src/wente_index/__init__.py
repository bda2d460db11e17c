"""Morse index bounds and sharp Galerkin estimates for symmetric Wente tori.

The library turns a reduced fraction l/n in (1, 2) into the constants of the
corresponding constant-mean-curvature torus, assembles truncations of its
stability operator in the Laplacian eigenbasis of the conformal lattice, and
combines analytic bounds with negative-eigenvalue counts into index reports.
"""

from .elliptic import EllipticModulus, complete_K, jacobi_cn
from .surface import (
    CATALOG,
    THETA_BAR_DEGREES,
    Lattice,
    ParameterError,
    SurfaceParams,
    build_surface,
    catalog_surface,
    lattice,
    load_catalog,
    potential,
    potential_extrema,
)
from .basis import (
    BasisEnumeration,
    BasisFunction,
    enumerate_basis,
    shell_complete_sizes,
    sorted_alpha_stream,
)
from .assembly import (
    AssemblyConfig,
    GalerkinMatrix,
    PotentialField,
    assemble,
    b_entry_fourier,
    b_entry_quadrature,
    sample_potential,
)
from .spectrum import SpectrumEstimate, count_negative, eigen_symmetric, nullity_diagnostic
from .bounds import (
    SUBSPACE_SETS,
    ConsistencyError,
    IndexReport,
    courant_bound,
    full_report,
    greedy_subspace_search,
    potential_sandwich,
    subspace_bound,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "EllipticModulus",
    "complete_K",
    "jacobi_cn",
    "CATALOG",
    "THETA_BAR_DEGREES",
    "Lattice",
    "ParameterError",
    "SurfaceParams",
    "build_surface",
    "catalog_surface",
    "lattice",
    "load_catalog",
    "potential",
    "potential_extrema",
    "BasisEnumeration",
    "BasisFunction",
    "enumerate_basis",
    "shell_complete_sizes",
    "sorted_alpha_stream",
    "AssemblyConfig",
    "GalerkinMatrix",
    "PotentialField",
    "assemble",
    "b_entry_fourier",
    "b_entry_quadrature",
    "sample_potential",
    "SpectrumEstimate",
    "count_negative",
    "eigen_symmetric",
    "nullity_diagnostic",
    "SUBSPACE_SETS",
    "ConsistencyError",
    "IndexReport",
    "courant_bound",
    "full_report",
    "greedy_subspace_search",
    "potential_sandwich",
    "subspace_bound",
]
