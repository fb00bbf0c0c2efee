"""Arithmetic dynamics on the projective line over Q.

Exact rational-map iteration, dynamical Green functions at every place of Q,
canonical heights, equilibrium-measure sampling, and parameter-space
experiments for the quadratic and cubic polynomial families.
"""

from .equilibrium import (PointCloud, backward_cloud, compare_clouds,
                          lyapunov, periodic_cloud, potential, probe_ring)
from .errors import DomainError, InvalidMapError, NumericError, ResourceError
from .families import CubicParam, Per1Param, cubic_green, per1_greens
from .green import GreenValue, green_arch, green_arch_pair, green_padic, green_poly
from .grids import LocusGrid, boundary_box_dimension, locus_grid
from .heights import (HeightValue, PreperiodicityCertificate,
                      canonical_height_adelic, canonical_height_global,
                      is_preperiodic, naive_height, preperiodic_search)
from .mandelbrot import (mandelbrot_green, mandelbrot_param_height,
                         percrit_equidistribution_test, percrit_roots)
from .maps import (PeriodicPoint, RationalMapC, RationalMapQ, critical_points,
                   cycle_multiplier, periodic_points)
from .projective import ProjPointC, ProjPointQ, from_rational, proj_point
from .rationals import factor_integer, padic_valuation, rat_normalize
from .roots import RootSet, poly_roots

__version__ = "0.1.0"

__all__ = [
    "CubicParam", "DomainError", "GreenValue", "HeightValue", "InvalidMapError",
    "LocusGrid", "NumericError", "Per1Param", "PeriodicPoint", "PointCloud",
    "PreperiodicityCertificate", "ProjPointC", "ProjPointQ", "RationalMapC",
    "RationalMapQ", "ResourceError", "RootSet", "backward_cloud",
    "boundary_box_dimension", "canonical_height_adelic",
    "canonical_height_global", "compare_clouds", "critical_points",
    "cubic_green", "cycle_multiplier", "factor_integer", "from_rational",
    "green_arch", "green_arch_pair", "green_padic", "green_poly",
    "is_preperiodic", "locus_grid", "lyapunov", "mandelbrot_green",
    "mandelbrot_param_height", "naive_height", "padic_valuation",
    "per1_greens", "percrit_equidistribution_test", "percrit_roots",
    "periodic_cloud", "periodic_points", "poly_roots", "potential",
    "preperiodic_search", "probe_ring", "proj_point", "rat_normalize",
]
