"""Numerical experiments on exponential frames for balls and ellipsoids.

The package evaluates Fourier transforms of convex-body indicators, dyadic
decay profiles of point sets, Gram spectra of exponential systems,
near-integer distance residuals and pinned distance coverage.
"""
from __future__ import annotations

from ._accel import backend, set_backend, use_backend
from .convex_body import ConvexBody, ball, ellipsoid
from .decay_profile import (DecayProfile, Envelope, annulus_partition, coarea_shell_integral,
                            empirical_cj, empirical_profile, envelope_cj, good_subset,
                            profile_summary)
from .erdos_checker import (ResidualReport, classify, collinearity, general_residuals,
                            residual_one_pair, residual_two_pair)
from .errors import DomainError, ParseError, ResourceError
from .fourier_body import (evaluate, fit_herz_constant, ft_indicator_exact, ft_indicator_quadrature,
                           herz_error_scan, herz_main_term)
from .gram_frames import GramSpectrum, extreme_eigenvalues, gram_matrix, gram_spectrum, riesz_report
from .pinned_coverage import (CoverageReport, GridSet, good_set_coverage_experiment,
                              pinned_distance_coverage, refinement_coverage)
from .pointsets import (PointSet, bessel_zero_line_set, density_estimate, lattice, load_points, perturb,
                        progression_line_set, save_points)
from .special_functions import BesselOrder, bessel_j, bessel_j_zero, bessel_j_zeros

__version__ = "0.1.0"

__all__ = [
    "backend", "set_backend", "use_backend",
    "ConvexBody", "ball", "ellipsoid",
    "DecayProfile", "Envelope", "annulus_partition", "coarea_shell_integral", "empirical_cj",
    "empirical_profile", "envelope_cj", "good_subset", "profile_summary",
    "ResidualReport", "classify", "collinearity", "general_residuals", "residual_one_pair",
    "residual_two_pair",
    "DomainError", "ParseError", "ResourceError",
    "evaluate", "fit_herz_constant", "ft_indicator_exact", "ft_indicator_quadrature",
    "herz_error_scan", "herz_main_term",
    "GramSpectrum", "extreme_eigenvalues", "gram_matrix", "gram_spectrum", "riesz_report",
    "CoverageReport", "GridSet", "good_set_coverage_experiment", "pinned_distance_coverage",
    "refinement_coverage",
    "PointSet", "bessel_zero_line_set", "density_estimate", "lattice", "load_points", "perturb",
    "progression_line_set", "save_points",
    "BesselOrder", "bessel_j", "bessel_j_zero", "bessel_j_zeros",
]
