"""Exact enumeration of lattice paths that stay left of a right boundary.

Paths use a step set S of weakly increasing steps (rook, bishop, spider and
explicit steps, possibly weighted) and must keep every node (x, i) strictly
left of s_i.  The package counts them by dynamic programming, computes their
generating functions from subdiagonal series, expands closed forms and
quadratic equations as exact power series, and estimates growth constants.
"""

from .asymptotics import (
    AsymptoticEstimate,
    amplitude,
    asymptotic_report,
    coefficients_from_quadratic,
    dominant_singularity,
    ratio_estimate,
    singularity_estimate,
)
from .enumerate import (
    BijectionReport,
    count_bounded,
    count_unrestricted,
    decompose,
    enumerate_paths,
    recompose,
    verify_corollary_2_2,
    verify_d_identity,
    verify_lemma_2_1,
    verify_lemma_2_5,
)
from .genfun import (
    DiagonalFamily,
    FamilySpec,
    KernelData,
    boundary_2i1_identity,
    catalan_gf_all_horizontal,
    catalan_gf_unit_horizontal,
    closed_form,
    diagonals,
    kernel_quantities,
    quadratic_for,
    verify_quadratic,
    weighted_catalan_gf,
)
from .rings import WeightRing
from .series import LaurentSeries, QuadraticGF, TruncSeries, newton_quadratic_branch, sqrt_series
from .steps import Boundary, DSLParseError, PreconditionFailed, Step, StepSet, bishop_series, slope_condition

__version__ = "0.1.0"
