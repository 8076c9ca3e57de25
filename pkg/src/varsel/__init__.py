"""Set-valued limits, regularity and integral duality on [0, 1]."""

from .duality import (
    HypothesisError,
    bv_duality,
    bv_exact_sup,
    dirac_certificate,
    duality_report,
    estimate_Ih_conjugate,
    eval_Jhstar,
    int_dom_Ih_membership,
)
from .functions import PiecewiseFunction
from .integrand import NormalIntegrand, domain_map, eval_Ih
from .intervals import IntervalUnion, hausdorff
from .kernels import BACKEND
from .measure import Measure, MeasureError, SignedMeasure, lebesgue, lebesgue_decompose
from .plq import PLQError, PLQFunction
from .setmap import (
    LEFT,
    STANDARD,
    Component,
    PiecewiseSetMap,
    SetMapError,
    Topology,
    check_essential_selection,
    continuous_selection,
    essential_selection_counterexample,
    inner_limit,
    is_fully_lsc,
    is_inner_semicontinuous,
    is_outer_mu_regular,
    is_outer_semicontinuous,
    michael_representation,
    mli_map,
    mu_essential_supremum,
    mu_inner_limit,
    outer_limit,
)

__version__ = "0.1.0"
