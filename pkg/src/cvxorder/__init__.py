"""Convex-order projections, lattice operations, and weak transport on the line.

Finitely supported probability measures are represented by their atoms; all
transport computations go through left-continuous quantile functions, where
the comonotone coupling makes one-dimensional Wasserstein distances exact
integrals of step functions.  The central objects are the two projections of
a pair (mu, nu): the closest measure below nu in convex order, and the
closest measure above mu, both read off the convex hull of the integrated
quantile difference.
"""

from .errors import (
    BarycenterMismatch,
    EmptyInput,
    InvalidP,
    MalformedRecord,
    MassMismatch,
    NoConvergence,
    NonPositiveWeight,
)
from .hull import (
    PiecewiseLinearFn,
    StepFn,
    antiderivative,
    common_refinement,
    lower_convex_hull,
    lower_hull_indices,
    lp_norm,
    right_derivative,
    step_difference,
)
from .lattice import (
    PotentialFn,
    comb_family,
    lattice_ratio,
    max_convex,
    measure_from_potential,
    min_convex,
    potential,
    sandwich_check,
)
from .measures import (
    DiscreteMeasure,
    GeneralQuantile,
    StepQuantile,
    discretize,
    from_atoms,
    measure_from_arrays,
    measure_from_quantile,
    measure_record,
    parse_measure_record,
    quantile,
)
from .projection import (
    LipschitzReport,
    ProjectionResult,
    equaldist_check,
    is_convex_order,
    lipschitz_audit,
    project_I,
    project_J,
    wasserstein,
)
from .replay import run_replay
from .sampling import (
    mean_preserving_contraction,
    mean_preserving_spread,
    random_measure,
    random_piecewise_linear,
    random_step_fn,
    recentered,
    trial_rng,
)
from .weakot import (
    TransportPlan,
    plan_barycenter_pushforward,
    project_transport_polytope,
    weak_ot_solve,
    weak_ot_value,
)

__version__ = "0.1.0"

__all__ = [
    "BarycenterMismatch",
    "EmptyInput",
    "InvalidP",
    "MalformedRecord",
    "MassMismatch",
    "NoConvergence",
    "NonPositiveWeight",
    "PiecewiseLinearFn",
    "StepFn",
    "antiderivative",
    "common_refinement",
    "lower_convex_hull",
    "lower_hull_indices",
    "lp_norm",
    "right_derivative",
    "step_difference",
    "PotentialFn",
    "comb_family",
    "lattice_ratio",
    "max_convex",
    "measure_from_potential",
    "min_convex",
    "potential",
    "sandwich_check",
    "DiscreteMeasure",
    "GeneralQuantile",
    "StepQuantile",
    "discretize",
    "from_atoms",
    "measure_from_arrays",
    "measure_from_quantile",
    "measure_record",
    "parse_measure_record",
    "quantile",
    "LipschitzReport",
    "ProjectionResult",
    "equaldist_check",
    "is_convex_order",
    "lipschitz_audit",
    "project_I",
    "project_J",
    "wasserstein",
    "run_replay",
    "mean_preserving_contraction",
    "mean_preserving_spread",
    "random_measure",
    "random_piecewise_linear",
    "random_step_fn",
    "recentered",
    "trial_rng",
    "TransportPlan",
    "plan_barycenter_pushforward",
    "project_transport_polytope",
    "weak_ot_solve",
    "weak_ot_value",
    "__version__",
]
