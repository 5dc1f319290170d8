"""Blaschke products, disk automorphisms, factorization integrals, cyclic
averages and convex approximation by Blaschke products, on a finite grid of
the unit circle."""

__version__ = "0.1.0"

from .blaschke import (
    BlaschkeProduct,
    ZeroSequence,
    blaschke_condition,
    blaschke_eval,
    example1_zeros,
    example2_zeros,
    frostman_sum,
    separation_products,
    thin_ratio_test,
)
from .boundary import (
    Analytic,
    DyadicCell,
    cell_restrict,
    circle_average,
    cyclic_average,
    dilate,
    dyadic_cells,
    mean_value_check,
    nevanlinna_characteristic,
    radial_limit,
    unit_spread_search,
    weak_star_pair,
)
from .disk import (
    BoundaryFunction,
    BoundaryGrid,
    MoebiusAutomorphism,
    automorphism_compose,
    automorphism_eval,
    pseudo_hyperbolic,
    rotate_boundary,
)
from .factorization import (
    OuterFunction,
    QuotientFunction,
    SingularInner,
    SingularMeasure,
    inner_check,
    outer_eval,
    singular_inner_eval,
)
from .marshall import ConvexCombination, marshall_approximate, marshall_sweep
from .transitivity import (
    WeightedCompositionOp,
    apply_op,
    hull_distance,
    orbit_sample,
    step1_demo,
)
