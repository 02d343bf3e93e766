"""Exact-arithmetic toolkit for graded lattice-point monoids of lattice polytopes."""

from .errors import (
    BudgetExceeded,
    InvalidInput,
    LatgapError,
    NotFoundWithinBounds,
    NotPointed,
    PreconditionViolated,
)
from .exactlin import HRepCone, double_description, fm_eliminate, hnf, integerize_interval_sum
from .polytope import (
    LatticePolytope,
    cone_over,
    dilate,
    ehrhart_polynomial,
    facets,
    points_at_degree,
    product,
)
from .graphs import (
    Graph,
    complete_graph,
    cycle_graph,
    edge_polytope,
    has_two_disjoint_odd_cycles,
    is_unimodular_edge_polytope,
)
from .fibration import FiberSpec, build_fibration, make_pka, make_qab, pka_hrep, validate_fibration
from .monoid import (
    ClosureLedger,
    closure,
    facet_normality,
    gap_vector,
    hilbert_basis,
    hilbert_function,
    is_normal_dilation,
    is_very_ample,
    mu_invariants,
)
from . import oracle

__all__ = [
    "BudgetExceeded",
    "ClosureLedger",
    "FiberSpec",
    "Graph",
    "HRepCone",
    "InvalidInput",
    "LatgapError",
    "LatticePolytope",
    "NotFoundWithinBounds",
    "NotPointed",
    "PreconditionViolated",
    "build_fibration",
    "closure",
    "complete_graph",
    "cone_over",
    "cycle_graph",
    "dilate",
    "double_description",
    "edge_polytope",
    "ehrhart_polynomial",
    "facet_normality",
    "facets",
    "fm_eliminate",
    "gap_vector",
    "has_two_disjoint_odd_cycles",
    "hilbert_basis",
    "hilbert_function",
    "hnf",
    "integerize_interval_sum",
    "is_normal_dilation",
    "is_unimodular_edge_polytope",
    "is_very_ample",
    "make_pka",
    "make_qab",
    "mu_invariants",
    "oracle",
    "pka_hrep",
    "points_at_degree",
    "product",
    "validate_fibration",
]
