"""strongnil: exact analysis of strongly nilpotent polynomial matrices.

The package computes regular and strong nilpotency indices of matrices of
multivariate polynomials over the exact rationals (and dual numbers),
produces and verifies linear-triangularization certificates, analyzes
polynomial maps (Jacobians, quasi-translations, rank-one Keller maps), and
carries a small noncommutative (free-algebra) toolkit for the homogeneous
index correspondence.  Everything is exact; there is no floating point.
"""

from .freealg import (
    CounterexampleReport,
    FreePoly,
    FreePolyMatrix,
    HomogeneousIndexReport,
    counterexample_matrix,
    nc_counterexample_report,
    nc_fresh_tuple_product,
    nc_homogeneous_index_theorem_check,
    nc_mat_mul,
    nc_nilpotency_index,
    nc_strong_nilpotency_index,
    parse_free,
)
from .linalg import (
    QMatrix,
    SingularMatrixError,
    block_diagonal,
    complete_basis,
    invert,
    kernel_basis,
    poly_det,
    poly_rank,
)
from .maps import (
    EquivalenceSuiteReport,
    InternalInconsistencyError,
    MapAnalysisReport,
    PolyMap,
    PreconditionError,
    QTIndex2Report,
    Rank1Report,
    analyze_map,
    compose,
    conjugate_map,
    equivalence_suite,
    equivalent_statement_holds,
    identity_map,
    is_quasi_translation,
    jacobian,
    map_add,
    map_sub,
    qt_index2_suite,
    rank1_analysis,
    rank_or_degree_one_check,
)
from .parser import ParseError, parse_poly
from .poly import (
    MONOMIAL_ONE,
    NEG_INFINITY,
    Monomial,
    Polynomial,
    TermLimitError,
    exact_div,
    get_term_limit,
    set_term_limit,
)
from .polymat import (
    PolyMatrix,
    coefficient_matrices,
    conjugate,
    constant_column_kernel,
    fresh_tuple_product,
    has_strict_block_lower_shape,
    mat_mul,
    nilpotency_index,
    rename_to_tuple,
    trace,
)
from .rings import QQ, QQ_EPS, DualScalar, Ring, Scalar
from .strong import (
    IndexBoundsReport,
    NotStronglyNilpotentError,
    ProductWitness,
    StageWitness,
    StrongNilpotencyVerdict,
    TriangularizationCertificate,
    index_bounds_report,
    pair_trace_obstruction,
    strong_index_direct,
    triangularize,
    verify_certificate,
)
from .variables import VarId, parse_var_name, tvar, xvar, xvars, yvar

__version__ = "0.1.0"
