"""Exact-arithmetic toolkit for finite graph C*-algebras.

Computes the polytope of invariant measures (graph traces), finite levels
of the boundary path space with their induced measures, trace evaluation
on the spanning *-algebra, and K-theory with trace-induced states -- all
over exact rationals, with certificates instead of numerics.
"""

from .boundary import (
    BoundaryLevel,
    BoundaryReport,
    BudgetExceededError,
    boundary_level,
    boundary_measure,
    shift,
    truncate,
    verify_boundary_identities,
)
from .graph import (
    Bundle,
    ConditionKVerdict,
    Edge,
    Graph,
    GraphValidationError,
    Path,
    SimpleCycleCount,
    VertexClassification,
    classify_vertices,
    concat,
    condition_k,
    cycle_sources,
    enumerate_paths,
    load_graph,
    parse_graph,
    simple_cycles_at,
)
from .ktheory import (
    IntMatrix,
    K0Group,
    K0State,
    K1Group,
    PositivityReport,
    SmithDecomposition,
    eventually_positive,
    k_groups,
    pv_matrix,
    smith_normal_form,
    state_from_trace,
)
from .star import (
    FormalElement,
    GaussianRational,
    adjoint,
    covariance_defect,
    degree_component,
    element_from_json,
    element_to_json,
    generator,
    multiply,
    projection,
    trace_eval,
)
from .traces import (
    ConstraintSystem,
    GaugeCertificate,
    GraphTrace,
    InvarianceReport,
    TraceMinimum,
    certify_gauge_invariance,
    check_invariant,
    constraint_system,
    extreme_traces,
    minimize_over_traces,
)

__version__ = "0.1.0"
