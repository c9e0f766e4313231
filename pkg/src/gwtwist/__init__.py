"""Exact genus-zero curve-count engine for split bundles over products of
projective spaces: hypergeometric series, change-of-variables solver,
invariant extraction, and an independent fixed-point oracle."""

from .errors import (
    DegreeOutOfScope,
    EngineError,
    Infeasible,
    NonInvertible,
    NotNormalized,
    SpaceMismatch,
    StructureViolation,
    TruncationMismatch,
    Unclassifiable,
    Unsupported,
    WeightCollision,
)
from .invariants import (
    DescendantTable,
    SerreFactorSolution,
    SerrePair,
    aspinwall_morrison,
    extract_descendants,
    n_numbers,
    normalized_series,
    serre_dual_pair,
    solve_serre_factor,
)
from .localization import (
    FixedGraph,
    TorusWeights,
    draw_weights,
    enumerate_graphs,
    localized_invariant,
    oracle_n_value,
)
from .mirror import (
    MirrorMap,
    NormalForm,
    apply_transform,
    normal_form,
    solve_mirror_map,
    z_closed_form,
    z_from_log,
)
from .ring import (
    AmbientSpace,
    BundleSpec,
    CohClass,
    euler_class,
    lift,
    ring_mul,
)
from .series import (
    HbarLaurent,
    QSeries,
    ScalarQSeries,
    default_floor,
    hl_invert,
    hl_mul,
    invert_substitution,
    qs_exp,
    qs_log,
    qs_mul,
    qs_substitute,
    qseries_from_obj,
    qseries_to_obj,
)
from .twist import (
    CONCAVE,
    CONVEX,
    GeometrySpec,
    TheoremReport,
    check_conditions,
    classify,
    geometry_from_obj,
    geometry_to_obj,
    h_factor,
    i_function,
    j_ambient,
)

__all__ = [
    "AmbientSpace",
    "BundleSpec",
    "CohClass",
    "CONCAVE",
    "CONVEX",
    "DegreeOutOfScope",
    "DescendantTable",
    "EngineError",
    "FixedGraph",
    "GeometrySpec",
    "HbarLaurent",
    "Infeasible",
    "MirrorMap",
    "NonInvertible",
    "NormalForm",
    "NotNormalized",
    "QSeries",
    "ScalarQSeries",
    "SerreFactorSolution",
    "SerrePair",
    "SpaceMismatch",
    "StructureViolation",
    "TheoremReport",
    "TorusWeights",
    "TruncationMismatch",
    "Unclassifiable",
    "Unsupported",
    "WeightCollision",
    "apply_transform",
    "aspinwall_morrison",
    "check_conditions",
    "classify",
    "default_floor",
    "draw_weights",
    "enumerate_graphs",
    "euler_class",
    "extract_descendants",
    "geometry_from_obj",
    "geometry_to_obj",
    "h_factor",
    "hl_invert",
    "hl_mul",
    "i_function",
    "invert_substitution",
    "j_ambient",
    "lift",
    "localized_invariant",
    "n_numbers",
    "normal_form",
    "normalized_series",
    "oracle_n_value",
    "qs_exp",
    "qs_log",
    "qs_mul",
    "qs_substitute",
    "qseries_from_obj",
    "qseries_to_obj",
    "ring_mul",
    "serre_dual_pair",
    "solve_mirror_map",
    "solve_serre_factor",
    "z_closed_form",
    "z_from_log",
]
