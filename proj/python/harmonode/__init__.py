"""Spherical-harmonic descriptors of truss nodal force demands."""

from ._harmonode import (
    ParseError,
    SchemaError,
    SolverError,
    TrussModel,
    classical_mds,
    complexity_score,
    demand_feature_vector,
    distance_matrix,
    evaluate_design,
    feature_vectors,
    generate,
    kmeans,
    latin_hypercube,
    load_model,
    min_enclosing_ball,
    read_model,
    real_sph_harm,
    size_members,
    solve,
    validate,
)

__all__ = [
    "ParseError",
    "SchemaError",
    "SolverError",
    "TrussModel",
    "classical_mds",
    "complexity_score",
    "demand_feature_vector",
    "distance_matrix",
    "evaluate_design",
    "feature_vectors",
    "generate",
    "kmeans",
    "latin_hypercube",
    "load_model",
    "min_enclosing_ball",
    "read_model",
    "real_sph_harm",
    "size_members",
    "solve",
    "validate",
]
