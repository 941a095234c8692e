"""Relative normalizations of skew ruled surfaces."""

from ._core import (
    DegenerationError,
    DomainError,
    Error,
    JetOrderError,
    ParseError,
    QuadratureError,
    SpecError,
    Surface,
    alignment_classify,
    asymptotic_image,
    classify,
    equiaffine_support,
    field_calculus,
    fixture_names,
    pick_invariant,
    relative_shape,
    run_cli,
    vector_identities,
    verify,
)

__all__ = [
    "DegenerationError",
    "DomainError",
    "Error",
    "JetOrderError",
    "ParseError",
    "QuadratureError",
    "SpecError",
    "Surface",
    "alignment_classify",
    "asymptotic_image",
    "classify",
    "equiaffine_support",
    "field_calculus",
    "fixture_names",
    "pick_invariant",
    "relative_shape",
    "run_cli",
    "vector_identities",
    "verify",
]
