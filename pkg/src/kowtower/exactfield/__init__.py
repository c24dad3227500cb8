"""Exact arithmetic: Q, Q(i), dense univariate polynomials and the parameter
field Q(i)(H)(I2) built as a tower of univariate fraction fields."""

from .fields import (
    QQ,
    QQi,
    FractionField,
    PoleError,
    RatFunc,
    RealField,
    common_field,
    field_of,
    param_field,
    param_generators,
    param_specialize,
    real_field,
    specialize_poly,
    to_complex,
)
from .gaussian import I, GaussianRational
from .poly import (
    FieldMismatchError,
    Poly,
    is_squarefree,
    poly_arith,
    poly_discriminant,
    poly_gcd,
    poly_xgcd,
    resultant,
)
from .serialize import (
    elem_from_json,
    elem_to_json,
    field_from_name,
    parse_rational,
    poly_from_json,
    poly_to_json,
    rational_to_str,
)

__all__ = [
    "QQ", "QQi", "FractionField", "PoleError", "RatFunc", "RealField",
    "common_field", "field_of", "param_field", "param_generators",
    "param_specialize", "real_field", "specialize_poly", "to_complex",
    "I", "GaussianRational", "FieldMismatchError", "Poly", "is_squarefree",
    "poly_arith", "poly_discriminant", "poly_gcd", "poly_xgcd", "resultant",
    "elem_from_json", "elem_to_json", "field_from_name", "parse_rational",
    "poly_from_json", "poly_to_json", "rational_to_str",
]
