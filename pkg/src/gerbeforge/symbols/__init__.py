"""Places, valuations, tame symbols and divisors over ``F_p(t)``."""

from .field import FieldElement, FiniteField
from .function_field import (
    Divisor,
    Place,
    RationalFunction,
    ReciprocityReport,
    divisor,
    divisor_from_json,
    ord_at,
    place_from_json,
    random_divisor,
    random_rational_function,
    residue,
    tame_symbol,
    weil_reciprocity,
)
from .picard import (
    NonPrincipalError,
    TorsorCocycle,
    check_torsor_additivity,
    divisor_torsor_cocycle,
    local_equations,
    picard_degree,
    unit_coords,
    unit_system,
)
from .poly import FieldError, Poly, factor, gcd, irreducibles, is_irreducible, monic_polys

__all__ = [
    "Divisor", "FieldElement", "NonPrincipalError", "TorsorCocycle", "check_torsor_additivity", "divisor_torsor_cocycle",
    "local_equations", "picard_degree", "unit_coords", "unit_system", "FieldError", "FiniteField", "Place", "Poly", "RationalFunction",
    "ReciprocityReport", "divisor", "divisor_from_json", "factor", "gcd", "irreducibles",
    "is_irreducible", "monic_polys", "ord_at", "place_from_json", "random_divisor", "random_rational_function",
    "residue", "tame_symbol", "weil_reciprocity",
]
