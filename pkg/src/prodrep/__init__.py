"""Product representations by polynomial values over finite fields."""
__version__ = "0.1.0"

from .errors import ProdRepError
from .ff import Field, FieldSpec, build_field, coset_index, dlog, find_generator
from .poly import Poly, factor, format_poly, parse_poly, power_part, value_set
from .characters import Character, char_sum, count_representations, weil_verify
from .sumsets import ZnSubset, k_fold_sumset, m_bounds, m_exact, m_record
from .products import (
    CandidateSet,
    build_instance,
    coset_construction,
    exact_Fk,
    star_check,
    structure_distance,
)

__all__ = [
    "ProdRepError", "Field", "FieldSpec", "build_field", "coset_index", "dlog",
    "find_generator", "Poly", "factor", "format_poly", "parse_poly", "power_part",
    "value_set", "Character", "char_sum", "count_representations", "weil_verify",
    "ZnSubset", "k_fold_sumset", "m_bounds", "m_exact", "m_record", "CandidateSet",
    "build_instance", "coset_construction", "exact_Fk", "star_check",
    "structure_distance",
]
