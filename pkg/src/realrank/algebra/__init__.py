from .polynomial import (Polynomial, VarOrder, RegistryMismatch, lex_compare,
                         parse_polynomial)
from .groebner import (buchberger, reduce, s_polynomial, is_groebner, shape_check,
                       ShapeReport, GroebnerStats)

__all__ = ["Polynomial", "VarOrder", "RegistryMismatch", "lex_compare", "parse_polynomial",
           "buchberger", "reduce", "s_polynomial", "is_groebner", "shape_check",
           "ShapeReport", "GroebnerStats"]
