"""Generalized Dedekind sums and eta-type cocycles over real quadratic fields."""

from .field_arith import (FieldData, ModMatrix, NotCoprime, OFElem, divmod_near,
                          ext_gcd, identity, make_field, matrix_S, of_gcd)

__all__ = [
    "FieldData", "ModMatrix", "NotCoprime", "OFElem", "divmod_near",
    "ext_gcd", "identity", "make_field", "matrix_S", "of_gcd",
]
