"""Exact and floating matrix spans, forms and serialization"""
from src.linalg.forms import GramForm
from src.linalg.scalar import Mat, ScalarMode, as_exact, as_float, convert
from src.linalg.subspace import (
    Complement,
    Subspace,
    echelon,
    from_basis,
    intersect,
    is_direct,
    is_subspace,
    orth_complement,
    project,
    span_equal,
    span_reduce,
    sum_spaces,
    zero_space,
)
