"""Tests for exact/float spans, complements and matrix payloads"""
import os
import sys
from fractions import Fraction

import numpy as np
import pytest

# Add project root to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.linalg.forms import GramForm  # noqa: E402
from src.linalg.scalar import ScalarMode, as_exact, as_float, convert, is_zero, to_fraction  # noqa: E402
from src.linalg.serialization import MatrixPayload, matrix_from_payload, matrix_to_payload  # noqa: E402
from src.linalg.subspace import (  # noqa: E402
    echelon,
    from_basis,
    intersect,
    is_direct,
    orth_complement,
    project,
    span_equal,
    span_reduce,
    sum_spaces,
    zero_space,
)
from src.utils.error_handler import ModeMixError, ShapeMismatchError, SubspaceError  # noqa: E402


def e(i, j, n=3, mode=ScalarMode.EXACT):
    out = np.zeros((n, n), dtype=int)
    out[i, j] = 1
    return convert(out, mode)


class TestScalars:
    def test_to_fraction_accepts_exact_inputs(self):
        assert to_fraction(3) == Fraction(3)
        assert to_fraction("2/5") == Fraction(2, 5)

    def test_to_fraction_rejects_floats(self):
        with pytest.raises(ModeMixError):
            to_fraction(0.5)

    def test_exact_float_roundtrip_values(self):
        x = as_exact([[1, "1/3"], [0, -2]])
        assert x[0, 1] == Fraction(1, 3)
        assert np.allclose(as_float(x), [[1, 1 / 3], [0, -2]])

    def test_is_zero_exact(self):
        assert is_zero(as_exact([[0, 0]]))
        assert not is_zero(as_exact([[0, "1/1000000000"]]))


class TestSpans:
    def test_rank_of_dependent_family(self):
        a, b = e(0, 1), e(1, 2)
        space = span_reduce([a, b, a + b])
        assert space.dim == 2
        assert space.mode == ScalarMode.EXACT

    def test_float_rank_uses_relative_cutoff(self):
        a = e(0, 1, mode=ScalarMode.FLOAT)
        b = a + 1e-13 * e(1, 0, mode=ScalarMode.FLOAT)
        assert span_reduce([a, b]).dim == 1

    def test_from_basis_rejects_dependent_family(self):
        with pytest.raises(SubspaceError):
            from_basis([e(0, 1), e(0, 1) * 2])

    def test_mixed_modes_raise(self):
        with pytest.raises(ModeMixError):
            span_reduce([e(0, 1), e(1, 0, mode=ScalarMode.FLOAT)])

    def test_shape_mismatch_raises(self):
        with pytest.raises(ShapeMismatchError):
            span_reduce([e(0, 1), e(0, 1, n=4)])

    def test_intersection_and_sum(self):
        a = from_basis([e(0, 1), e(1, 2)])
        b = from_basis([e(1, 2), e(2, 0)])
        cap = intersect(a, b)
        assert cap.dim == 1
        assert cap.contains(e(1, 2))
        assert sum_spaces(a, b).dim == 3
        assert not is_direct(a, b)

    def test_intersection_with_zero_space(self):
        a = from_basis([e(0, 1)])
        assert intersect(a, zero_space((3, 3), ScalarMode.EXACT)).dim == 0

    def test_span_equal_ignores_basis_choice(self):
        a = from_basis([e(0, 1), e(1, 0)])
        b = from_basis([e(0, 1) + e(1, 0), e(0, 1) - e(1, 0)])
        assert span_equal(a, b)

    def test_coordinates_outside_span_raise(self):
        a = from_basis([e(0, 1)])
        with pytest.raises(SubspaceError):
            a.coordinates(e(1, 0))

    def test_echelon_is_deterministic(self):
        a = from_basis([e(0, 1) + e(1, 0), e(0, 1) - e(1, 0)])
        reduced = echelon(a)
        assert span_equal(reduced, a)
        assert all(isinstance(v, Fraction) for v in reduced.basis[0].flat)


class TestComplements:
    def test_orthogonal_complement_under_trace_form(self):
        full = from_basis([e(0, 0), e(1, 1), e(0, 1)])
        gram = np.array([[1, 0, 0], [0, 2, 0], [0, 0, 1]], dtype=object)
        form = GramForm(full, as_exact(gram))
        sub = from_basis([e(0, 0) + e(1, 1)])
        comp = orth_complement(sub, full, form)
        assert comp.nondegenerate
        assert comp.space.dim == 2
        x = comp.space.basis[0]
        assert form(x, sub.basis[0]) == 0

    def test_degenerate_form_is_flagged(self):
        full = from_basis([e(0, 0), e(1, 1)])
        form = GramForm(full, as_exact([[0, 0], [0, 1]]))
        comp = orth_complement(from_basis([e(0, 0)]), full, form)
        assert not comp.nondegenerate

    def test_projection_splits_sum(self):
        onto = from_basis([e(0, 1)])
        along = from_basis([e(1, 0)])
        x = e(0, 1) * 3 + e(1, 0) * Fraction(1, 2)
        assert np.all(project(x, onto, along) == e(0, 1) * 3)

    def test_projection_rejects_overlapping_factors(self):
        onto = from_basis([e(0, 1)])
        with pytest.raises(SubspaceError):
            project(e(0, 1), onto, onto)

    def test_restriction_keeps_symmetry(self):
        full = from_basis([e(0, 0), e(1, 1), e(0, 1)])
        form = GramForm(full, as_exact([[2, 1, 0], [1, 2, 0], [0, 0, 1]]))
        assert form.is_symmetric()
        sub = from_basis([e(0, 0) + e(1, 1)])
        restricted = form.restrict(sub)
        assert restricted.gram[0, 0] == 6
        assert form.restrict(zero_space((3, 3), ScalarMode.EXACT)).basis.dim == 0

    def test_empty_form_is_positive_definite(self):
        form = GramForm(zero_space((3, 3), ScalarMode.EXACT), np.empty((0, 0), dtype=object))
        assert form.is_positive_definite()
        assert form.min_eigenvalue() == float("inf")


class TestPayloads:
    def test_exact_payload_uses_fraction_strings(self):
        payload = matrix_to_payload(as_exact([[1, "1/2"]]))
        assert payload == {"rows": 1, "cols": 2, "entries": [["1", "1/2"]]}

    def test_payload_round_trip_keeps_mode(self):
        x = as_exact([[1, "-3/4"], [0, 2]])
        back = matrix_from_payload(matrix_to_payload(x))
        assert np.all(back == x)

    def test_mixed_payload_rejected(self):
        with pytest.raises(ValueError):
            MatrixPayload(rows=1, cols=2, entries=[["1", 0.5]])
