"""Tests for matrix Lie algebras, exponentials, invariance and the so(k) Killing form"""
import os
import sys
from fractions import Fraction

import numpy as np
import pytest
import scipy.linalg

# Add project root to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.gallery.fixture import skew_pairs, span, unit  # noqa: E402
from src.lie.algebra import MatrixLieAlgebra, bracket, is_subalgebra  # noqa: E402
from src.lie.exponential import adjoint_exp, expm, expm_exact  # noqa: E402
from src.lie.invariance import ad_invariance_check  # noqa: E402
from src.lie.killing import killing_coefficient, killing_form_oracle, killing_form_so  # noqa: E402
from src.linalg.scalar import ScalarMode, as_exact, as_float, max_abs  # noqa: E402
from src.linalg.subspace import from_basis  # noqa: E402
from src.utils.error_handler import ShapeMismatchError, SubspaceError  # noqa: E402


def so(k):
    return MatrixLieAlgebra(f"so({k})", span([unit(k, {(i, j): 1, (j, i): -1})
                                              for i, j in skew_pairs(list(range(k)))], k))


class TestBracket:
    def test_rotation_generators(self):
        e12 = unit(3, {(0, 1): 1, (1, 0): -1})
        e23 = unit(3, {(1, 2): 1, (2, 1): -1})
        e13 = unit(3, {(0, 2): 1, (2, 0): -1})
        assert np.all(bracket(e12, e23) == e13)

    def test_boost_moves_translation_off_its_line(self, horosphere):
        boost = horosphere.expected_n.basis[0]
        translation = horosphere.expected_m.basis[0]
        z = bracket(boost, translation)
        assert max_abs(z) > 0
        assert horosphere.model.algebra.contains(z)

    def test_non_square_rejected(self):
        with pytest.raises(ShapeMismatchError):
            bracket(np.zeros((2, 3)), np.zeros((2, 3)))


class TestMatrixLieAlgebra:
    def test_structure_constants_antisymmetric(self):
        c = so(4).structure_constants
        assert np.all(c + np.transpose(c, (1, 0, 2)) == 0)

    def test_jacobi_exact(self, horosphere):
        assert horosphere.model.algebra.jacobi_residual() == 0

    def test_jacobi_float(self, punctured):
        basis = punctured.model.algebra.basis.to_mode(ScalarMode.FLOAT)
        assert MatrixLieAlgebra("float", basis).jacobi_residual() < 1e-10

    def test_non_closed_span_rejected(self):
        a = unit(3, {(0, 1): 1})
        b = unit(3, {(1, 0): 1})
        with pytest.raises(SubspaceError):
            MatrixLieAlgebra("not closed", from_basis([a, b]))

    def test_orbit_algebra_is_subalgebra(self, horosphere):
        check = is_subalgebra(horosphere.g_sub.basis, horosphere.model.algebra)
        assert check.closed
        assert check.residual == 0

    def test_from_matrices_and_subalgebra(self):
        generators = [unit(3, {(i, j): 1, (j, i): -1}) for i, j in skew_pairs([0, 1, 2])]
        alg = MatrixLieAlgebra.from_matrices("so(3)", generators)
        assert alg.dim == 3
        rotation = alg.subalgebra("so(2)", from_basis([unit(3, {(0, 1): 1, (1, 0): -1})]))
        assert rotation.dim == 1
        with pytest.raises(SubspaceError):
            alg.subalgebra("diagonal", from_basis([unit(3, {(0, 0): 1})]))


class TestExponential:
    def test_exact_series_matches_scipy(self):
        x = unit(3, {(0, 1): 1, (1, 0): -1})
        series = expm_exact(x * Fraction(1, 2))
        assert series.remainder_bound < 1e-12
        assert np.allclose(as_float(series.value), scipy.linalg.expm(as_float(x) / 2), atol=1e-12)

    def test_nilpotent_exponential_is_exact(self, horosphere):
        translation = horosphere.expected_m.basis[0]
        g = expm(translation)
        # translations are nilpotent of order 3
        expected = np.eye(4, dtype=int) + translation + translation @ translation * Fraction(1, 2)
        assert np.all(g == as_exact(expected))

    def test_adjoint_exp_preserves_bracket(self):
        alg = so(3)
        x, y, z = (as_float(b) for b in alg.basis.basis)
        lhs = adjoint_exp(x, bracket(y, z), 0.7)
        rhs = bracket(adjoint_exp(x, y, 0.7), adjoint_exp(x, z, 0.7))
        assert np.allclose(lhs, rhs, atol=1e-12)


class TestInvariance:
    def test_cartan_complement_invariant(self, horosphere):
        alg = horosphere.model.algebra
        report = ad_invariance_check(horosphere.expected_h_bar, horosphere.m_bar, alg)
        assert report.bracket_invariant
        assert report.invariant

    def test_m_plus_n_not_invariant_on_horosphere(self, horosphere):
        alg = horosphere.model.algebra
        from src.linalg.subspace import sum_spaces
        m_plus_n = sum_spaces(horosphere.expected_m, horosphere.expected_n)
        report = ad_invariance_check(horosphere.expected_h_bar, m_plus_n, alg, group_samples=0)
        assert not report.bracket_invariant
        assert report.bracket_residual > 0


class TestKillingForm:
    def test_coefficients(self):
        assert killing_coefficient(3) == 1
        assert killing_coefficient(5) == 3
        assert killing_coefficient(2) == -1

    def test_disjoint_rotations_orthogonal(self):
        form = killing_form_so(4)
        a = unit(4, {(0, 1): 1, (1, 0): -1})
        b = unit(4, {(2, 3): 1, (3, 2): -1})
        assert form(a, b) == 0

    def test_negative_definite_on_so3(self):
        form = killing_form_so(3)
        basis = so(3).basis.basis
        gram = np.array([[float(form(a, b)) for b in basis] for a in basis])
        assert np.all(np.linalg.eigvalsh(gram) < 0)

    def test_matches_structure_constant_oracle(self):
        alg = so(5)
        form = killing_form_so(5)
        gram = np.array([[form(a, b) for b in alg.basis.basis] for a in alg.basis.basis], dtype=object)
        assert np.all(gram == killing_form_oracle(alg))

    def test_ad_invariant_float(self):
        form = killing_form_so(4)
        rng = np.random.default_rng(0)
        c = rng.standard_normal((4, 4))
        g = scipy.linalg.expm(0.3 * (c - c.T))
        a = as_float(unit(4, {(0, 1): 1, (1, 0): -1}))
        b = as_float(unit(4, {(0, 2): 1, (2, 0): -1}) + unit(4, {(1, 3): 1, (3, 1): -1}))
        moved = form(g @ a @ g.T, g @ b @ g.T)
        assert abs(moved - form(a, b)) < 1e-8

    def test_rejects_non_skew_input(self):
        form = killing_form_so(3)
        with pytest.raises(ShapeMismatchError):
            form(unit(3, {(0, 1): 1}), unit(3, {(0, 1): 1, (1, 0): -1}))

    def test_rejects_wrong_size(self):
        form = killing_form_so(3)
        with pytest.raises(ShapeMismatchError):
            form(unit(4, {(0, 1): 1, (1, 0): -1}), unit(4, {(0, 1): 1, (1, 0): -1}))
