"""Tests for Kostant operators and the forms phi_bar, phi and psi"""
import os
import sys

import numpy as np
import pytest

# Add project root to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.geometry.orbit import build_orbit  # noqa: E402
from src.kostant import (  # noqa: E402
    GramCache,
    gram_cache,
    isotropy_bracket_residual,
    kostant,
    kostant_blocks,
    kostant_report,
    orthonormal_frame,
    phi_bar,
    phi_bar_form,
    phi_bar_gram,
    phi_orbit_gram,
    psi_form,
    psi_invariance_residual,
)
from src.lie.killing import skew_residual  # noqa: E402
from src.linalg.scalar import ScalarMode, as_exact, as_float, max_abs  # noqa: E402
from src.utils.error_handler import ConformalFieldError  # noqa: E402


def rotation(fixture):
    """The so(n-1) rotation generator of the horosphere isotropy."""
    return fixture.expected_h_bar.basis[0]


class TestKostantOperator:
    def test_rotation_acts_as_unit_rotation(self, horosphere):
        op = kostant(horosphere.model, rotation(horosphere))
        assert np.all(op.chart_matrix == as_exact([[0, 0, 0], [0, 0, 1], [0, -1, 0]]))
        assert op.mode == ScalarMode.EXACT

    def test_skew_for_every_killing_element(self, horosphere):
        for x in horosphere.model.algebra.basis.basis:
            op = kostant(horosphere.model, x)
            assert op.skew_residual == 0
            assert op.orthonormal_skew_residual < 1e-7

    def test_conformal_element_rejected(self, punctured):
        with pytest.raises(ConformalFieldError):
            kostant(punctured.model, punctured.expected_n.basis[0])

    def test_frame_independence(self, horosphere):
        op = kostant(horosphere.model, horosphere.model.algebra.basis.basis[3])
        rng = np.random.default_rng(5)
        other = orthonormal_frame(op.metric, order=rng.standard_normal((3, 3)))
        a, b = op.matrix_rep, op.matrix_in(other)
        assert skew_residual(b) < 1e-10
        assert abs(np.trace(a @ a) - np.trace(b @ b)) < 1e-8

    def test_isotropy_identity(self, horosphere):
        model = horosphere.model
        for x in horosphere.expected_h_bar.basis:
            for y in model.algebra.basis.basis:
                assert isotropy_bracket_residual(model, x, y) == 0

    def test_report_on_conformal_fixture(self, punctured):
        report = kostant_report(punctured.model, punctured.expected_h_bar)
        assert report.operators == punctured.model.algebra.dim - 1
        assert report.passed


class TestBlocks:
    def test_block_reassembly(self, horosphere):
        orbit = build_orbit(horosphere.model, horosphere.g_sub)
        blocks = kostant_blocks(orbit, horosphere.expected_m.basis[0])
        assert np.all(blocks.reassemble() == blocks.adapted)

    def test_horosphere_isotropy_fixes_normal(self, horosphere):
        orbit = build_orbit(horosphere.model, horosphere.g_sub)
        x = horosphere.g_sub.basis.basis[0]
        assert horosphere.expected_h_bar.contains(x)
        blocks = kostant_blocks(orbit, x)
        assert max_abs(blocks.normal_block) == 0
        assert max_abs(blocks.second_fundamental_block) == 0

    def test_translation_has_second_fundamental_form(self, horosphere):
        orbit = build_orbit(horosphere.model, horosphere.g_sub)
        blocks = kostant_blocks(orbit, horosphere.expected_m.basis[0])
        assert max_abs(blocks.second_fundamental_block) > 0
        assert max_abs(blocks.second_fundamental(0)) > 0 or max_abs(blocks.second_fundamental(1)) > 0


class TestForms:
    def test_phi_bar_of_rotation(self, horosphere):
        x = rotation(horosphere)
        assert phi_bar(horosphere.model, x, x) == 2

    def test_phi_bar_gram_symmetric_and_cached(self, horosphere):
        model = horosphere.model
        gram = phi_bar_gram(model, model.algebra.basis)
        assert gram.shape == (6, 6)
        assert np.all(gram == gram.T)
        assert phi_bar_gram(model, model.algebra.basis) is gram

    def test_phi_bar_definite_on_isotropy(self, horosphere):
        form = phi_bar_form(horosphere.model, horosphere.expected_h_bar)
        assert form.is_positive_definite()
        assert form.min_eigenvalue() > 1e-6

    def test_phi_bar_oracle_from_float_operators(self, horosphere):
        model = horosphere.model
        basis = model.algebra.basis
        exact = as_float(phi_bar_gram(model, basis))
        ops = [as_float(model.field_jacobian_oracle(x)) + np.tensordot(model.christoffel_at(),
                                                                      as_float(model.fundamental_field(x)),
                                                                      axes=(2, 0))
               for x in basis.basis]
        oracle = np.array([[-np.trace(a @ b) for b in ops] for a in ops])
        assert np.allclose(exact, oracle, atol=1e-6)

    def test_phi_orbit_equals_phi_bar_on_h_times_g(self, horosphere):
        orbit = build_orbit(horosphere.model, horosphere.g_sub)
        g = horosphere.g_sub.basis
        phi = phi_orbit_gram(orbit, g)
        phi_bar_g = phi_bar_gram(horosphere.model, g)
        # first basis element of g spans h
        assert np.all(phi[0] == phi_bar_g[0])

    def test_psi_block_structure(self, horosphere):
        psi = psi_form(horosphere.model, horosphere.m_bar, horosphere.expected_h_bar)
        assert psi.is_positive_definite()
        assert np.all(psi.gram[:3, 3:] == 0)
        # Cartan element: X*_o = 2 ∂_{x1} with g_o = 1/2 there
        assert psi.gram[3, 3] == 2

    def test_psi_invariance(self, punctured):
        psi = psi_form(punctured.model, punctured.m_bar, punctured.expected_h_bar)
        assert psi_invariance_residual(psi, punctured.expected_h_bar) < 1e-7

    def test_cache_clear(self, horosphere):
        phi_bar_gram(horosphere.model, horosphere.expected_h_bar)
        gram_cache.clear()
        assert gram_cache.get("phi_bar", horosphere.model, horosphere.expected_h_bar) is None


class TestGramCache:
    def test_least_recently_used_entry_is_evicted(self):
        cache = GramCache(max_entries=2)
        owner = object()
        a, b, c = object(), object(), object()
        cache.set("phi_bar", owner, a, np.eye(1))
        cache.set("phi_bar", owner, b, np.eye(2))
        assert cache.get("phi_bar", owner, a) is not None
        cache.set("phi_bar", owner, c, np.eye(3))
        assert len(cache) == 2
        assert cache.get("phi_bar", owner, b) is None
        assert cache.get("phi_bar", owner, a).shape == (1, 1)

    def test_counters_under_concurrent_use(self):
        import concurrent.futures

        cache = GramCache(max_entries=4)
        owner, basis = object(), object()
        calls = 200
        with concurrent.futures.ThreadPoolExecutor(max_workers=8) as executor:
            list(executor.map(lambda _: cache.get_or_compute("phi", owner, basis, lambda: np.eye(2)),
                              range(calls)))
        assert cache.hits + cache.misses == calls
        assert cache.misses >= 1
