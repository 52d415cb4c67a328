"""Tests for the induced reductive decomposition and the principal-orbit report"""
import os
import sys

import pytest

# Add project root to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.decomposition import (  # noqa: E402
    ambient_reductive_complement,
    induced_orbit_decomposition,
    isotropy_algebra,
    principal_orbit_report,
)
from src.cli.config import RunConfig  # noqa: E402
from src.cli.runner import Stopwatch, prepare  # noqa: E402
from src.gallery import build_fixture  # noqa: E402
from src.gallery.fixture import unit  # noqa: E402
from src.linalg.scalar import ScalarMode  # noqa: E402
from src.linalg.subspace import from_basis, intersect, is_subspace, span_equal, sum_spaces  # noqa: E402
from src.utils.error_handler import ConformalFieldError, SubspaceError  # noqa: E402


class TestAmbientComplement:
    def test_horosphere_complement_is_cartan(self, horosphere):
        m_bar = ambient_reductive_complement(horosphere.model)
        assert span_equal(m_bar, horosphere.m_bar)

    def test_float_complement_matches_exact(self, horosphere):
        exact = ambient_reductive_complement(horosphere.model)
        floating = ambient_reductive_complement(horosphere.model, ScalarMode.FLOAT)
        assert span_equal(floating, exact.to_mode(ScalarMode.FLOAT), tol=1e-9)

    def test_conformal_ambient_rejected(self, punctured):
        with pytest.raises(ConformalFieldError):
            ambient_reductive_complement(punctured.model)

    def test_isotropy_algebra_of_orbit_group(self, horosphere):
        h = isotropy_algebra(horosphere.model, horosphere.g_sub)
        assert h.dim == 1
        assert is_subspace(h, horosphere.expected_h_bar)

    def test_isotropy_algebra_needs_subalgebra_of_ambient(self, horosphere, punctured):
        with pytest.raises(SubspaceError):
            isotropy_algebra(horosphere.model, punctured.g_sub)


class TestHorosphereDecomposition:
    def test_dimensions(self, horosphere_run):
        dims = horosphere_run.decomposition.dims()
        assert dims == {"g_bar": 6, "h_bar": 3, "m_bar": 3, "g": 3, "h": 1, "m": 2, "n": 1}

    def test_certificates(self, horosphere_run):
        cert = horosphere_run.decomposition.certificates
        assert cert.passed
        assert cert.phi_bar_h_bar_definite
        assert cert.phi_bar_h_bar_min_eigenvalue > 1e-6
        assert cert.complement_identity
        assert cert.phi_bar_complement_match
        assert cert.normal_match
        assert all(cert.direct_sums.values())

    def test_matches_expected_blocks(self, horosphere_run):
        fx, decomp = horosphere_run.fixture, horosphere_run.decomposition
        assert span_equal(decomp.h_bar, fx.expected_h_bar)
        assert span_equal(decomp.m, fx.expected_m)
        assert span_equal(decomp.n, fx.expected_n)

    def test_m_meets_isotropy_trivially(self, horosphere_run):
        decomp = horosphere_run.decomposition
        assert intersect(decomp.m, decomp.h_bar).dim == 0

    def test_m_plus_n_not_bracket_invariant(self, horosphere_run):
        cert = horosphere_run.decomposition.certificates
        assert cert.m_plus_n_bracket_invariant is False
        assert cert.ad_invariance["h_bar_m_plus_n"].bracket_residual > 0

    def test_float_mode_agrees_with_exact(self, horosphere_run, horosphere_float_run):
        exact, floating = horosphere_run.decomposition, horosphere_float_run.decomposition
        assert floating.dims() == exact.dims()
        for name in ("h_bar", "h", "m", "n"):
            assert span_equal(getattr(floating, name), getattr(exact, name).to_mode(ScalarMode.FLOAT), tol=1e-9)

    def test_principal_report(self, horosphere_run):
        report = principal_orbit_report(horosphere_run.model, horosphere_run.orbit,
                                        horosphere_run.decomposition)
        assert report.slice_trivial
        assert report.phi_vs_phi_bar == 0
        assert report.phi_complement_matches_m
        assert report.passed and not report.vacuous

    def test_to_dict_serializes_bases(self, horosphere_run):
        data = horosphere_run.decomposition.to_dict()
        assert len(data["bases"]["m"]) == 2
        assert data["bases"]["n"][0]["entries"][2][2] == "1"
        assert data["certificates"]["passed"] is True


class TestSphereDecomposition:
    def test_dimensions(self, punctured_run):
        dims = punctured_run.decomposition.dims()
        assert dims == {"g_bar": 4, "h_bar": 1, "m_bar": 3, "g": 3, "h": 1, "m": 2, "n": 1}

    def test_h_equals_h_bar(self, punctured_run):
        decomp = punctured_run.decomposition
        assert span_equal(decomp.h, decomp.h_bar)
        assert decomp.certificates.passed

    def test_normal_is_dilation(self, punctured_run):
        fx, decomp = punctured_run.fixture, punctured_run.decomposition
        assert span_equal(decomp.n, fx.expected_n)
        assert span_equal(decomp.m, fx.expected_m)

    def test_principal_report(self, punctured_run):
        report = principal_orbit_report(punctured_run.model, punctured_run.orbit, punctured_run.decomposition)
        assert report.passed
        assert report.phi_vs_phi_bar == 0

    def test_float_mode(self, punctured_float_run):
        decomp = punctured_float_run.decomposition
        assert decomp.mode == ScalarMode.FLOAT
        assert decomp.certificates.passed
        expected = punctured_float_run.fixture.expected_m.to_mode(ScalarMode.FLOAT)
        assert span_equal(decomp.m, expected, tol=1e-9)


class TestFlatDecomposition:
    def test_trivial_isotropy(self, euclidean_run):
        dims = euclidean_run.decomposition.dims()
        assert dims == {"g_bar": 3, "h_bar": 0, "m_bar": 3, "g": 2, "h": 0, "m": 2, "n": 1}
        assert euclidean_run.decomposition.certificates.passed

    def test_principal_report_is_vacuous(self, euclidean_run):
        report = principal_orbit_report(euclidean_run.model, euclidean_run.orbit, euclidean_run.decomposition)
        assert report.vacuous and report.passed


class TestInvalidInput:
    def test_m_bar_must_complement_isotropy(self, horosphere_run):
        fx = horosphere_run.fixture
        with pytest.raises(SubspaceError):
            induced_orbit_decomposition(fx.model, horosphere_run.orbit, fx.expected_m)

    def test_sum_of_blocks_fills_ambient(self, horosphere_run):
        decomp = horosphere_run.decomposition
        total = sum_spaces(decomp.h_bar, decomp.m, decomp.n)
        assert total.dim == horosphere_run.model.algebra.dim


def timed_prepare(example: str, n: int):
    config = RunConfig.build(example=example, n=n)
    # symbolic fields are built outside the timed stage
    build_fixture(example, n, **config.fixture_options())
    watch = Stopwatch()
    ctx = prepare(config, watch)
    return ctx, watch.durations["decomposition"]


@pytest.mark.slow
class TestAcrossDimensions:
    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_horosphere(self, n):
        ctx, elapsed = timed_prepare("horosphere", n)
        decomp = ctx.decomposition
        assert elapsed < 5.0
        assert decomp.dims() == {"g_bar": n * (n + 1) // 2, "h_bar": n * (n - 1) // 2, "m_bar": n,
                                 "g": n * (n - 1) // 2, "h": (n - 1) * (n - 2) // 2, "m": n - 1, "n": 1}
        assert decomp.certificates.passed
        assert span_equal(decomp.m, ctx.fixture.expected_m)
        boost = unit(n + 1, {(n - 1, n - 1): 1, (n, n): -1})
        assert span_equal(decomp.n, from_basis([boost]))
        assert not decomp.certificates.m_plus_n_bracket_invariant

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_punctured_euclidean(self, n):
        ctx, _ = timed_prepare("punctured_euclidean", n)
        decomp = ctx.decomposition
        assert decomp.dims() == {"g_bar": n * (n - 1) // 2 + 1, "h_bar": (n - 1) * (n - 2) // 2, "m_bar": n,
                                 "g": n * (n - 1) // 2, "h": (n - 1) * (n - 2) // 2, "m": n - 1, "n": 1}
        assert decomp.certificates.passed
        assert span_equal(decomp.m, ctx.fixture.expected_m)
        dilation = unit(n + 1, {(n, n): 1})
        assert span_equal(decomp.n, from_basis([dilation]))

    @pytest.mark.parametrize("example", ["horosphere", "punctured_euclidean"])
    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_principal_orbit_forms_agree(self, example, n):
        ctx, _ = timed_prepare(example, n)
        report = principal_orbit_report(ctx.model, ctx.orbit, ctx.decomposition)
        assert not report.vacuous
        assert report.slice_trivial
        assert report.phi_vs_phi_bar == 0
        assert report.phi_complement_matches_m
        assert report.passed
