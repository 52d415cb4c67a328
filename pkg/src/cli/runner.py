"""
Pipeline behind the CLI verbs.

fixture -> orbit -> m̄ -> induced decomposition -> selected checks -> Report.
m̄ comes from the config file when one is supplied (and must pass its
certificates), is recomputed as the phi_bar-complement of h̄ when the ambient
algebra acts by isometries and is taken from the fixture otherwise. Results are
keyed by the claim each check certifies.
"""
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from src.cli.config import RunConfig
from src.cli.report import Report
from src.config.settings import override_settings, settings
from src.connections import (
    ConnectionReport,
    ReductiveConnections,
    ambient_canonical_residuals,
    transport_check,
    verify_homogeneous_structure,
    verify_parallel_subbundle,
)
from src.decomposition import (
    DecompositionResult,
    ambient_reductive_complement,
    induced_orbit_decomposition,
    principal_orbit_report,
    require_reductive_complement,
)
from src.gallery import Fixture, build_fixture
from src.geometry.checks import check_model
from src.geometry.orbit import OrbitData, build_orbit
from src.kostant import kostant_report, phi_bar_gram, phi_orbit_gram, psi_invariance_residual
from src.lie.algebra import MatrixLieAlgebra
from src.linalg.serialization import matrix_from_payload, matrix_to_payload
from src.linalg.subspace import from_basis, intersect, span_equal
from src.utils.error_handler import OrbitsError, PipelineError
from src.utils.logger import get_logger

logger = get_logger()

PARALLEL_CLAIMS = {
    "tangent_bundle_parallel": ("tm_parallelism", "d_gamma", "metricity", "norm_drift_levi_civita", "norm_drift_d"),
    "difference_identity": ("difference_identity", "d_s", "d_s_bar"),
    "transport_pushforward": ("transport_pushforward",),
}


@dataclass
class Stopwatch:
    durations: Dict[str, float] = field(default_factory=dict)

    @contextmanager
    def stage(self, name: str):
        start = time.perf_counter()
        try:
            yield
        finally:
            self.durations[name] = self.durations.get(name, 0.0) + time.perf_counter() - start


@dataclass
class RunContext:
    fixture: Fixture
    orbit: OrbitData
    decomposition: DecompositionResult
    m_bar_source: str

    @property
    def model(self):
        return self.fixture.model


def prepare(config: RunConfig, watch: Optional[Stopwatch] = None) -> RunContext:
    """Build the fixture, its orbit in the requested mode and the induced decomposition."""
    watch = watch or Stopwatch()
    mode = config.mode
    with watch.stage("fixture"):
        fixture = build_fixture(config.example, config.n, **config.fixture_options())
    model = fixture.model
    g_sub = fixture.g_sub
    if g_sub.mode != mode:
        g_sub = MatrixLieAlgebra(g_sub.name, g_sub.basis.to_mode(mode))
    with watch.stage("decomposition"):
        orbit = build_orbit(model, g_sub)
        if config.m_bar is not None:
            supplied = from_basis([matrix_from_payload(p) for p in config.m_bar]).to_mode(mode)
            m_bar = require_reductive_complement(model, supplied)
            source = "config (supplied complement)"
        elif fixture.ambient_isometric:
            m_bar = ambient_reductive_complement(model, mode)
            source = "phi_bar complement of the isotropy algebra"
            if not span_equal(m_bar, fixture.m_bar.to_mode(mode)):
                logger.warning("Computed complement differs from the fixture's", fixture=fixture.name)
        else:
            m_bar = fixture.m_bar.to_mode(mode)
            source = "fixture (ambient algebra has conformal directions)"
        decomp = induced_orbit_decomposition(model, orbit, m_bar)
    return RunContext(fixture=fixture, orbit=orbit, decomposition=decomp, m_bar_source=source)


def expected_match(ctx: RunContext) -> Dict[str, bool]:
    mode = ctx.decomposition.mode
    fx, decomp = ctx.fixture, ctx.decomposition
    return {
        "h_bar": span_equal(decomp.h_bar, fx.expected_h_bar.to_mode(mode)),
        "m": span_equal(decomp.m, fx.expected_m.to_mode(mode)),
        "n": span_equal(decomp.n, fx.expected_n.to_mode(mode)),
    }


def gram_matrices(ctx: RunContext) -> dict:
    model, orbit, decomp = ctx.model, ctx.orbit, ctx.decomposition
    grams = {
        "phi_bar_h_bar": matrix_to_payload(phi_bar_gram(model, decomp.h_bar)),
        "psi": matrix_to_payload(decomp.psi.gram),
        "phi_g": None,
    }
    g = orbit.g_sub.basis
    if all(model.is_isometric(x) for x in g.basis):
        grams["phi_g"] = matrix_to_payload(phi_orbit_gram(orbit, g))
    return grams


def _decomposition_section(ctx: RunContext) -> dict:
    decomp = ctx.decomposition
    section = decomp.to_dict()
    section["m_bar_source"] = ctx.m_bar_source
    section["expected_match"] = expected_match(ctx)
    section["m_cap_h_bar_dim"] = intersect(decomp.m, decomp.h_bar).dim
    section["gram"] = gram_matrices(ctx)
    return section


def _claim(report: ConnectionReport, names: tuple) -> Optional[bool]:
    flags = [report.residuals[n].passed for n in names
             if n in report.residuals and report.residuals[n].passed is not None]
    return all(flags) if flags else None


def _record(results: Dict[str, Optional[bool]], claim: str, outcome: Optional[bool]):
    """AND a check outcome into a claim; None leaves the claim untouched."""
    if outcome is None:
        results.setdefault(claim, None)
    elif results.get(claim) is None:
        results[claim] = bool(outcome)
    else:
        results[claim] = results[claim] and bool(outcome)


def run_checks(ctx: RunContext, checks: List[str], seed: int, watch: Stopwatch) -> tuple:
    """Sections per check and pass/fail per certified claim, in a fixed order."""
    model, orbit, decomp = ctx.model, ctx.orbit, ctx.decomposition
    sections: Dict[str, dict] = {}
    results: Dict[str, Optional[bool]] = {}
    connections = None

    def reductive() -> ReductiveConnections:
        nonlocal connections
        if connections is None:
            connections = ReductiveConnections(model, decomp)
        return connections

    for check in checks:
        with watch.stage(check):
            if check == "model":
                report = check_model(model, seed=seed)
                sections["model"] = report.to_dict()
                _record(results, "model_invariants", report.passed)
            elif check == "kostant":
                report = kostant_report(model, decomp.h_bar)
                psi_residual = psi_invariance_residual(decomp.psi, decomp.h_bar, seed=seed)
                sections["kostant"] = report.to_dict()
                sections["kostant"]["psi_invariance"] = psi_residual
                _record(results, "kostant_operators", report.passed)
                _record(results, "psi_invariant_inner_product",
                        decomp.psi.is_positive_definite() and psi_residual < settings.residual_gate)
            elif check == "decomposition":
                cert = decomp.certificates
                sections["decomposition"] = _decomposition_section(ctx)
                _record(results, "reductive_decomposition",
                        cert.passed and all(sections["decomposition"]["expected_match"].values()))
                # the m ⊕ n leak is only expected when h is strictly smaller than h̄
                expect_leak = decomp.h.dim < decomp.h_bar.dim
                _record(results, "m_plus_n_not_invariant",
                        (not cert.m_plus_n_bracket_invariant) if expect_leak else None)
            elif check == "principal":
                report = principal_orbit_report(model, orbit, decomp)
                sections["principal"] = report.to_dict()
                _record(results, "principal_orbit_forms", None if report.vacuous else report.passed)
            elif check == "ambient":
                report = ambient_canonical_residuals(model, decomp.m_bar, seed)
                sections["ambient"] = report.to_dict()
                _record(results, "ambient_canonical", report.passed)
            elif check == "parallel":
                report = verify_parallel_subbundle(orbit, decomp, seed, include_ambient=False)
                sections["parallel"] = report.to_dict()
                for claim, names in PARALLEL_CLAIMS.items():
                    _record(results, claim, _claim(report, names))
                _record(results, "negative_control", report.negative_control.passed)
            elif check == "structure":
                report = verify_homogeneous_structure(orbit, reductive().s_field, seed)
                sections["structure"] = report.to_dict()
                _record(results, "homogeneous_structure", report.passed)
            elif check == "transport":
                report = transport_check(orbit, decomp, seed)
                sections["transport"] = report.to_dict()
                _record(results, "transport_pushforward", report.passed)
    return sections, results


def run(config: RunConfig, verb: str) -> Report:
    """Run a verb under the config's tolerance overrides and return its report."""
    watch = Stopwatch()
    checks = config.selected_checks(verb)
    with override_settings(curve_seed=config.seed, **config.tolerance_overrides()):
        try:
            ctx = prepare(config, watch)
            sections, results = run_checks(ctx, checks, config.seed, watch)
        except OrbitsError:
            raise
        except Exception as e:
            raise PipelineError(f"{type(e).__name__} during {verb}: {e}") from e
    fixture = ctx.fixture
    report = Report(
        verb=verb,
        config=config.echo(),
        fixture={
            "name": fixture.name,
            "n": fixture.n,
            "description": fixture.description,
            "dims": ctx.decomposition.dims(),
            "flags": {"symmetric": fixture.symmetric, "conformal": fixture.conformal,
                      "principal": fixture.principal},
        },
        checks=checks,
        sections=sections,
        results=results,
        timing=dict(watch.durations) if config.timing else None,
    )
    logger.info("Run finished", verb=verb, fixture=fixture.name, passed=report.passed)
    return report
