"""
Isotropy extraction, m̄ = h̄^⊥, the induced orbit decomposition and the normal complement.

h^⊥ is taken with respect to psi, which equals phi_bar on h̄ and makes h̄ and m̄
orthogonal; this gives h^⊥ = h^{⊥_h̄} ⊕ m̄ for any reductive m̄ and needs no
Kostant operator on conformal directions.
"""
from typing import Optional

import numpy as np

from src.config.settings import settings
from src.decomposition.result import Certificates, DecompositionResult, PrincipalOrbitReport
from src.geometry.model import ChartedHomSpace
from src.geometry.orbit import EvaluationMap, OrbitData
from src.kostant.forms import phi_bar_form, phi_bar_gram, phi_orbit_gram, psi_form
from src.kostant.operators import kostant_blocks
from src.lie.algebra import MatrixLieAlgebra
from src.lie.invariance import ad_invariance_check
from src.linalg.forms import GramForm
from src.linalg.scalar import ScalarMode, max_abs
from src.linalg.subspace import (
    Subspace,
    echelon,
    intersect,
    is_direct,
    is_subspace,
    orth_complement,
    span_equal,
    sum_spaces,
)
from src.utils.error_handler import CertificateError, DegenerateFormError, ShapeMismatchError, SubspaceError
from src.utils.logger import get_logger, log_execution_time

logger = get_logger()


def _ambient(model: ChartedHomSpace, mode: ScalarMode) -> Subspace:
    return model.algebra.basis.to_mode(mode)


def _ambient_algebra(model: ChartedHomSpace, mode: ScalarMode) -> MatrixLieAlgebra:
    if model.algebra.mode == mode:
        return model.algebra
    return MatrixLieAlgebra(model.algebra.name, _ambient(model, mode))


def isotropy_algebra(model: ChartedHomSpace, sub: MatrixLieAlgebra) -> Subspace:
    """Kernel of X ↦ X*_o on ``sub``."""
    if not is_subspace(sub.basis, _ambient(model, sub.mode)):
        raise SubspaceError(f"{sub.name} is not contained in {model.algebra.name}")
    return echelon(EvaluationMap.build(model, sub.basis).kernel())


def _require_definite(model: ChartedHomSpace, h_bar: Subspace) -> GramForm:
    form = phi_bar_form(model, h_bar)
    if not form.is_positive_definite():
        raise DegenerateFormError(f"{model.name}: phi_bar is not definite on the isotropy algebra "
                                  f"(min eigenvalue {form.min_eigenvalue():.3e})")
    return form


def ambient_reductive_complement(model: ChartedHomSpace, mode: ScalarMode = ScalarMode.EXACT,
                                 h_bar: Optional[Subspace] = None) -> Subspace:
    """m̄ = h̄^⊥ for phi_bar on the whole ambient algebra."""
    full = _ambient(model, mode)
    for x in full.basis:
        model.require_isometric(x)
    if h_bar is None:
        h_bar = isotropy_algebra(model, _ambient_algebra(model, mode))
    _require_definite(model, h_bar)
    complement = orth_complement(h_bar, full, phi_bar_form(model, full))
    if not complement.nondegenerate:
        raise DegenerateFormError(f"{model.name}: phi_bar degenerate on the isotropy algebra")
    m_bar = echelon(complement.space)
    check = ad_invariance_check(h_bar, m_bar, _ambient_algebra(model, mode),
                                seed=settings.curve_seed)
    if not check.invariant:
        logger.warning("Ambient complement is not Ad-invariant", model=model.name,
                       bracket_residual=check.bracket_residual)
    logger.info("Ambient reductive complement", model=model.name, h_bar_dim=h_bar.dim,
                m_bar_dim=m_bar.dim, invariant=check.invariant)
    return m_bar


def require_reductive_complement(model: ChartedHomSpace, m_bar: Subspace,
                                 h_bar: Optional[Subspace] = None) -> Subspace:
    """Accept a supplied m̄ only if it complements h̄ and passes the h_bar_m_bar Ad-invariance certificate."""
    mode = m_bar.mode
    full = _ambient(model, mode)
    if m_bar.shape != full.shape:
        raise ShapeMismatchError(f"m̄ has shape {m_bar.shape}, the ambient algebra {full.shape}")
    if not is_subspace(m_bar, full):
        raise CertificateError(f"m̄ is not contained in {model.algebra.name}")
    if h_bar is None:
        h_bar = isotropy_algebra(model, _ambient_algebra(model, mode))
    if not (is_direct(h_bar, m_bar) and h_bar.dim + m_bar.dim == full.dim):
        raise CertificateError(f"direct sum g_bar = h_bar + m_bar fails (dims {h_bar.dim} + {m_bar.dim} "
                               f"!= {full.dim} or overlap)")
    check = ad_invariance_check(h_bar, m_bar, _ambient_algebra(model, mode), seed=settings.curve_seed)
    if not check.invariant:
        raise CertificateError(f"Ad-invariance certificate h_bar_m_bar fails: bracket residual "
                               f"{check.bracket_residual:.3e}, conjugation residual {check.conjugation_residual:.3e}")
    logger.info("Supplied complement accepted", model=model.name, m_bar_dim=m_bar.dim)
    return echelon(m_bar)


def _normal_space(decomp: DecompositionResult) -> Subspace:
    base = sum_spaces(decomp.h_bar, decomp.m)
    return echelon(orth_complement(base, decomp.psi.basis, decomp.psi).space)


def normal_complement(model: ChartedHomSpace, decomp: DecompositionResult) -> Subspace:
    """n = (h̄ + m)^{⊥_psi}, checked against the g_o-normal space of the orbit."""
    n = _normal_space(decomp)
    orbit = decomp.orbit
    images = EvaluationMap.build(model, n)
    same = orbit.mode == n.mode
    image = images.image if same else images.image.to_mode(ScalarMode.FLOAT)
    normal = orbit.normal if same else orbit.normal.to_mode(ScalarMode.FLOAT)
    match = span_equal(image, normal)
    residual = max([normal.residual(v) for v in image.basis] + [0.0])
    decomp.certificates.normal_match = bool(match and images.injective)
    decomp.certificates.normal_match_residual = float(residual)
    if not match:
        logger.warning("Normal complement does not realize the normal space", model=model.name,
                       residual=residual)
    return n


@log_execution_time()
def induced_orbit_decomposition(model: ChartedHomSpace, orbit: OrbitData, m_bar: Subspace,
                                h_bar: Optional[Subspace] = None) -> DecompositionResult:
    """m = h^⊥ ∩ g, n = (h̄ + m)^⊥ with every certificate filled in."""
    mode = m_bar.mode
    full = _ambient(model, mode)
    ambient_alg = _ambient_algebra(model, mode)
    g = orbit.g_sub.basis.to_mode(mode)
    if h_bar is None:
        h_bar = isotropy_algebra(model, ambient_alg)
    g_alg = orbit.g_sub if orbit.g_sub.mode == mode else MatrixLieAlgebra(orbit.g_sub.name, g)
    h = isotropy_algebra(model, g_alg)
    h_form = _require_definite(model, h_bar)

    psi = psi_form(model, m_bar, h_bar)
    h_perp = orth_complement(h, full, psi)
    if not h_perp.nondegenerate:
        raise DegenerateFormError(f"{model.name}: phi_bar degenerate on h")
    m = echelon(intersect(h_perp.space, g))
    if not (is_direct(h, m) and h.dim + m.dim == g.dim):
        raise SubspaceError(f"{model.name}: m (dim {m.dim}) is not a complement of h (dim {h.dim}) in g")

    decomp = DecompositionResult(orbit=orbit, h_bar=h_bar, m_bar=m_bar, h=h, m=m, psi=psi)
    cert: Certificates = decomp.certificates
    decomp.n = normal_complement(model, decomp)
    n = decomp.n

    seed = settings.curve_seed
    cert.ad_invariance["h_bar_m_bar"] = ad_invariance_check(h_bar, m_bar, ambient_alg, seed=seed)
    cert.ad_invariance["h_m"] = ad_invariance_check(h, m, ambient_alg, seed=seed)
    cert.ad_invariance["h_n"] = ad_invariance_check(h, n, ambient_alg, seed=seed)
    m_plus_n = sum_spaces(m, n)
    cert.ad_invariance["h_bar_m_plus_n"] = ad_invariance_check(h_bar, m_plus_n, ambient_alg, group_samples=0)
    cert.m_plus_n_bracket_invariant = cert.ad_invariance["h_bar_m_plus_n"].bracket_invariant

    cert.phi_bar_h_bar_min_eigenvalue = h_form.min_eigenvalue()
    cert.phi_bar_h_bar_definite = h_form.is_positive_definite()
    cert.direct_sums = {
        "g_bar = h_bar + m_bar": is_direct(h_bar, m_bar) and h_bar.dim + m_bar.dim == full.dim,
        "g = h + m": is_direct(h, m) and h.dim + m.dim == g.dim,
        "g_bar = h_bar + m + n": is_direct(h_bar, m, n) and h_bar.dim + m.dim + n.dim == full.dim,
    }
    cert.h_equals_h_bar_cap_g = span_equal(h, intersect(h_bar, g))

    # proof identity: h^⊥ = h^{⊥ within h̄} ⊕ m̄
    inside = orth_complement(h, h_bar, h_form).space
    cert.complement_identity = span_equal(h_perp.space, sum_spaces(inside, m_bar))
    if all(model.is_isometric(x) for x in full.basis):
        phi_perp = orth_complement(h, full, phi_bar_form(model, full)).space
        cert.phi_bar_complement_match = span_equal(phi_perp, h_perp.space)

    logger.info("Induced orbit decomposition", model=model.name, mode=mode.value, **decomp.dims(),
                passed=cert.passed)
    return decomp


def principal_orbit_report(model: ChartedHomSpace, orbit: OrbitData,
                           decomp: DecompositionResult) -> PrincipalOrbitReport:
    """Slice triviality at o and, when it holds, phi = phi_bar on h × g and h^{⊥_phi} ∩ g = m."""
    h = decomp.h
    if h.dim == 0:
        return PrincipalOrbitReport(slice_residual=0.0, slice_trivial=True, phi_vs_phi_bar=0.0,
                                    phi_complement_matches_m=True, vacuous=True, passed=True)
    gate = settings.strict_gate
    slice_residual = 0.0
    for x in h.basis:
        blocks = kostant_blocks(orbit, x)
        slice_residual = max(slice_residual, max_abs(blocks.normal_block),
                             max_abs(blocks.second_fundamental_block))
    exact = h.mode == ScalarMode.EXACT
    slice_trivial = slice_residual == 0 if exact else slice_residual < gate
    if not slice_trivial:
        logger.warning("Slice representation is not trivial at o", model=model.name, residual=slice_residual)
        return PrincipalOrbitReport(slice_residual=slice_residual, slice_trivial=False, phi_vs_phi_bar=None,
                                    phi_complement_matches_m=None, vacuous=False, passed=False)

    g = orbit.g_sub.basis.to_mode(h.mode)
    phi = phi_orbit_gram(orbit, g)
    phi_bar_g = phi_bar_gram(model, g)
    h_rows = np.vstack([g.coordinates(x) for x in h.basis])
    diff = h_rows @ (phi - phi_bar_g)
    discrepancy = max_abs(diff)
    matches = span_equal(echelon(orth_complement(h, g, GramForm(g, phi)).space), decomp.m)
    passed = (discrepancy == 0 if exact else discrepancy < gate) and matches
    logger.info("Principal orbit report", model=model.name, slice_residual=slice_residual,
                phi_vs_phi_bar=discrepancy, complement_matches=matches)
    return PrincipalOrbitReport(slice_residual=float(slice_residual), slice_trivial=True,
                                phi_vs_phi_bar=float(discrepancy), phi_complement_matches_m=bool(matches),
                                vacuous=False, passed=bool(passed))

