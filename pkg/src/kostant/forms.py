"""
Bilinear forms built from Kostant operators.

phi_bar(X, Y) = -tr(K̄_X K̄_Y) on the ambient algebra, phi(X, Y) = -tr(K_X K_Y)
on the orbit algebra, and psi = phi_bar on h̄ plus the pulled-back metric on m̄.
Both carry the same trace normalization, so phi = phi_bar on h × g for
principal orbits. Trace forms do not depend on the frame and Gram matrices
are assembled in the chart frame.
"""
from typing import List, Optional

import numpy as np

from src.geometry.model import ChartedHomSpace
from src.geometry.orbit import EvaluationMap, OrbitData, identify_m_with_tangent
from src.kostant.cache import gram_cache
from src.kostant.operators import KostantOperator, kostant, kostant_blocks
from src.lie.exponential import adjoint_exp
from src.lie.killing import trace_form
from src.linalg.forms import GramForm
from src.linalg.scalar import Mat, ScalarMode, as_float, mode_of, zeros
from src.linalg.subspace import Subspace, is_direct
from src.utils.error_handler import DegenerateFormError, SubspaceError
from src.utils.logger import get_logger

logger = get_logger()


def _pair(ops: List[KostantOperator], mode: ScalarMode) -> Mat:
    d = len(ops)
    gram = zeros((d, d), mode)
    for i in range(d):
        for j in range(i, d):
            gram[i, j] = gram[j, i] = -trace_form(ops[i].chart_matrix, ops[j].chart_matrix)
    return gram


def phi_bar(model: ChartedHomSpace, x: Mat, y: Mat):
    """-tr(K̄_X K̄_Y)."""
    kx, ky = kostant(model, x), kostant(model, y)
    value = -trace_form(kx.chart_matrix, ky.chart_matrix)
    return value if mode_of(np.asarray(x)) == ScalarMode.EXACT else float(value)


def phi_bar_gram(model: ChartedHomSpace, sub: Subspace) -> Mat:
    """Gram matrix of phi_bar on the basis of ``sub`` (cached per model and basis)."""
    def compute():
        ops = [kostant(model, x) for x in sub.basis]
        return _pair(ops, sub.mode)

    return gram_cache.get_or_compute("phi_bar", model, sub, compute)


def phi_bar_form(model: ChartedHomSpace, sub: Subspace) -> GramForm:
    return GramForm(sub, phi_bar_gram(model, sub))


def phi_orbit(orbit: OrbitData, x: Mat, y: Mat):
    """-tr(K_X K_Y) from the tangent blocks."""
    kx = kostant_blocks(orbit, x).tangent_block
    ky = kostant_blocks(orbit, y).tangent_block
    value = -trace_form(kx, ky)
    return value if orbit.mode == ScalarMode.EXACT else float(value)


def phi_orbit_gram(orbit: OrbitData, sub: Optional[Subspace] = None) -> Mat:
    sub = sub or orbit.g_sub.basis

    def compute():
        blocks = [kostant_blocks(orbit, x).tangent_block for x in sub.basis]
        d = len(blocks)
        gram = zeros((d, d), sub.mode)
        for i in range(d):
            for j in range(i, d):
                gram[i, j] = gram[j, i] = -trace_form(blocks[i], blocks[j])
        return gram

    return gram_cache.get_or_compute("phi_orbit", orbit, sub, compute)


def psi_form(model: ChartedHomSpace, m_bar: Subspace, h_bar: Optional[Subspace] = None) -> GramForm:
    """phi_bar on h̄ × h̄, g_o(X*_o, Y*_o) on m̄ × m̄, zero across; a form on ḡ = h̄ ⊕ m̄."""
    mode = m_bar.mode
    if h_bar is None:
        h_bar = EvaluationMap.build(model, model.algebra.basis.to_mode(mode)).kernel()
    if not is_direct(h_bar, m_bar) or h_bar.dim + m_bar.dim != model.algebra.dim:
        raise SubspaceError("m̄ is not a complement of h̄ in the ambient algebra")
    phi_h = phi_bar_gram(model, h_bar)
    pulled = identify_m_with_tangent(model, m_bar).pullback(model.metric_at(mode=mode)).gram

    a, b = h_bar.dim, m_bar.dim
    gram = zeros((a + b, a + b), mode)
    gram[:a, :a] = phi_h
    gram[a:, a:] = pulled
    joint = Subspace(shape=m_bar.shape, basis=h_bar.basis + m_bar.basis, mode=mode, cutoff=m_bar.cutoff)
    form = GramForm(joint, gram)
    if not form.is_positive_definite():
        raise DegenerateFormError(f"psi is not positive definite (min eigenvalue {form.min_eigenvalue():.3e})")
    logger.debug("Assembled psi", h_bar_dim=a, m_bar_dim=b, min_eigenvalue=form.min_eigenvalue())
    return form


def psi_invariance_residual(psi: GramForm, h_bar: Subspace, samples: int = 3, seed: int = 0) -> float:
    """max |psi(Ad_a X, Ad_a Y) - psi(X, Y)| over basis pairs and a = exp(tZ), Z ∈ h̄."""
    if h_bar.dim == 0:
        return 0.0
    basis = psi.basis.to_mode(ScalarMode.FLOAT)
    float_psi = GramForm(basis, as_float(psi.gram))
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        coeffs = rng.standard_normal(h_bar.dim)
        z = sum(c * as_float(b) for c, b in zip(coeffs, h_bar.basis))
        for t in (1.0, -0.5):
            images = [adjoint_exp(z, x, t) for x in basis.basis]
            coords = np.vstack([basis.coordinates(y) for y in images])
            moved = coords @ float_psi.gram @ coords.T
            worst = max(worst, float(np.max(np.abs(moved - float_psi.gram))))
    return worst
