"""Adjoint invariance of a subspace under an isotropy algebra and its group"""
import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import List, Optional

import numpy as np

from src.config.settings import settings
from src.lie.algebra import MatrixLieAlgebra, bracket
from src.lie.exponential import adjoint_exp, expm_exact
from src.linalg.scalar import Mat, ScalarMode, as_float
from src.linalg.subspace import Subspace
from src.utils.logger import get_logger

logger = get_logger()

CONJUGATION_TIMES = (Fraction(1), Fraction(-1), Fraction(1, 2), Fraction(-1, 2))


@dataclass
class InvarianceReport:
    bracket_residual: float
    conjugation_residual: float
    remainder_bound: float
    bracket_invariant: bool
    invariant: bool
    samples: int

    def to_dict(self) -> dict:
        return asdict(self)


def _sample_elements(h_sub: Subspace, count: int, seed: int) -> List[Mat]:
    """Seeded integer combinations of the basis, rescaled to max-row-sum norm <= 1."""
    rng = np.random.default_rng(seed)
    samples = []
    for _ in range(count):
        coeffs = rng.integers(-2, 3, size=h_sub.dim)
        if not coeffs.any():
            coeffs[0] = 1
        x = h_sub.element([int(c) for c in coeffs])
        scale = max(1, math.ceil(float(np.max(np.sum(np.abs(as_float(x)), axis=1)))))
        samples.append(x * Fraction(1, scale) if h_sub.mode == ScalarMode.EXACT else x / scale)
    return samples


def ad_invariance_check(h_sub: Subspace, m_sub: Subspace, alg: MatrixLieAlgebra,
                        group_samples: Optional[int] = None, seed: int = 0,
                        tol: Optional[float] = None) -> InvarianceReport:
    """Test [h, m] ⊆ m and Ad(exp(tX)) m ⊆ m for sampled X in h, t in {±1, ±1/2}."""
    group_samples = settings.group_samples if group_samples is None else group_samples
    tol = settings.residual_gate if tol is None else tol
    exact = alg.mode == ScalarMode.EXACT

    bracket_residual = 0.0
    bracket_ok = True
    for x in h_sub.basis:
        for y in m_sub.basis:
            z = bracket(x, y)
            bracket_residual = max(bracket_residual, m_sub.residual(z))
            bracket_ok = bracket_ok and m_sub.contains(z)

    conj_residual = 0.0
    remainder = 0.0
    samples = _sample_elements(h_sub, group_samples, seed) if h_sub.dim else []
    float_m = m_sub.to_mode(ScalarMode.FLOAT)
    for x in samples:
        for t in CONJUGATION_TIMES:
            if exact:
                g = expm_exact(x * t)
                g_inv = expm_exact(x * (-t))
                remainder = max(remainder, g.remainder_bound, g_inv.remainder_bound)
                images = [g.value @ y @ g_inv.value for y in m_sub.basis]
            else:
                images = [adjoint_exp(x, y, float(t)) for y in m_sub.basis]
            for image in images:
                residual = m_sub.residual(image) if exact else float_m.residual(image)
                conj_residual = max(conj_residual, residual)

    invariant = bracket_ok and conj_residual <= tol + 10 * remainder
    logger.debug("Ad-invariance check", h_dim=h_sub.dim, m_dim=m_sub.dim,
                 bracket_residual=bracket_residual, conjugation_residual=conj_residual)
    return InvarianceReport(
        bracket_residual=float(bracket_residual),
        conjugation_residual=float(conj_residual),
        remainder_bound=float(remainder),
        bracket_invariant=bool(bracket_ok),
        invariant=bool(invariant),
        samples=len(samples),
    )
