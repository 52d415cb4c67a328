"""Cartan-Killing trace form on so(k)"""
from fractions import Fraction
from typing import Callable

import numpy as np

from src.config.settings import settings
from src.linalg.scalar import Mat, ScalarMode, common_mode, max_abs
from src.utils.error_handler import ShapeMismatchError
from src.utils.logger import get_logger

logger = get_logger()


def killing_coefficient(k: int) -> int:
    """Multiple of trace(AB) used as the invariant form on so(k).

    The Killing form of so(k) is (k - 2) trace(AB); for k <= 2 it vanishes and
    -trace(AB) is used instead.
    """
    if k <= 2:
        return -1
    return k - 2


def skew_residual(a: Mat) -> float:
    return max_abs(np.asarray(a) + np.asarray(a).T)


def killing_form_so(k: int, tol: float = None) -> Callable[[Mat, Mat], object]:
    tol = settings.skew_gate if tol is None else tol
    coefficient = killing_coefficient(k)
    if k <= 2:
        logger.warning("Killing form degenerate on so(k); using -trace(AB)", k=k)
    elif k == 4:
        logger.warning("so(4) carries a two-dimensional family of invariant forms; using the trace multiple")

    def form(a: Mat, b: Mat):
        a, b = np.asarray(a), np.asarray(b)
        if a.shape != (k, k) or b.shape != (k, k):
            raise ShapeMismatchError(f"so({k}) form applied to {a.shape} and {b.shape}")
        mode = common_mode([a, b])
        for x in (a, b):
            if skew_residual(x) > tol:
                raise ShapeMismatchError(f"matrix is not skew (residual {skew_residual(x):.3e})")
        value = np.trace(a @ b)
        if mode == ScalarMode.EXACT:
            return Fraction(coefficient) * value
        return float(coefficient * value)

    return form


def trace_form(a: Mat, b: Mat):
    """trace(AB) without the skewness check (any frame, any endomorphism)."""
    return np.trace(np.asarray(a) @ np.asarray(b))


def killing_form_oracle(algebra) -> Mat:
    """trace(ad_A ad_B) Gram matrix from structure constants (test oracle)."""
    c = np.asarray(algebra.structure_constants)
    # ad_{B_i} has matrix ad[i][k, j] = c[i, j, k]
    return np.tensordot(c, c, axes=([1, 2], [2, 1]))
