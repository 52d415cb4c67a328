"""
Matrix exponential and adjoint action.

Float mode uses scipy's scaling-and-squaring Pade approximant. Exact mode
sums a truncated Taylor series over the rationals and reports a bound on the
discarded tail.
"""
import math
from fractions import Fraction
from typing import NamedTuple

import numpy as np
import scipy.linalg

from src.config.settings import settings
from src.linalg.scalar import Mat, ScalarMode, as_float, identity, max_abs, mode_of


class ExactExponential(NamedTuple):
    value: Mat
    remainder_bound: float


def expm_exact(x: Mat, terms: int = None) -> ExactExponential:
    """Truncated series sum_{k<terms} X^k / k! with a tail bound in the max-row-sum norm."""
    terms = terms or settings.exact_series_terms
    x = np.asarray(x)
    n = x.shape[0]
    total = identity(n, ScalarMode.EXACT)
    power = identity(n, ScalarMode.EXACT)
    for k in range(1, terms):
        power = (power @ x) * Fraction(1, k)
        total = total + power
    norm = float(np.max(np.sum(np.abs(as_float(x)), axis=1))) if n else 0.0
    # Lagrange tail of the exponential series
    bound = norm ** terms / math.factorial(terms) * math.exp(norm)
    return ExactExponential(total, bound)


def expm(x: Mat) -> Mat:
    x = np.asarray(x)
    if mode_of(x) == ScalarMode.EXACT:
        return expm_exact(x).value
    return scipy.linalg.expm(x)


def adjoint(g: Mat, y: Mat) -> Mat:
    """Ad_g Y = g Y g^{-1} (float)."""
    g = as_float(g)
    return g @ as_float(y) @ np.linalg.inv(g)


def adjoint_exp(x: Mat, y: Mat, t: float = 1.0) -> Mat:
    """Ad_{exp(tX)} Y in float arithmetic."""
    g = scipy.linalg.expm(t * as_float(x))
    return adjoint(g, y)

