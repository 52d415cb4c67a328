"""
Scalar modes for dense matrices.

Exact matrices are numpy object arrays holding ``fractions.Fraction``
entries; float matrices are plain float64 arrays. Elimination in exact mode
is delegated to sympy.
"""
from enum import Enum
from fractions import Fraction
from typing import Iterable, Union

import numpy as np
import sympy

from src.utils.error_handler import ModeMixError

Mat = np.ndarray
ScalarLike = Union[int, Fraction, float, sympy.Basic, str]


class ScalarMode(str, Enum):
    EXACT = "exact"
    FLOAT = "float"


def to_fraction(value: ScalarLike) -> Fraction:
    """Convert an exact scalar to a Fraction; floats are rejected."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (bool, np.bool_)):
        return Fraction(int(value))
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, sympy.Basic):
        if not value.is_Rational and not value.is_Float:
            value = sympy.simplify(value)
        if not value.is_Rational:
            raise ModeMixError(f"value {value} is not rational")
        return Fraction(int(value.p), int(value.q))
    raise ModeMixError(f"cannot use {type(value).__name__} value {value!r} in exact mode")


def mode_of(arr: Mat) -> ScalarMode:
    return ScalarMode.EXACT if arr.dtype == object else ScalarMode.FLOAT


def as_exact(values) -> Mat:
    arr = np.asarray(values, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = to_fraction(v)
    return out


def as_float(values) -> Mat:
    arr = np.asarray(values)
    if arr.dtype == object:
        return np.vectorize(float, otypes=[float])(arr) if arr.size else np.zeros(arr.shape)
    return arr.astype(float)


def convert(values, mode: ScalarMode) -> Mat:
    return as_exact(values) if mode == ScalarMode.EXACT else as_float(values)


def zeros(shape, mode: ScalarMode) -> Mat:
    if mode == ScalarMode.EXACT:
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out
    return np.zeros(shape)


def identity(n: int, mode: ScalarMode) -> Mat:
    out = zeros((n, n), mode)
    for i in range(n):
        out[i, i] = Fraction(1) if mode == ScalarMode.EXACT else 1.0
    return out


def common_mode(arrays: Iterable[Mat]) -> ScalarMode:
    """Mode shared by all arrays; mixing raises ModeMixError."""
    modes = {mode_of(np.asarray(a)) for a in arrays}
    if len(modes) > 1:
        raise ModeMixError("exact and float matrices mixed in one expression")
    return modes.pop() if modes else ScalarMode.FLOAT


def max_abs(arr: Mat) -> float:
    arr = np.asarray(arr)
    if arr.size == 0:
        return 0.0
    return float(np.max(np.abs(as_float(arr))))


def is_zero(arr: Mat, tol: float = 0.0) -> bool:
    if mode_of(np.asarray(arr)) == ScalarMode.EXACT:
        return all(v == 0 for v in np.asarray(arr).flat)
    return max_abs(arr) <= tol


def to_sympy(arr: Mat) -> sympy.Matrix:
    arr = np.atleast_2d(np.asarray(arr, dtype=object))
    return sympy.Matrix(arr.shape[0], arr.shape[1],
                        [sympy.Rational(v.numerator, v.denominator) for v in arr.flat])


def from_sympy(mat: sympy.Matrix) -> Mat:
    return as_exact(np.array(mat.tolist(), dtype=object).reshape(mat.shape))


def format_fraction(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
