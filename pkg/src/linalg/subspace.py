"""
Spans of square matrices and the subspace operations built on them.

Matrices are vectorized row-major. Exact subspaces eliminate over the
rationals with sympy; float subspaces decide rank with a relative
singular-value cutoff.
"""
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple, Optional, Sequence

import numpy as np
import scipy.linalg

from src.config.settings import settings
from src.linalg.scalar import (
    Mat,
    ScalarMode,
    as_float,
    common_mode,
    convert,
    from_sympy,
    identity,
    max_abs,
    to_sympy,
    zeros,
)
from src.utils.error_handler import ShapeMismatchError, SubspaceError
from src.utils.logger import get_logger

logger = get_logger()


def vec(x: Mat) -> Mat:
    return np.asarray(x).reshape(-1)


@dataclass(frozen=True, eq=False)
class Subspace:
    """Linearly independent basis of a space of ``shape`` matrices."""
    shape: tuple
    basis: tuple
    mode: ScalarMode
    cutoff: float = field(default_factory=lambda: settings.rank_cutoff)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def ambient_dim(self) -> int:
        return int(np.prod(self.shape))

    @cached_property
    def matrix(self) -> Mat:
        """Stacked vectorizations, one basis element per row."""
        if not self.basis:
            return zeros((0, self.ambient_dim), self.mode)
        return np.vstack([vec(b) for b in self.basis])

    @cached_property
    def _solver(self):
        if self.mode == ScalarMode.EXACT:
            if self.dim == 0:
                return (), zeros((0, 0), self.mode)
            _, pivots = to_sympy(self.matrix).rref()
            block = to_sympy(self.matrix[:, list(pivots)])
            return tuple(pivots), from_sympy(block.inv())
        return None, np.linalg.pinv(self.matrix) if self.dim else np.zeros((self.ambient_dim, 0))

    def _raw_coordinates(self, x: Mat):
        v = convert(vec(x), self.mode)
        if v.size != self.ambient_dim:
            raise ShapeMismatchError(f"expected {self.shape} matrix, got {np.shape(x)}")
        pivots, inverse = self._solver
        if self.mode == ScalarMode.EXACT:
            coeffs = v[list(pivots)] @ inverse if self.dim else zeros((0,), self.mode)
        else:
            coeffs = v @ inverse
        recon = coeffs @ self.matrix if self.dim else zeros(v.shape, self.mode)
        return coeffs, v - recon

    def residual(self, x: Mat) -> float:
        """Size of the part of x outside the span (0 iff contained, exact mode)."""
        return max_abs(self._raw_coordinates(x)[1])

    def contains(self, x: Mat, tol: Optional[float] = None) -> bool:
        _, rest = self._raw_coordinates(x)
        if self.mode == ScalarMode.EXACT:
            return all(r == 0 for r in rest)
        tol = self.cutoff * 100 if tol is None else tol
        return max_abs(rest) <= tol * max(1.0, max_abs(x))

    def coordinates(self, x: Mat, tol: Optional[float] = None) -> Mat:
        if not self.contains(x, tol):
            raise SubspaceError(f"matrix lies outside the span (residual {self.residual(x):.3e})")
        return self._raw_coordinates(x)[0]

    def element(self, coeffs: Sequence) -> Mat:
        coeffs = convert(coeffs, self.mode)
        if len(coeffs) != self.dim:
            raise ShapeMismatchError(f"need {self.dim} coefficients, got {len(coeffs)}")
        out = zeros(self.shape, self.mode)
        for c, b in zip(coeffs, self.basis):
            out = out + c * b
        return out

    def to_mode(self, mode: ScalarMode) -> "Subspace":
        """Same basis, entries converted; basis order is preserved."""
        if mode == self.mode:
            return self
        return Subspace(shape=self.shape, basis=tuple(convert(b, mode) for b in self.basis),
                        mode=mode, cutoff=self.cutoff)


def _rank_rows(rows: Mat, mode: ScalarMode, cutoff: float) -> Mat:
    """Independent rows spanning the row space of ``rows``."""
    if rows.shape[0] == 0:
        return rows
    if mode == ScalarMode.EXACT:
        reduced, pivots = to_sympy(rows).rref()
        return from_sympy(reduced[:len(pivots), :]) if pivots else zeros((0, rows.shape[1]), mode)
    _, s, vt = np.linalg.svd(rows, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        return np.zeros((0, rows.shape[1]))
    rank = int(np.sum(s > cutoff * s[0]))
    return vt[:rank]


def span_reduce(vectors: Sequence[Mat], shape: Optional[tuple] = None,
                mode: Optional[ScalarMode] = None, cutoff: Optional[float] = None) -> Subspace:
    """Independent basis of span(vectors): echelon rows (exact) or right singular vectors (float)."""
    vectors = [np.asarray(v) for v in vectors]
    cutoff = settings.rank_cutoff if cutoff is None else cutoff
    if vectors:
        shapes = {v.shape for v in vectors}
        if len(shapes) > 1:
            raise ShapeMismatchError(f"span of matrices with shapes {sorted(shapes)}")
        shape = shape or vectors[0].shape
        if shape != vectors[0].shape:
            raise ShapeMismatchError(f"matrices of shape {vectors[0].shape} in a {shape} space")
        mode = mode or common_mode(vectors)
    elif shape is None:
        raise ShapeMismatchError("empty span needs an explicit shape")
    mode = mode or ScalarMode.FLOAT
    rows = (np.vstack([vec(convert(v, mode)) for v in vectors])
            if vectors else zeros((0, int(np.prod(shape))), mode))
    reduced = _rank_rows(rows, mode, cutoff)
    basis = tuple(r.reshape(shape) for r in reduced)
    return Subspace(shape=tuple(shape), basis=basis, mode=mode, cutoff=cutoff)


def from_basis(basis: Sequence[Mat], mode: Optional[ScalarMode] = None) -> Subspace:
    """Subspace keeping the given basis (checked for independence)."""
    basis = [np.asarray(b) for b in basis]
    mode = mode or common_mode(basis)
    reduced = span_reduce(basis, mode=mode)
    if reduced.dim != len(basis):
        raise SubspaceError(f"basis of {len(basis)} matrices has rank {reduced.dim}")
    return Subspace(shape=basis[0].shape, basis=tuple(convert(b, mode) for b in basis), mode=mode)


def zero_space(shape: tuple, mode: ScalarMode) -> Subspace:
    return Subspace(shape=tuple(shape), basis=(), mode=mode)


def _check_compatible(a: Subspace, b: Subspace):
    if a.shape != b.shape:
        raise ShapeMismatchError(f"ambient mismatch {a.shape} vs {b.shape}")
    common_mode([a.matrix, b.matrix])


def null_space_rows(mat: Mat, mode: ScalarMode, cutoff: float) -> Mat:
    """Basis of {z : mat @ z = 0}, one vector per row."""
    if mode == ScalarMode.EXACT:
        if mat.shape[0] == 0:
            return identity(mat.shape[1], mode)
        vectors = to_sympy(mat).nullspace()
        if not vectors:
            return zeros((0, mat.shape[1]), mode)
        return np.vstack([from_sympy(v.T) for v in vectors])
    if mat.shape[0] == 0:
        return np.eye(mat.shape[1])
    return scipy.linalg.null_space(as_float(mat), rcond=cutoff).T


def sum_spaces(*spaces: Subspace) -> Subspace:
    first = spaces[0]
    for s in spaces[1:]:
        _check_compatible(first, s)
    return span_reduce([b for s in spaces for b in s.basis], shape=first.shape, mode=first.mode)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    """Basis of a ∩ b from the null space of the stacked bases."""
    _check_compatible(a, b)
    if a.dim == 0 or b.dim == 0:
        return zero_space(a.shape, a.mode)
    stacked = np.vstack([a.matrix, -b.matrix])
    null = null_space_rows(stacked.T, a.mode, a.cutoff)
    vectors = [(z[:a.dim] @ a.matrix).reshape(a.shape) for z in null]
    return span_reduce(vectors, shape=a.shape, mode=a.mode)


def is_subspace(a: Subspace, b: Subspace, tol: Optional[float] = None) -> bool:
    _check_compatible(a, b)
    return all(b.contains(x, tol) for x in a.basis)


def span_equal(a: Subspace, b: Subspace, tol: Optional[float] = None) -> bool:
    return a.dim == b.dim and is_subspace(a, b, tol) and is_subspace(b, a, tol)


def is_direct(*spaces: Subspace) -> bool:
    return sum_spaces(*spaces).dim == sum(s.dim for s in spaces)


class Complement(NamedTuple):
    space: Subspace
    nondegenerate: bool


def orth_complement(sub: Subspace, within: Subspace, form) -> Complement:
    """{X in within : form(X, Y) = 0 for all Y in sub}, with a nondegeneracy flag.

    ``form`` is a GramForm whose basis spans ``within``.
    """
    _check_compatible(sub, within)
    if not span_equal(form.basis, within):
        raise SubspaceError("form is not defined on the given ambient subspace")
    if not is_subspace(sub, within):
        raise SubspaceError("subspace is not contained in the ambient subspace")
    if sub.dim == 0:
        return Complement(within, True)
    coords = np.vstack([form.basis.coordinates(y) for y in sub.basis])
    constraints = coords @ form.gram
    null = null_space_rows(constraints, within.mode, within.cutoff)
    vectors = [(z @ form.basis.matrix).reshape(within.shape) for z in null]
    space = span_reduce(vectors, shape=within.shape, mode=within.mode)

    restricted = constraints @ coords.T
    if within.mode == ScalarMode.EXACT:
        rank = to_sympy(restricted).rank()
    else:
        rank = np.linalg.matrix_rank(restricted, tol=within.cutoff * max(1.0, max_abs(restricted)))
    nondegenerate = rank == sub.dim
    if not nondegenerate:
        logger.warning("Form is degenerate on the complemented subspace",
                       sub_dim=sub.dim, rank=int(rank), complement_dim=space.dim)
    return Complement(space, nondegenerate)


def project(x: Mat, onto: Subspace, along: Subspace) -> Mat:
    """Component of x in ``onto`` for the splitting onto ⊕ along."""
    _check_compatible(onto, along)
    if not is_direct(onto, along):
        raise SubspaceError("projection factors intersect non-trivially")
    joint = Subspace(shape=onto.shape, basis=onto.basis + along.basis, mode=onto.mode, cutoff=onto.cutoff)
    coeffs = joint.coordinates(x)
    if onto.dim == 0:
        return zeros(onto.shape, onto.mode)
    return onto.element(coeffs[:onto.dim])


def echelon(sub: Subspace) -> Subspace:
    """Basis in reduced row echelon form over the matrix coordinates."""
    if sub.dim == 0:
        return sub
    if sub.mode == ScalarMode.EXACT:
        return span_reduce(list(sub.basis), shape=sub.shape, mode=sub.mode)
    rows = sub.matrix
    _, _, pivots = scipy.linalg.qr(rows, pivoting=True)
    pivots = np.sort(pivots[:sub.dim])
    reduced = np.linalg.solve(rows[:, pivots], rows)
    reduced[np.abs(reduced) < sub.cutoff] = 0.0
    return Subspace(shape=sub.shape, basis=tuple(r.reshape(sub.shape) for r in reduced),
                    mode=sub.mode, cutoff=sub.cutoff)
