"""Matrix Lie algebras as bracket-closed spans of square matrices"""
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Optional, Sequence

import numpy as np

from src.linalg.scalar import Mat, ScalarMode, common_mode, max_abs, zeros
from src.linalg.subspace import Subspace, from_basis, is_subspace
from src.utils.error_handler import ShapeMismatchError, SubspaceError


def bracket(x: Mat, y: Mat) -> Mat:
    """Commutator XY - YX."""
    x, y = np.asarray(x), np.asarray(y)
    if x.shape != y.shape or x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise ShapeMismatchError(f"bracket of {x.shape} and {y.shape} matrices")
    common_mode([x, y])
    return x @ y - y @ x


@dataclass(frozen=True, eq=False)
class MatrixLieAlgebra:
    name: str
    basis: Subspace

    def __post_init__(self):
        if len(self.basis.shape) != 2 or self.basis.shape[0] != self.basis.shape[1]:
            raise ShapeMismatchError(f"Lie algebra of non-square {self.basis.shape} matrices")
        _ = self.structure_constants

    @classmethod
    def from_matrices(cls, name: str, matrices: Sequence[Mat], mode: Optional[ScalarMode] = None):
        return cls(name, from_basis(matrices, mode))

    @property
    def n_ambient(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.dim

    @property
    def mode(self) -> ScalarMode:
        return self.basis.mode

    @cached_property
    def structure_constants(self) -> Mat:
        """c[i, j, k] with [B_i, B_j] = sum_k c[i, j, k] B_k; raises if not closed."""
        d = self.dim
        c = zeros((d, d, d), self.mode)
        for i, bi in enumerate(self.basis.basis):
            for j in range(i + 1, d):
                z = bracket(bi, self.basis.basis[j])
                if not self.basis.contains(z):
                    raise SubspaceError(
                        f"{self.name}: bracket of basis elements {i},{j} leaves the span "
                        f"(residual {self.basis.residual(z):.3e})")
                coords = self.basis.coordinates(z)
                c[i, j] = coords
                c[j, i] = -coords
        return c

    def jacobi_residual(self) -> float:
        """Max |Jacobi identity| over basis triples, evaluated on structure constants."""
        c = self.structure_constants
        if self.dim == 0:
            return 0.0
        # sum_m c[i,j,m] c[m,k,l] + cyclic
        t1 = np.tensordot(c, c, axes=([2], [0]))
        total = t1 + np.transpose(t1, (1, 2, 0, 3)) + np.transpose(t1, (2, 0, 1, 3))
        return max_abs(total)

    def element(self, coeffs) -> Mat:
        return self.basis.element(coeffs)

    def coordinates(self, x: Mat) -> Mat:
        return self.basis.coordinates(x)

    def contains(self, x: Mat) -> bool:
        return self.basis.contains(x)

    def subalgebra(self, name: str, sub: Subspace) -> "MatrixLieAlgebra":
        if not is_subspace(sub, self.basis):
            raise SubspaceError(f"{name} is not contained in {self.name}")
        return MatrixLieAlgebra(name, sub)


class SubalgebraCheck(NamedTuple):
    closed: bool
    residual: float


def is_subalgebra(sub: Subspace, amb: MatrixLieAlgebra) -> SubalgebraCheck:
    """Whether [x, y] stays in ``sub`` for all basis pairs, with the worst residual."""
    if not is_subspace(sub, amb.basis):
        raise SubspaceError(f"subspace is not inside {amb.name}")
    worst = 0.0
    closed = True
    for i, x in enumerate(sub.basis):
        for y in sub.basis[i + 1:]:
            z = bracket(x, y)
            worst = max(worst, sub.residual(z))
            closed = closed and sub.contains(z)
    return SubalgebraCheck(closed, worst)
