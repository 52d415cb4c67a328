"""Symmetric bilinear forms given by a Gram matrix on a subspace basis"""
from dataclasses import dataclass

import numpy as np

from src.linalg.scalar import Mat, ScalarMode, as_float, convert, max_abs, to_sympy
from src.linalg.subspace import Subspace
from src.utils.error_handler import ShapeMismatchError


@dataclass(frozen=True, eq=False)
class GramForm:
    basis: Subspace
    gram: Mat

    def __post_init__(self):
        gram = convert(self.gram, self.basis.mode)
        if gram.shape != (self.basis.dim, self.basis.dim):
            raise ShapeMismatchError(f"gram {gram.shape} does not match basis of dim {self.basis.dim}")
        object.__setattr__(self, "gram", gram)

    @property
    def mode(self) -> ScalarMode:
        return self.basis.mode

    def asymmetry(self) -> float:
        return max_abs(self.gram - self.gram.T)

    def is_symmetric(self, tol: float = 1e-12) -> bool:
        if self.mode == ScalarMode.EXACT:
            return self.asymmetry() == 0
        return self.asymmetry() <= tol

    def __call__(self, x: Mat, y: Mat):
        return self.basis.coordinates(x) @ self.gram @ self.basis.coordinates(y)

    def restrict(self, sub: Subspace) -> "GramForm":
        if sub.dim == 0:
            return GramForm(sub, np.zeros((0, 0)) if sub.mode == ScalarMode.FLOAT else
                            np.empty((0, 0), dtype=object))
        coords = np.vstack([self.basis.coordinates(x) for x in sub.basis])
        return GramForm(sub, coords @ self.gram @ coords.T)

    def min_eigenvalue(self) -> float:
        if self.basis.dim == 0:
            return float("inf")
        return float(np.linalg.eigvalsh(as_float(self.gram)).min())

    def is_positive_definite(self) -> bool:
        if self.basis.dim == 0:
            return True
        if self.mode == ScalarMode.EXACT:
            return bool(to_sympy(self.gram).is_positive_definite)
        try:
            np.linalg.cholesky(as_float(self.gram))
        except np.linalg.LinAlgError:
            return False
        return True
