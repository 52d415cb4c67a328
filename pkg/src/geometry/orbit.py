"""
Orbits through the base point and the evaluation map X ↦ X*_o.

Tangent vectors at o are 1-D arrays in the chart frame; spans of them reuse
``Subspace`` with shape ``(dim,)``.
"""
from dataclasses import dataclass
from functools import cached_property
from typing import List, Sequence

import numpy as np

from src.geometry.model import ChartedHomSpace
from src.lie.algebra import MatrixLieAlgebra
from src.linalg.forms import GramForm
from src.linalg.scalar import Mat, ScalarMode, convert, from_sympy, identity, to_sympy
from src.linalg.subspace import Subspace, null_space_rows, orth_complement, span_reduce, zero_space
from src.utils.error_handler import PreimageError, SubspaceError
from src.utils.logger import get_logger

logger = get_logger()


def vector_space(vectors: Sequence[Mat], dim: int, mode: ScalarMode) -> Subspace:
    return span_reduce([convert(v, mode) for v in vectors], shape=(dim,), mode=mode)


def full_space(dim: int, mode: ScalarMode) -> Subspace:
    return Subspace(shape=(dim,), basis=tuple(identity(dim, mode)), mode=mode)


def inverse(mat: Mat, mode: ScalarMode) -> Mat:
    if mode == ScalarMode.EXACT:
        return from_sympy(to_sympy(mat).inv())
    return np.linalg.inv(mat)


def gram_schmidt(vectors: Sequence[Mat], gram: Mat, normalize: bool = False) -> List[Mat]:
    """Orthogonalize in order w.r.t. ``gram``; normalization needs float entries."""
    out: List[Mat] = []
    for v in vectors:
        w = v
        for u in out:
            w = w - ((w @ gram @ u) / (u @ gram @ u)) * u
        out.append(w)
    if normalize:
        out = [u / np.sqrt(float(u @ gram @ u)) for u in out]
    return out


@dataclass(frozen=True, eq=False)
class EvaluationMap:
    """X ↦ X*_o restricted to a subspace of the algebra."""
    model: ChartedHomSpace
    sub: Subspace
    matrix: Mat  # row i = (sub.basis[i])*_o

    @classmethod
    def build(cls, model: ChartedHomSpace, sub: Subspace) -> "EvaluationMap":
        n = model.dim
        rows = [model.fundamental_field(x) for x in sub.basis]
        matrix = np.vstack(rows) if rows else convert(np.zeros((0, n)), sub.mode)
        return cls(model, sub, matrix)

    @cached_property
    def image(self) -> Subspace:
        return vector_space(list(self.matrix), self.model.dim, self.sub.mode)

    @property
    def injective(self) -> bool:
        return self.image.dim == self.sub.dim

    def __call__(self, x: Mat) -> Mat:
        return self.sub.coordinates(x) @ self.matrix

    def kernel(self) -> Subspace:
        """{X in sub : X*_o = 0}."""
        if self.sub.dim == 0:
            return zero_space(self.sub.shape, self.sub.mode)
        null = null_space_rows(self.matrix.T, self.sub.mode, self.sub.cutoff)
        return span_reduce([self.sub.element(z) for z in null], shape=self.sub.shape, mode=self.sub.mode)

    def preimage(self, u: Mat) -> Mat:
        """The unique X in ``sub`` with X*_o = u."""
        if not self.injective:
            raise PreimageError(f"evaluation at o is not injective on a {self.sub.dim}-dim subspace "
                                f"(image dim {self.image.dim})")
        if self.sub.dim == 0:
            if any(float(abs(c)) > 0 for c in np.asarray(u).flat):
                raise PreimageError("nonzero vector has no preimage in the zero subspace")
            return convert(np.zeros(self.sub.shape), self.sub.mode)
        rows = Subspace(shape=(self.model.dim,), basis=tuple(self.matrix), mode=self.sub.mode,
                        cutoff=self.sub.cutoff)
        try:
            coeffs = rows.coordinates(convert(u, self.sub.mode))
        except SubspaceError as e:
            raise PreimageError(f"vector is not X*_o for any X in the subspace: {e}") from e
        return self.sub.element(coeffs)

    def pullback(self, gram_o: Mat) -> GramForm:
        """φ*g_o on ``sub``: Gram matrix of g_o(X*_o, Y*_o)."""
        return GramForm(self.sub, self.matrix @ gram_o @ self.matrix.T)


def identify_m_with_tangent(model: ChartedHomSpace, m_bar: Subspace) -> EvaluationMap:
    """The bijection m̄ → T_oM̄, X ↦ X*_o."""
    ev = EvaluationMap.build(model, m_bar)
    if not ev.injective or ev.image.dim != model.dim:
        raise PreimageError(f"{model.name}: X ↦ X*_o restricted to m̄ has rank {ev.image.dim}, "
                            f"needs a bijection onto dim {model.dim}")
    return ev


@dataclass(frozen=True, eq=False)
class OrbitData:
    """The orbit M = G·o with its tangent and normal spaces at o."""
    ambient: ChartedHomSpace
    g_sub: MatrixLieAlgebra
    tangent: Subspace
    normal: Subspace

    @property
    def mode(self) -> ScalarMode:
        return self.g_sub.mode

    @property
    def dim(self) -> int:
        return self.tangent.dim

    @property
    def codim(self) -> int:
        return self.normal.dim

    @property
    def tangent_basis_at_o(self) -> List[Mat]:
        return list(self.tangent.basis)

    @property
    def normal_basis_at_o(self) -> List[Mat]:
        return list(self.normal.basis)

    @cached_property
    def metric_o(self) -> Mat:
        return self.ambient.metric_at(mode=self.mode)

    def adapted_frame(self, orthonormal: bool = False) -> Mat:
        """Columns u_1..u_m tangent then u_{m+1}..u_n normal, g_o-orthogonal."""
        g = self.metric_o if not orthonormal else np.asarray(self.metric_o, dtype=float)
        vectors = self.tangent_basis_at_o + self.normal_basis_at_o
        if orthonormal:
            vectors = [np.asarray(v, dtype=float) for v in vectors]
        cols = gram_schmidt(vectors, g, normalize=orthonormal)
        return np.stack(cols, axis=1)

    def tangent_projector(self) -> Mat:
        """g_o-orthogonal projection onto T_oM in the chart frame."""
        frame = self.adapted_frame()
        m = self.dim
        coords = inverse(frame, self.mode)
        return frame[:, :m] @ coords[:m, :]


def build_orbit(model: ChartedHomSpace, g_sub: MatrixLieAlgebra) -> OrbitData:
    """T_oM = span{X*_o : X ∈ g} and its g_o-orthogonal complement."""
    mode = g_sub.mode
    ev = EvaluationMap.build(model, g_sub.basis)
    tangent = ev.image
    full = full_space(model.dim, mode)
    normal = orth_complement(tangent, full, GramForm(full, model.metric_at(mode=mode))).space
    if tangent.dim + normal.dim != model.dim:
        raise SubspaceError(f"{model.name}: tangent ({tangent.dim}) and normal ({normal.dim}) "
                            f"spaces do not fill dim {model.dim}")
    logger.info("Built orbit", model=model.name, orbit_dim=tangent.dim, codim=normal.dim,
                g_dim=g_sub.dim, mode=mode.value)
    return OrbitData(model, g_sub, tangent, normal)
