"""
The Levi-Civita connection ∇̄, the canonical connection ∇̃ of ḡ = h̄ ⊕ m̄, the
canonical G-connection D of g = h ⊕ m and their difference tensors.

At o: (∇̃_u B*)_o = -[X^u_m̄, B]*_o and (D_u B*)_o = -[X^u_m, B]*_o, where X^u is
the preimage of u. At p = g·o the same formulas are used with Ad_g m̄ and
Ad_g m. The tensors are S̄ = ∇̄ - ∇̃, S = ∇̄ - D and Γ = ∇̃ - D = S - S̄.
"""
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Callable, Optional

import numpy as np

from src.connections.frames import AlgebraCoordinates, PointData
from src.decomposition.result import DecompositionResult
from src.geometry.model import ChartedHomSpace
from src.geometry.orbit import EvaluationMap, identify_m_with_tangent
from src.kostant.forms import phi_bar_form
from src.lie.algebra import bracket
from src.linalg.scalar import Mat, ScalarMode, as_float, convert, identity, mode_of
from src.linalg.subspace import Subspace, intersect, orth_complement
from src.utils.error_handler import PreimageError, SubspaceError


class ConnectionKind(str, Enum):
    LEVI_CIVITA = "levi_civita"
    CANONICAL_AMBIENT = "canonical_ambient"
    ORBIT_D = "orbit_D"


@dataclass(frozen=True)
class Connection:
    """A_v at a point, with (∇_v Y)^k = v(Y^k) + A_v[k, j] Y^j."""
    kind: ConnectionKind
    coordinates: AlgebraCoordinates
    matrix: Callable[[PointData, np.ndarray], np.ndarray]


def levi_civita_matrix(pd: PointData, v: np.ndarray) -> np.ndarray:
    return np.einsum("kij,i->kj", pd.christoffel, v)


def contract_direction(tensor: np.ndarray, v: np.ndarray) -> np.ndarray:
    return np.einsum("kij,i->kj", tensor, v)


def preimage_in(model: ChartedHomSpace, u: Mat, sub: Subspace) -> Mat:
    """The unique X in ``sub`` with X*_o = u."""
    return EvaluationMap.build(model, sub).preimage(u)


def levi_civita_at_o(model: ChartedHomSpace, u: Mat, b: Mat) -> Mat:
    """(∇̄_u B*)_o = ∂_u B* + Γ(u, B*_o)."""
    field = model.fundamental_field(b)
    gamma = model.christoffel_at(mode=mode_of(np.asarray(b)))
    return model.field_jacobian(b) @ u + np.tensordot(np.tensordot(gamma, u, axes=(1, 0)), field, axes=(1, 0))


@dataclass(frozen=True)
class GammaTensor:
    """Γ_u on T_oM̄ with its generator W(u) = X^u_m - X^u_m̄ ∈ h̄."""
    u: Mat
    generator: Mat
    matrix: Mat  # columns Γ_u(e_j)
    in_h_bar: bool
    orthogonal_to_h: bool


class AmbientConnections:
    """∇̄ and ∇̃ for a reductive complement m̄, at o and along Ḡ."""

    def __init__(self, model: ChartedHomSpace, m_bar: Subspace):
        self.model = model
        self.m_bar = m_bar
        self.coordinates = AlgebraCoordinates(model)

    @property
    def mode(self) -> ScalarMode:
        return self.m_bar.mode

    @cached_property
    def _m_bar_map(self) -> EvaluationMap:
        return identify_m_with_tangent(self.model, self.m_bar)

    @cached_property
    def _h_bar(self) -> Subspace:
        return EvaluationMap.build(self.model, self.model.algebra.basis.to_mode(self.mode)).kernel()

    def preimage_m_bar(self, u: Mat) -> Mat:
        return self._m_bar_map.preimage(u)

    def nabla_tilde(self, u: Mat, b: Mat) -> Mat:
        """(∇̃_u B*)_o = -[X^u_m̄, B]*_o."""
        x = self.preimage_m_bar(u)
        return -self.model.fundamental_field(bracket(x, convert(b, self.mode)))

    def levi_civita(self, u: Mat, b: Mat) -> Mat:
        return levi_civita_at_o(self.model, convert(u, self.mode), convert(b, self.mode))

    def s_bar_tensor(self, u: Mat, b: Mat) -> Mat:
        """S̄_u(B*_o) = ∇̄_u B* - ∇̃_u B*."""
        return self.levi_civita(u, b) - self.nabla_tilde(u, b)

    def torsion_tilde(self, u: Mat, w: Mat) -> Mat:
        """T̃(u, w)_o = -([X^u_m̄, X^w_m̄]_m̄)*_o."""
        z = bracket(self.preimage_m_bar(u), self.preimage_m_bar(w))
        joint = Subspace(shape=self.m_bar.shape, basis=self._h_bar.basis + self.m_bar.basis,
                         mode=self.mode, cutoff=self.m_bar.cutoff)
        coeffs = joint.coordinates(z)
        return -self.model.fundamental_field(self.m_bar.element(coeffs[self._h_bar.dim:]))

    # ---- along the group ------------------------------------------------------

    @cached_property
    def _m_bar_rows(self) -> np.ndarray:
        return self.coordinates.rows(self.m_bar.to_mode(ScalarMode.FLOAT))

    def point(self, g: np.ndarray) -> PointData:
        return PointData(self.coordinates, as_float(g))

    def s_bar_field(self, pd: PointData) -> np.ndarray:
        """S̄ at p with Ad_g m̄, all directions."""
        directions = pd.directions(self._m_bar_rows)
        return pd.levi_civita_tensor() + pd.bracket_tensor(directions)

    def connection(self, kind: ConnectionKind) -> Connection:
        if kind == ConnectionKind.LEVI_CIVITA:
            return Connection(kind, self.coordinates, levi_civita_matrix)
        if kind == ConnectionKind.CANONICAL_AMBIENT:
            def matrix(pd: PointData, v: np.ndarray) -> np.ndarray:
                return levi_civita_matrix(pd, v) - contract_direction(self.s_bar_field(pd), v)
            return Connection(kind, self.coordinates, matrix)
        raise ValueError(f"{kind.value} needs an orbit decomposition")


class ReductiveConnections(AmbientConnections):
    """∇̄, ∇̃ and D for a decomposition, at o (exact when the decomposition is) and along G."""

    def __init__(self, model: ChartedHomSpace, decomp: DecompositionResult, m: Optional[Subspace] = None):
        self.decomp = decomp
        self.m = decomp.m if m is None else m
        super().__init__(model, decomp.m_bar.to_mode(self.m.mode))

    @property
    def mode(self) -> ScalarMode:
        return self.m.mode

    @cached_property
    def _m_map(self) -> EvaluationMap:
        return EvaluationMap.build(self.model, self.m)

    def preimage_m(self, u: Mat) -> Mat:
        if not self._m_map.image.contains(convert(u, self.mode)):
            raise PreimageError("direction is not tangent to the orbit")
        return self._m_map.preimage(u)

    def connection_d(self, u: Mat, b: Mat) -> Mat:
        """(D_u B*)_o = -[X^u_m, B]*_o for u tangent to the orbit."""
        x = self.preimage_m(u)
        return -self.model.fundamental_field(bracket(x, convert(b, self.mode)))

    def s_tensor(self, u: Mat, b: Mat) -> Mat:
        """S_u(B*_o) = ∇̄_u B* - D_u B*."""
        return self.levi_civita(u, b) - self.connection_d(u, b)

    def _chart_preimages(self):
        return [self.preimage_m_bar(e) for e in identity(self.model.dim, self.mode)]

    def gamma_tensor(self, u: Mat) -> GammaTensor:
        """Γ_u(B*_o) = [W(u), B]*_o, W(u) = X^u_m - X^u_m̄."""
        u = convert(u, self.mode)
        w = self.preimage_m(u) - self.preimage_m_bar(u)
        columns = [self.model.fundamental_field(bracket(w, b)) for b in self._chart_preimages()]
        matrix = np.stack(columns, axis=1)
        h_bar = self.decomp.h_bar.to_mode(self.mode)
        in_h_bar = h_bar.contains(w)
        orthogonal = False
        if in_h_bar:
            h_perp = orth_complement(self.decomp.h.to_mode(self.mode), h_bar,
                                     phi_bar_form(self.model, h_bar)).space
            orthogonal = h_perp.contains(w)
        return GammaTensor(u=u, generator=w, matrix=matrix, in_h_bar=bool(in_h_bar),
                           orthogonal_to_h=bool(orthogonal))

    def gamma_difference(self, u: Mat) -> Mat:
        """Columns ∇̃_u B_j* - D_u B_j* for B_j*_o = e_j."""
        columns = [self.nabla_tilde(u, b) - self.connection_d(u, b) for b in self._chart_preimages()]
        return np.stack(columns, axis=1)

    # ---- along the group ------------------------------------------------------

    @cached_property
    def _m_rows(self) -> np.ndarray:
        return self.coordinates.rows(self.m.to_mode(ScalarMode.FLOAT))

    @cached_property
    def _g_rows(self) -> np.ndarray:
        return self.coordinates.rows(self.decomp.orbit.g_sub.basis.to_mode(ScalarMode.FLOAT))

    def tangent_projector(self, pd: PointData) -> np.ndarray:
        return pd.tangent_projector(pd.transported_rows(self._g_rows))

    def s_field(self, pd: PointData) -> np.ndarray:
        """S at p with Ad_g m; directions projected onto T_pM."""
        projector = self.tangent_projector(pd)
        directions = pd.directions(self._m_rows, projector)
        lc = np.einsum("kij,il->klj", pd.levi_civita_tensor(), projector)
        return lc + pd.bracket_tensor(directions)

    def gamma_field(self, pd: PointData) -> np.ndarray:
        """Γ at p from the adjoint formula [W(u), B]*_p; directions projected onto T_pM."""
        projector = self.tangent_projector(pd)
        w = pd.directions(self._m_rows, projector) - pd.directions(self._m_bar_rows, projector)
        return pd.bracket_tensor(w)

    def s_bar_restricted(self, pd: PointData) -> np.ndarray:
        """S̄ with its direction slot composed with the T_pM projector."""
        return np.einsum("kij,il->klj", self.s_bar_field(pd), self.tangent_projector(pd))

    def connection(self, kind: ConnectionKind) -> Connection:
        if kind != ConnectionKind.ORBIT_D:
            return super().connection(kind)

        def matrix(pd: PointData, v: np.ndarray) -> np.ndarray:
            return levi_civita_matrix(pd, v) - contract_direction(self.s_field(pd), v)
        return Connection(kind, self.coordinates, matrix)


def connections_agree_on_tangent(conns: ReductiveConnections) -> bool:
    """D = ∇̃ on T_oM directions exactly when m ⊆ m̄."""
    return intersect(conns.m, conns.m_bar).dim == conns.m.dim


def corrupt_m(decomp: DecompositionResult, seed: int = 0) -> Optional[Subspace]:
    """m with its first basis vector shifted by a generic element of h^{⊥_h̄}.

    Returns None when h = h̄, where every such shift stays inside g.
    """
    model = decomp.orbit.ambient
    h_bar = decomp.h_bar
    if decomp.m.dim == 0:
        raise SubspaceError("corruption needs a nonzero m")
    shifts = orth_complement(decomp.h.to_mode(h_bar.mode), h_bar, phi_bar_form(model, h_bar)).space
    if shifts.dim == 0:
        return None
    rng = np.random.default_rng(seed)
    z = sum(c * as_float(b) for c, b in zip(rng.uniform(0.5, 1.5, shifts.dim), shifts.basis))
    basis = [as_float(b) for b in decomp.m.basis]
    basis[0] = basis[0] + z
    return Subspace(shape=decomp.m.shape, basis=tuple(basis), mode=ScalarMode.FLOAT)
