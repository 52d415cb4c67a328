"""
Float data at points p = g·o and curves c(t) = g(t)·o built from one-parameter subgroups.

Tensor components are chart arrays: a (1,2) tensor T is stored as
``T[k, i, j] = T(e_i, e_j)^k`` with the direction slot first.
"""
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from src.geometry.model import ChartedHomSpace
from src.linalg.scalar import Mat, ScalarMode, as_float
from src.linalg.subspace import Subspace
from src.utils.error_handler import PreimageError


@dataclass(frozen=True, eq=False)
class AlgebraCoordinates:
    """Float coordinates and structure constants of the ambient algebra."""
    model: ChartedHomSpace

    @cached_property
    def basis(self) -> Subspace:
        return self.model.algebra.basis.to_mode(ScalarMode.FLOAT)

    @cached_property
    def structure_constants(self) -> np.ndarray:
        return as_float(self.model.algebra.structure_constants)

    def coords(self, x: Mat) -> np.ndarray:
        return self.basis.coordinates(as_float(x))

    def rows(self, sub: Subspace) -> np.ndarray:
        """Coordinates of the basis of ``sub``, one per row."""
        if sub.dim == 0:
            return np.zeros((0, self.basis.dim))
        return np.vstack([self.coords(x) for x in sub.basis])

    def bracket(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.einsum("a,b,abc->c", x, y, self.structure_constants)

    def adjoint(self, g: np.ndarray) -> np.ndarray:
        """Ad_g as a matrix acting on coordinate column vectors."""
        g = as_float(g)
        g_inv = np.linalg.inv(g)
        return np.stack([self.coords(g @ b @ g_inv) for b in self.basis.basis], axis=1)


@dataclass(frozen=True, eq=False)
class PointData:
    """Fields, Jacobians, Christoffels and Ad_g at p = g·o."""
    algebra: AlgebraCoordinates
    g: np.ndarray

    @property
    def model(self) -> ChartedHomSpace:
        return self.algebra.model

    @cached_property
    def p(self) -> np.ndarray:
        return self.model.act(self.g)

    @cached_property
    def fields(self) -> np.ndarray:
        return self.model.field_basis_at(self.p)

    @cached_property
    def jacobians(self) -> np.ndarray:
        return self.model.field_jacobians_at(self.p)

    @cached_property
    def christoffel(self) -> np.ndarray:
        return self.model.christoffel_at(self.p)

    @cached_property
    def metric(self) -> np.ndarray:
        return self.model.metric_at(self.p)

    @cached_property
    def ad(self) -> np.ndarray:
        return self.algebra.adjoint(self.g)

    @cached_property
    def chart_preimages(self) -> np.ndarray:
        """C[a, j]: coordinates of an element whose field at p is e_j."""
        return np.linalg.lstsq(self.fields.T, np.eye(self.model.dim), rcond=None)[0]

    def transported_rows(self, rows: np.ndarray) -> np.ndarray:
        """Rows of Ad_g applied to the given coordinate rows."""
        return rows @ self.ad.T

    def field(self, x: np.ndarray) -> np.ndarray:
        return x @ self.fields

    def preimage(self, u: np.ndarray, rows: np.ndarray, tol: float = 1e-8) -> np.ndarray:
        """Coordinates of the X in span(rows) with X*_p = u."""
        images = rows @ self.fields
        y, *_ = np.linalg.lstsq(images.T, u, rcond=None)
        if np.max(np.abs(y @ images - u), initial=0.0) > tol * max(1.0, np.max(np.abs(u), initial=0.0)):
            raise PreimageError(f"vector at {np.round(self.p, 6).tolist()} is not realized by the subspace")
        return y @ rows

    def tangent_projector(self, rows: np.ndarray) -> np.ndarray:
        """g_p-orthogonal projector onto span{X*_p : X in span(rows)}."""
        images = rows @ self.fields
        if images.shape[0] == 0:
            return np.zeros((self.model.dim, self.model.dim))
        basis = scipy.linalg.orth(images.T)
        gram = basis.T @ self.metric @ basis
        return basis @ np.linalg.solve(gram, basis.T @ self.metric)

    def levi_civita_tensor(self) -> np.ndarray:
        """L[k, i, j] = (∇̄_{e_i} B_j*)^k for the chart preimages B_j."""
        return np.einsum("aj,aki->kij", self.chart_preimages, self.jacobians) + self.christoffel

    def bracket_tensor(self, directions: np.ndarray) -> np.ndarray:
        """Br[k, i, j] = [X_i, B_j]*_p^k for coordinate rows X_i and the chart preimages B_j."""
        c = self.algebra.structure_constants
        return np.einsum("ia,bj,abc,ck->kij", directions, self.chart_preimages, c, self.fields)

    def directions(self, rows: np.ndarray, projector: np.ndarray = None) -> np.ndarray:
        """Row i: preimage in span(Ad_g rows) of e_i (or of its projection)."""
        moved = self.transported_rows(rows)
        n = self.model.dim
        targets = np.eye(n) if projector is None else projector.T
        return np.vstack([self.preimage(targets[i], moved) for i in range(n)])


@dataclass(frozen=True)
class GroupCurve:
    """c(t) = exp(X_1)…exp(X_k) exp(s X_{k+1})·o for t in [0, 1], each piece taking 1/r of t."""
    pieces: Tuple[np.ndarray, ...]

    @property
    def count(self) -> int:
        return len(self.pieces)

    def segments(self) -> List[Tuple[float, float]]:
        r = self.count
        return [(i / r, (i + 1) / r) for i in range(r)]

    def _locate(self, t: float, segment: Optional[int] = None) -> Tuple[int, float]:
        r = self.count
        k = min(max(int(np.floor(t * r)), 0), r - 1) if segment is None else segment
        return k, t * r - k

    def element(self, t: float, segment: Optional[int] = None) -> np.ndarray:
        """g(t); ``segment`` pins the piece used at a breakpoint."""
        k, s = self._locate(t, segment)
        g = np.eye(self.pieces[0].shape[0])
        for x in self.pieces[:k]:
            g = g @ scipy.linalg.expm(x)
        return g @ scipy.linalg.expm(s * self.pieces[k])

    def generator(self, t: float, segment: Optional[int] = None) -> np.ndarray:
        """Y with c'(t) = Y*_{c(t)}."""
        k, _ = self._locate(t, segment)
        g = self.element(t, k)
        return self.count * (g @ self.pieces[k] @ np.linalg.inv(g))

    def interior_times(self, per_segment: Sequence[float] = (0.25, 0.75)) -> List[Tuple[float, int]]:
        """(t, segment) sample pairs away from the breakpoints."""
        return [(a + f * (b - a), k) for k, (a, b) in enumerate(self.segments()) for f in per_segment]


def velocity(pd: PointData, curve: GroupCurve, t: float, segment: Optional[int] = None) -> np.ndarray:
    """c'(t) in the chart frame at pd.p."""
    return pd.field(pd.algebra.coords(curve.generator(t, segment)))


def curve_family(sub: Subspace, metric_o: np.ndarray, model: ChartedHomSpace, rays: int,
                 piecewise: int, seed: int, length: float = 0.5) -> List[GroupCurve]:
    """Seeded rays exp(tX)·o and two-piece concatenations with X in ``sub``.

    Each generator is scaled so that its field at o has g_o-length ``length``
    (rays) or ``0.6 * length`` (pieces).
    """
    rng = np.random.default_rng(seed)
    basis = [as_float(b) for b in sub.basis]

    def draw(scale: float) -> np.ndarray:
        coeffs = rng.standard_normal(len(basis))
        x = sum(c * b for c, b in zip(coeffs, basis))
        u = model.fundamental_field(x)
        norm = float(np.sqrt(u @ metric_o @ u))
        return x * (scale / norm) if norm > 0 else x

    curves = [GroupCurve((draw(length),)) for _ in range(rays)]
    curves += [GroupCurve((draw(0.6 * length), draw(0.6 * length))) for _ in range(piecewise)]
    return curves


def richardson(fn: Callable[[float], np.ndarray], t: float, h: float) -> np.ndarray:
    """Central difference at steps h and h/2 combined to fourth order."""
    def central(step):
        return (fn(t + step) - fn(t - step)) / (2 * step)

    return (4 * central(h / 2) - central(h)) / 3


def covariant_derivative_components(tensor: np.ndarray, d_tensor: np.ndarray, conn: np.ndarray,
                                    upper: Sequence[int]) -> np.ndarray:
    """Components of ∇_v T from dT/dt along c and the connection matrix A_v.

    ``conn[k, j]`` is A_v with (∇_v Y)^k = v(Y^k) + A_v[k, j] Y^j; axes listed in
    ``upper`` are contravariant, the rest covariant.
    """
    out = np.array(d_tensor, dtype=float)
    for axis in range(tensor.ndim):
        if axis in upper:
            out += np.moveaxis(np.tensordot(conn, tensor, axes=(1, axis)), 0, axis)
        else:
            out -= np.moveaxis(np.tensordot(tensor, conn, axes=(axis, 0)), -1, axis)
    return out
