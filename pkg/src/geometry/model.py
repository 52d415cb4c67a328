"""
Chart-based model of a homogeneous (or conformally homogeneous) Riemannian manifold.

Every basis element of the algebra carries a closed-form fundamental field in
chart coordinates. Fields follow the left-action convention
X*_p = d/dt exp(tX)·p, so [X, Y]* = -[X*, Y*].

Float evaluation goes through lambdified sympy expressions; exact evaluation is
available at the base point, where every fixture is rational.
"""
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
import sympy

from src.config.settings import settings
from src.geometry.metrics import (
    ChartMetric,
    christoffel_derivatives,
    christoffel_fd,
    curvature_from,
    jacobian_fd,
)
from src.lie.algebra import MatrixLieAlgebra
from src.linalg.scalar import Mat, ScalarMode, as_exact, as_float, mode_of, to_fraction
from src.utils.error_handler import ChartDomainError, ConformalFieldError, ModeMixError

Point = Optional[Sequence[float]]


def _undefined(value) -> bool:
    return value.has(sympy.nan, sympy.zoo, sympy.oo, -sympy.oo)


class FieldKind(str, Enum):
    KILLING = "killing"
    CONFORMAL = "conformal_killing"


@dataclass(frozen=True)
class FieldTag:
    kind: FieldKind = FieldKind.KILLING
    factor: Fraction = Fraction(0)  # λ in L_X g = 2λ g


@dataclass(frozen=True, eq=False)
class ChartedHomSpace:
    """Ambient manifold M̄ = Ḡ/H̄ in a single chart."""
    name: str
    metric: ChartMetric
    algebra: MatrixLieAlgebra
    fields: Tuple[sympy.Matrix, ...]
    tags: Tuple[FieldTag, ...]
    base_point: Tuple[sympy.Expr, ...]
    chart_domain: Tuple[Tuple[float, float], ...]
    embed: Callable[[np.ndarray], np.ndarray]
    chart: Callable[[np.ndarray], np.ndarray]

    def __post_init__(self):
        if len(self.fields) != self.algebra.dim or len(self.tags) != self.algebra.dim:
            raise ValueError(f"{self.name}: need one field and tag per algebra basis element")
        if len(self.base_point) != self.dim or len(self.chart_domain) != self.dim:
            raise ValueError(f"{self.name}: base point / chart domain do not match dim {self.dim}")
        self.check_domain(self.base_point_float)

    @property
    def dim(self) -> int:
        return self.metric.dim

    @property
    def coords(self) -> Tuple[sympy.Symbol, ...]:
        return self.metric.coords

    @cached_property
    def base_point_float(self) -> np.ndarray:
        return np.array([float(c) for c in self.base_point])

    def with_base_point(self, point: Sequence) -> "ChartedHomSpace":
        """Same model anchored at another point."""
        return replace(self, base_point=tuple(sympy.sympify(c) for c in point))

    # ---- chart domain -------------------------------------------------

    def in_domain(self, p: np.ndarray) -> bool:
        return all(lo < float(c) < hi for c, (lo, hi) in zip(p, self.chart_domain))

    def check_domain(self, p: np.ndarray):
        if not self.in_domain(p):
            raise ChartDomainError(f"{self.name}: point {np.round(as_float(p), 6).tolist()} "
                                   f"outside chart domain {list(self.chart_domain)}")

    def sample_points(self, count: Optional[int] = None, seed: int = 0, radius: float = 1.0) -> np.ndarray:
        """Uniform samples in the chart box around the base point."""
        count = settings.sample_points if count is None else count
        rng = np.random.default_rng(seed)
        o = self.base_point_float
        lo = np.array([max(b[0], c - radius) for b, c in zip(self.chart_domain, o)])
        hi = np.array([min(b[1], c + radius) for b, c in zip(self.chart_domain, o)])
        return lo + (hi - lo) * rng.random((count, self.dim))

    def _point(self, p: Point) -> np.ndarray:
        p = self.base_point_float if p is None else np.asarray(p, dtype=float)
        self.check_domain(p)
        return p

    # ---- lambdified closed forms --------------------------------------

    @cached_property
    def _metric_fn(self):
        return sympy.lambdify(self.coords, self.metric.matrix, "numpy")

    @cached_property
    def _dmetric_fn(self):
        # dg[l][i][j] = ∂_l g_ij
        return sympy.lambdify(self.coords, sympy.derive_by_array(self.metric.matrix, self.coords).tolist(),
                              "numpy")

    @cached_property
    def _gamma_fn(self):
        return sympy.lambdify(self.coords, self.metric.christoffel.tolist(), "numpy")

    @cached_property
    def _dgamma_fn(self):
        return sympy.lambdify(self.coords, christoffel_derivatives(self.metric).tolist(), "numpy")

    @cached_property
    def _field_fn(self):
        return sympy.lambdify(self.coords, [list(f) for f in self.fields], "numpy")

    @cached_property
    def _jacobian_fn(self):
        return sympy.lambdify(self.coords, [f.jacobian(self.coords).tolist() for f in self.fields],
                              "numpy")

    def _call(self, fn, p: np.ndarray) -> np.ndarray:
        return np.asarray(fn(*p), dtype=float)

    # ---- exact tables at the base point ---------------------------------

    @cached_property
    def _base_subs(self) -> dict:
        return dict(zip(self.coords, self.base_point))

    def _exact(self, expr) -> Fraction:
        expr = sympy.sympify(expr)
        value = expr.subs(self._base_subs)
        if _undefined(value):
            # removable singularities left by trig rewrites (tan at pi/2)
            value = sympy.simplify(expr).subs(self._base_subs)
        if _undefined(value):
            value = expr
            for symbol, point in self._base_subs.items():
                value = sympy.limit(value, symbol, point)
        return to_fraction(value)

    @cached_property
    def _exact_metric(self) -> Mat:
        return as_exact([[self._exact(v) for v in row] for row in self.metric.matrix.tolist()])

    @cached_property
    def _exact_gamma(self) -> Mat:
        n = self.dim
        gamma = self.metric.christoffel
        return as_exact([[[self._exact(gamma[k, i, j]) for j in range(n)] for i in range(n)]
                         for k in range(n)])

    @cached_property
    def _exact_fields(self) -> Mat:
        return as_exact([[self._exact(v) for v in f] for f in self.fields])

    @cached_property
    def _exact_jacobians(self) -> Mat:
        return as_exact([[[self._exact(v) for v in row] for row in f.jacobian(self.coords).tolist()]
                         for f in self.fields])

    def _require_base(self, p: Point, mode: ScalarMode):
        if mode == ScalarMode.EXACT and p is not None:
            raise ModeMixError("exact evaluation is only available at the base point")

    # ---- metric data ------------------------------------------------------

    def metric_at(self, p: Point = None, mode: ScalarMode = ScalarMode.FLOAT) -> Mat:
        self._require_base(p, mode)
        if mode == ScalarMode.EXACT:
            return self._exact_metric
        return self._call(self._metric_fn, self._point(p))

    def metric_derivative_at(self, p: Point = None) -> np.ndarray:
        return self._call(self._dmetric_fn, self._point(p))

    def christoffel_at(self, p: Point = None, mode: ScalarMode = ScalarMode.FLOAT) -> Mat:
        """Γ[k, i, j] = Γ^k_{ij}."""
        self._require_base(p, mode)
        if mode == ScalarMode.EXACT:
            return self._exact_gamma
        return self._call(self._gamma_fn, self._point(p))

    def christoffel_oracle(self, p: Point = None, h: Optional[float] = None) -> np.ndarray:
        h = settings.fd_step if h is None else h
        return christoffel_fd(lambda q: self._call(self._metric_fn, q), self._point(p), h)

    def christoffel_derivative_at(self, p: Point = None) -> np.ndarray:
        """dΓ[k, i, j, l] = ∂_l Γ^k_{ij}."""
        return self._call(self._dgamma_fn, self._point(p))

    def curvature_at(self, p: Point = None) -> np.ndarray:
        """R[i, j, k, l] = R^i_{jkl}."""
        p = self._point(p)
        return curvature_from(self.christoffel_at(p), self.christoffel_derivative_at(p))

    # ---- fundamental fields -----------------------------------------------

    def coefficients(self, x: Mat) -> Mat:
        """Coordinates of x in the algebra basis, in the scalar mode of x."""
        basis = self.algebra.basis.to_mode(mode_of(np.asarray(x)))
        return basis.coordinates(x)

    def field_basis_at(self, p: Point = None, mode: ScalarMode = ScalarMode.FLOAT) -> Mat:
        """Row i is the fundamental field of basis element i at p."""
        self._require_base(p, mode)
        if mode == ScalarMode.EXACT:
            return self._exact_fields
        return self._call(self._field_fn, self._point(p)).reshape(self.algebra.dim, self.dim)

    def field_jacobians_at(self, p: Point = None, mode: ScalarMode = ScalarMode.FLOAT) -> Mat:
        """J[i, k, j] = ∂_j (B_i*)^k."""
        self._require_base(p, mode)
        if mode == ScalarMode.EXACT:
            return self._exact_jacobians
        n = self.dim
        return self._call(self._jacobian_fn, self._point(p)).reshape(self.algebra.dim, n, n)

    def fundamental_field(self, x: Mat, p: Point = None) -> Mat:
        """X*_p; exact when x is exact and p is the base point."""
        mode = mode_of(np.asarray(x))
        if p is not None:
            mode = ScalarMode.FLOAT
        c = self.coefficients(x) if mode_of(np.asarray(x)) == mode else as_float(self.coefficients(x))
        return c @ self.field_basis_at(p, mode)

    def field_jacobian(self, x: Mat, p: Point = None) -> Mat:
        """∂_j (X*)^k as a [k, j] matrix."""
        mode = ScalarMode.FLOAT if p is not None else mode_of(np.asarray(x))
        c = self.coefficients(x) if mode_of(np.asarray(x)) == mode else as_float(self.coefficients(x))
        return np.tensordot(c, self.field_jacobians_at(p, mode), axes=(0, 0))

    def field_jacobian_oracle(self, x: Mat, p: Point = None, h: Optional[float] = None) -> np.ndarray:
        h = settings.fd_step if h is None else h
        c = as_float(self.coefficients(x))
        return jacobian_fd(lambda q: c @ self._call(self._field_fn, q).reshape(self.algebra.dim, self.dim),
                           self._point(p), h)

    def covariant_derivative(self, x: Mat, p: Point = None) -> Mat:
        """(∇̄X*)[k, j] = ∂_j X^k + Γ^k_{ji} X^i."""
        mode = ScalarMode.FLOAT if p is not None else mode_of(np.asarray(x))
        field = self.fundamental_field(x, p)
        gamma = self.christoffel_at(p, mode)
        return self.field_jacobian(x, p) + np.tensordot(gamma, field, axes=(2, 0))

    # ---- field tags -------------------------------------------------------

    def conformal_factor(self, x: Mat):
        """λ with L_{X*} g = 2λ g, from the per-basis tags."""
        c = self.coefficients(x)
        if mode_of(np.asarray(x)) == ScalarMode.EXACT:
            return sum((ci * tag.factor for ci, tag in zip(c, self.tags)), Fraction(0))
        return float(sum(float(ci) * float(tag.factor) for ci, tag in zip(c, self.tags)))

    def is_isometric(self, x: Mat, tol: float = 1e-12) -> bool:
        c = self.coefficients(x)
        for ci, tag in zip(c, self.tags):
            if tag.kind == FieldKind.CONFORMAL and abs(float(ci)) > tol:
                return False
        return True

    def require_isometric(self, x: Mat):
        if not self.is_isometric(x):
            raise ConformalFieldError(f"{self.name}: element has a conformal component; "
                                      "Kostant operators need Killing fields")

    # ---- group action -------------------------------------------------------

    def act(self, g: np.ndarray, p: Point = None) -> np.ndarray:
        """Chart coordinates of g·p."""
        q = np.asarray(self.chart(as_float(g) @ self.embed(self._point(p))), dtype=float)
        self.check_domain(q)
        return q

    def pushforward(self, g: np.ndarray, p: Point = None) -> np.ndarray:
        """Differential of p ↦ g·p in chart frames, via (L_g)_* X*_p = (Ad_g X)*_{g·p}."""
        p = self._point(p)
        q = self.act(g, p)
        g = as_float(g)
        g_inv = np.linalg.inv(g)
        basis = self.algebra.basis.to_mode(ScalarMode.FLOAT)
        ad = np.stack([basis.coordinates(g @ b @ g_inv) for b in basis.basis], axis=1)
        fields_p = self.field_basis_at(p)
        fields_q = self.field_basis_at(q)
        # preimages of the chart basis vectors under X ↦ X*_p
        preimages = np.linalg.lstsq(fields_p.T, np.eye(self.dim), rcond=None)[0]
        return fields_q.T @ ad @ preimages

    def lie_derivative_metric(self, x: Mat, p: Point = None) -> np.ndarray:
        """(L_{X*} g)_ij = X^l ∂_l g_ij + g_lj ∂_i X^l + g_il ∂_j X^l (float)."""
        p = self._point(p)
        field = as_float(self.fundamental_field(as_float(x), p))
        jac = self.field_jacobian(as_float(x), p)
        g = self.metric_at(p)
        dg = self.metric_derivative_at(p)
        return np.tensordot(field, dg, axes=(0, 0)) + jac.T @ g + g @ jac
