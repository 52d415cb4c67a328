"""
Chart metrics with closed-form Levi-Civita data.

Christoffel symbols are indexed ``gamma[k][i][j] = Γ^k_{ij}``; curvature is
``R[i][j][k][l] = R^i_{jkl}`` with
R^i_{jkl} = ∂_k Γ^i_{lj} - ∂_l Γ^i_{kj} + Γ^i_{km} Γ^m_{lj} - Γ^i_{lm} Γ^m_{kj}.
"""
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Sequence, Tuple

import numpy as np
import sympy


def levi_civita_symbols(metric: sympy.Matrix, coords: Sequence[sympy.Symbol]) -> sympy.Array:
    """Γ^k_{ij} = ½ g^{kl}(∂_i g_{jl} + ∂_j g_{il} - ∂_l g_{ij})."""
    n = len(coords)
    inverse = metric.inv()
    return sympy.Array([[[sympy.simplify(sum(
        sympy.Rational(1, 2) * inverse[k, l] * (sympy.diff(metric[j, l], coords[i])
                                                + sympy.diff(metric[i, l], coords[j])
                                                - sympy.diff(metric[i, j], coords[l]))
        for l in range(n))) for j in range(n)] for i in range(n)] for k in range(n)])


@dataclass(frozen=True, eq=False)
class ChartMetric:
    """Metric given by a symbolic matrix in chart coordinates."""
    coords: Tuple[sympy.Symbol, ...]
    matrix: sympy.Matrix

    @property
    def dim(self) -> int:
        return len(self.coords)

    @cached_property
    def christoffel(self) -> sympy.Array:
        return levi_civita_symbols(self.matrix, self.coords)


@dataclass(frozen=True, eq=False)
class WarpedProductMetric(ChartMetric):
    """ds² + f(s)² g_N on an interval times a fiber N."""
    warp: sympy.Expr = None
    fiber_metric: sympy.Matrix = None

    @classmethod
    def build(cls, base: sympy.Symbol, warp: sympy.Expr, fiber_coords: Sequence[sympy.Symbol],
              fiber_metric: sympy.Matrix) -> "WarpedProductMetric":
        coords = (base,) + tuple(fiber_coords)
        matrix = sympy.diag(sympy.Integer(1), warp ** 2 * fiber_metric)
        return cls(coords=coords, matrix=matrix, warp=warp, fiber_metric=fiber_metric)

    @cached_property
    def christoffel(self) -> sympy.Array:
        base = self.coords[0]
        fiber = self.coords[1:]
        n = self.dim
        f = self.warp
        df = sympy.diff(f, base)
        fiber_gamma = (levi_civita_symbols(self.fiber_metric, fiber) if fiber
                       else sympy.Array([]))
        gamma = sympy.MutableDenseNDimArray.zeros(n, n, n)
        for a in range(1, n):
            for b in range(1, n):
                # Γ^s_{ab} = -f f' (g_N)_{ab}
                gamma[0, a, b] = sympy.simplify(-f * df * self.fiber_metric[a - 1, b - 1])
                for c in range(1, n):
                    gamma[a, b, c] = fiber_gamma[a - 1, b - 1, c - 1]
            # Γ^a_{sa} = Γ^a_{as} = f'/f
            gamma[a, 0, a] = sympy.simplify(df / f)
            gamma[a, a, 0] = gamma[a, 0, a]
        return sympy.Array(gamma)


def flat_metric(coords: Sequence[sympy.Symbol]) -> ChartMetric:
    return ChartMetric(coords=tuple(coords), matrix=sympy.eye(len(coords)))


def christoffel_derivatives(metric: ChartMetric) -> sympy.Array:
    """dgamma[k][i][j][l] = ∂_l Γ^k_{ij}."""
    n = metric.dim
    gamma = metric.christoffel
    return sympy.Array([[[[sympy.diff(gamma[k, i, j], metric.coords[l]) for l in range(n)]
                          for j in range(n)] for i in range(n)] for k in range(n)])


def curvature_from(gamma: np.ndarray, dgamma: np.ndarray) -> np.ndarray:
    """R^i_{jkl} from numeric Γ and ∂Γ at one point."""
    # ∂_k Γ^i_{lj} -> dgamma[i, l, j, k]
    d1 = np.einsum("iljk->ijkl", dgamma)
    d2 = np.einsum("ikjl->ijkl", dgamma)
    q1 = np.einsum("ikm,mlj->ijkl", gamma, gamma)
    q2 = np.einsum("ilm,mkj->ijkl", gamma, gamma)
    return d1 - d2 + q1 - q2


def christoffel_fd(metric_fn: Callable[[np.ndarray], np.ndarray], p: np.ndarray, h: float) -> np.ndarray:
    """Finite-difference oracle for Γ^k_{ij} from metric values alone."""
    p = np.asarray(p, dtype=float)
    n = p.size
    dg = np.empty((n, n, n))  # dg[l] = ∂_l g
    for l in range(n):
        step = np.zeros(n)
        step[l] = h
        dg[l] = (metric_fn(p + step) - metric_fn(p - step)) / (2 * h)
    inverse = np.linalg.inv(metric_fn(p))
    # term[i, j, l] = ∂_i g_{jl} + ∂_j g_{il} - ∂_l g_{ij}
    term = np.einsum("ijl->ijl", dg) + np.einsum("jil->ijl", dg) - np.einsum("lij->ijl", dg)
    return 0.5 * np.einsum("kl,ijl->kij", inverse, term)


def jacobian_fd(fn: Callable[[np.ndarray], np.ndarray], p: np.ndarray, h: float) -> np.ndarray:
    """Central-difference Jacobian J[k, j] = ∂_j fn^k."""
    p = np.asarray(p, dtype=float)
    columns = []
    for j in range(p.size):
        step = np.zeros(p.size)
        step[j] = h
        columns.append((np.asarray(fn(p + step)) - np.asarray(fn(p - step))) / (2 * h))
    return np.stack(columns, axis=-1)
