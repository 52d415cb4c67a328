"""
Concentric spheres in punctured Euclidean space.

Ambient: R^n \\ {0} with its flat metric, conformally homogeneous under
R^+ × SO(n). The algebra is written as (n+1)×(n+1) matrices

    X = [[0,     v, 0],
         [-v^T,  B, 0],
         [0,     0, a]]       v ∈ R^{n-1}, B ∈ so(n-1), a ∈ R,

acting on (y, s) ∈ R^n × R^+ linearly, with the point y·s. The a-generator
is the radial field r ∂/∂r, conformal with L_X g = 2g.

Chart: spherical coordinates (r, θ_1, …, θ_{n-1}),

    y_{n-1} = r cos θ_1,  y_{n-2} = r sin θ_1 cos θ_2,  …,
    y_1 = r sin θ_1 ⋯ sin θ_{n-2} cos θ_{n-1},  y_0 = r sin θ_1 ⋯ sin θ_{n-1},

metric dr² + r² g_{S^{n-1}}. The field of X is G^{-1} (∂y/∂q)^T (A y + a y),
where A is the so(n) block and G the chart metric. The base point r = 1,
θ = π/2 is y = e_0; the polar angles stay a margin away from 0 and π and
the azimuth θ_{n-1} away from 0 and 2π.

Orbit: G = SO(n); the orbit through o is the unit sphere with h = h̄ =
so(n-1), m = the v-block and n = R·diag(0_n, 1).
"""
from fractions import Fraction

import numpy as np
import sympy

from src.config.settings import settings
from src.gallery.fixture import Fixture, require_dimension, skew_pairs, span, unit
from src.geometry.metrics import WarpedProductMetric
from src.geometry.model import ChartedHomSpace, FieldKind, FieldTag
from src.lie.algebra import MatrixLieAlgebra
from src.linalg.scalar import ScalarMode
from src.linalg.subspace import from_basis
from src.utils.error_handler import FixtureError

SUBGROUPS = ("SO(n)",)


def sphere_metric(thetas) -> sympy.Matrix:
    """Round metric dθ_1² + sin²θ_1 dθ_2² + …"""
    entries, factor = [], sympy.Integer(1)
    for theta in thetas:
        entries.append(factor)
        factor = factor * sympy.sin(theta) ** 2
    return sympy.diag(*entries)


def spherical_point(r, thetas) -> sympy.Matrix:
    n = len(thetas) + 1
    y = [None] * n
    prefix = r
    for k, theta in enumerate(thetas, start=1):
        y[n - k] = prefix * sympy.cos(theta)
        prefix = prefix * sympy.sin(theta)
    y[0] = prefix
    return sympy.Matrix(y)


def _cartesian(q: np.ndarray) -> np.ndarray:
    n = q.size
    y = np.empty(n)
    prefix = q[0]
    for k, theta in enumerate(q[1:], start=1):
        y[n - k] = prefix * np.cos(theta)
        prefix = prefix * np.sin(theta)
    y[0] = prefix
    return y


def _spherical_coordinates(y: np.ndarray) -> np.ndarray:
    n = y.size
    r = float(np.linalg.norm(y))
    angles = []
    for k in range(1, n - 1):
        angles.append(np.arctan2(np.linalg.norm(y[:n - k]), y[n - k]))
    angles.append(np.mod(np.arctan2(y[0], y[1]), 2 * np.pi))
    return np.array([r] + angles)


def build_punctured_euclidean(n: int, subgroup: str = "SO(n)") -> Fixture:
    require_dimension("punctured_euclidean", n)
    if subgroup not in SUBGROUPS:
        raise FixtureError(f"unsupported sphere group {subgroup!r}; available: {', '.join(SUBGROUPS)}")
    size = n + 1
    r = sympy.Symbol("r", positive=True)
    thetas = list(sympy.symbols(f"theta1:{n}", real=True))
    metric = WarpedProductMetric.build(r, r, thetas, sphere_metric(thetas))

    coords = [r] + thetas
    y = spherical_point(r, thetas)
    dy = y.jacobian(coords)
    inverse = sympy.diag(*[1 / metric.matrix[i, i] for i in range(n)])

    def field(x) -> sympy.Matrix:
        a_block = sympy.Matrix(n, n, lambda i, j: sympy.Rational(x[i, j].numerator, x[i, j].denominator))
        a = sympy.Rational(x[n, n].numerator, x[n, n].denominator)
        velocity = a_block * y + a * y
        return (inverse * dy.T * velocity).applyfunc(sympy.cancel)

    rotations = [unit(size, {(i, j): 1, (j, i): -1}) for i, j in skew_pairs(list(range(1, n)))]
    v_block = [unit(size, {(0, j): 1, (j, 0): -1}) for j in range(1, n)]
    dilation = unit(size, {(n, n): 1})
    basis = v_block + rotations + [dilation]
    tags = [FieldTag(FieldKind.KILLING) for _ in v_block + rotations]
    tags.append(FieldTag(FieldKind.CONFORMAL, factor=Fraction(1)))

    margin = settings.chart_margin
    domain = ((0.1, 10.0),) + ((margin, np.pi - margin),) * (n - 2) + ((margin, 2 * np.pi - margin),)

    def embed(p: np.ndarray) -> np.ndarray:
        return np.concatenate([_cartesian(np.asarray(p, dtype=float)), [1.0]])

    def chart(w: np.ndarray) -> np.ndarray:
        return _spherical_coordinates(np.asarray(w[:n], dtype=float) * float(w[n]))

    model = ChartedHomSpace(
        name=f"punctured_R{n}",
        metric=metric,
        algebra=MatrixLieAlgebra(f"so({n})+R", from_basis(basis, ScalarMode.EXACT)),
        fields=tuple(field(x) for x in basis),
        tags=tuple(tags),
        base_point=(sympy.Integer(1),) + (sympy.pi / 2,) * (n - 1),
        chart_domain=domain,
        embed=embed,
        chart=chart,
    )
    return Fixture(
        name="punctured_euclidean",
        n=n,
        model=model,
        g_sub=MatrixLieAlgebra(f"so({n})", span(v_block + rotations, size)),
        m_bar=span(v_block + [dilation], size),
        expected_h_bar=span(rotations, size),
        expected_m=span(v_block, size),
        expected_n=span([dilation], size),
        symmetric=True,
        conformal=True,
        principal=True,
        description="spheres |y| = r in R^n minus the origin, G = SO(n)",
    )
