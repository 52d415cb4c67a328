"""
Horospheres in real hyperbolic space.

Ambient: ḡ = so(n, 1) as (n+1)×(n+1) matrices preserving
J = I_{n-1} ⊕ [[0, 1], [1, 0]], written in blocks

    X = [[B,     v1, v2],
         [-v2^T, a,  0 ],
         [-v1^T, 0,  -a]]      B ∈ so(n-1), v1, v2 ∈ R^{n-1}, a ∈ R.

Chart: horospherical coordinates (t, x) ∈ R × R^{n-1} with the warped metric
dt² + e^{-2t}|dx|². The embedding into the hyperboloid <w, w>_J = -2 is

    E = √2 e^{-t},   w = (x E,  1/E + |x|² E / 2,  -E),

with inverse t = ½ log 2 - log(-Z), x = -P/Z for w = (P, Y, Z). The J-metric
pulls back to twice the chart metric, so the linear action of SO(n, 1) is by
isometries of the chart metric. Differentiating chart(exp(sX) w) at s = 0
gives the fundamental field of X:

    t-component:  a - v1·x
    x-component:  B x - v2 + a x + v1 (e^{2t}/2 + |x|²/2) - (v1·x) x

The base point o = (½ log 2, 0) maps to w = (0, 1, -1) and every quantity at
o is rational (e^{-2t} = ½ there). Isotropy at o is v1 = v2, a = 0, i.e.
h̄ ≅ so(n); the Cartan complement is m̄ = {v1 = -v2} ⊕ R·a.

Orbit: G = SO(n-1) ⋉ R^{n-1} with translations v1 = 0, v2 = -v, whose field
is the constant x-translation by v; the orbit through o is the leaf
{½ log 2} × R^{n-1}. Then h = so(n-1), m = translations and
n = R·diag(0_{n-1}, 1, -1).
"""
from typing import List

import numpy as np
import sympy

from src.gallery.fixture import Fixture, require_dimension, skew_pairs, span, unit
from src.geometry.metrics import WarpedProductMetric
from src.geometry.model import ChartedHomSpace, FieldKind, FieldTag
from src.lie.algebra import MatrixLieAlgebra
from src.linalg.subspace import from_basis
from src.linalg.scalar import ScalarMode

LOG2_HALF = float(np.log(2.0) / 2)


def _fields(t: sympy.Symbol, xs: List[sympy.Symbol], b: sympy.Matrix, v1: sympy.Matrix,
            v2: sympy.Matrix, a) -> sympy.Matrix:
    x = sympy.Matrix(xs)
    dot = (v1.T * x)[0, 0]
    norm2 = (x.T * x)[0, 0]
    t_part = a - dot
    x_part = b * x - v2 + a * x + v1 * (sympy.exp(2 * t) / 2 + norm2 / 2) - dot * x
    return sympy.Matrix([t_part] + list(x_part))


def _embed(p: np.ndarray) -> np.ndarray:
    t, x = float(p[0]), np.asarray(p[1:], dtype=float)
    e = np.sqrt(2.0) * np.exp(-t)
    return np.concatenate([x * e, [1.0 / e + (x @ x) * e / 2.0, -e]])


def _chart(w: np.ndarray) -> np.ndarray:
    p, z = w[:-2], w[-1]
    if z >= 0:
        return np.full(p.size + 1, np.nan)
    return np.concatenate([[LOG2_HALF - np.log(-z)], -p / z])


def build_horosphere(n: int) -> Fixture:
    require_dimension("horosphere", n)
    size = n + 1
    y, z = n - 1, n
    block = list(range(n - 1))

    t = sympy.Symbol("t", real=True)
    xs = list(sympy.symbols(f"x1:{n}", real=True))
    metric = WarpedProductMetric.build(t, sympy.exp(-t), xs, sympy.eye(n - 1))

    def zero_vec():
        return sympy.zeros(n - 1, 1)

    basis, fields = [], []
    for i, j in skew_pairs(block):
        basis.append(unit(size, {(i, j): 1, (j, i): -1}))
        b = sympy.zeros(n - 1, n - 1)
        b[i, j], b[j, i] = 1, -1
        fields.append(_fields(t, xs, b, zero_vec(), zero_vec(), 0))
    for i in block:
        basis.append(unit(size, {(i, y): 1, (z, i): -1}))
        v1 = zero_vec()
        v1[i] = 1
        fields.append(_fields(t, xs, sympy.zeros(n - 1, n - 1), v1, zero_vec(), 0))
    for i in block:
        basis.append(unit(size, {(i, z): 1, (y, i): -1}))
        v2 = zero_vec()
        v2[i] = 1
        fields.append(_fields(t, xs, sympy.zeros(n - 1, n - 1), zero_vec(), v2, 0))
    basis.append(unit(size, {(y, y): 1, (z, z): -1}))
    fields.append(_fields(t, xs, sympy.zeros(n - 1, n - 1), zero_vec(), zero_vec(), 1))

    algebra = MatrixLieAlgebra(f"so({n},1)", from_basis(basis, ScalarMode.EXACT))
    base_point = (sympy.log(2) / 2,) + (sympy.Integer(0),) * (n - 1)
    domain = ((-4.0, 4.0),) + ((-10.0, 10.0),) * (n - 1)
    model = ChartedHomSpace(
        name=f"horosphere_RH{n}",
        metric=metric,
        algebra=algebra,
        fields=tuple(sympy.Matrix([sympy.simplify(c) for c in f]) for f in fields),
        tags=tuple(FieldTag(FieldKind.KILLING) for _ in basis),
        base_point=base_point,
        chart_domain=domain,
        embed=_embed,
        chart=_chart,
    )

    rotations = [unit(size, {(i, j): 1, (j, i): -1}) for i, j in skew_pairs(block)]
    translations = [unit(size, {(i, z): -1, (y, i): 1}) for i in block]
    isotropy_v = [unit(size, {(i, y): 1, (z, i): -1, (i, z): 1, (y, i): -1}) for i in block]
    cartan_v = [unit(size, {(i, y): 1, (z, i): -1, (i, z): -1, (y, i): 1}) for i in block]
    boost = unit(size, {(y, y): 1, (z, z): -1})

    g_sub = MatrixLieAlgebra(f"so({n - 1})+R^{n - 1}", span(rotations + translations, size))
    return Fixture(
        name="horosphere",
        n=n,
        model=model,
        g_sub=g_sub,
        m_bar=span(cartan_v + [boost], size),
        expected_h_bar=span(rotations + isotropy_v, size),
        expected_m=span(translations, size),
        expected_n=span([boost], size),
        symmetric=True,
        conformal=False,
        principal=True,
        description="horospheres {t} x R^(n-1) in dt^2 + exp(-2t)|dx|^2",
    )
