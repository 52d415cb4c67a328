"""
Flat R^n with its translation group.

Translations are (n+1)×(n+1) matrices [[0, v], [0, 0]] acting on (x, 1);
the field of the i-th translation is the constant coordinate field e_i. The
isotropy algebra is trivial, m̄ = ḡ, and the orbit of the first k
translations through the origin is a totally geodesic flat R^k.
"""
import numpy as np
import sympy

from src.gallery.fixture import Fixture, span, unit
from src.geometry.metrics import flat_metric
from src.geometry.model import ChartedHomSpace, FieldKind, FieldTag
from src.lie.algebra import MatrixLieAlgebra
from src.utils.error_handler import FixtureError


def build_euclidean(n: int, k: int = 1) -> Fixture:
    if n < 1 or not 1 <= k <= n:
        raise FixtureError(f"euclidean needs n >= 1 and 1 <= k <= n, got n={n}, k={k}")
    size = n + 1
    coords = sympy.symbols(f"x0:{n}", real=True)
    translations = [unit(size, {(i, n): 1}) for i in range(n)]
    fields = tuple(sympy.Matrix([sympy.Integer(int(i == j)) for j in range(n)]) for i in range(n))

    model = ChartedHomSpace(
        name=f"euclidean_R{n}",
        metric=flat_metric(coords),
        algebra=MatrixLieAlgebra(f"R^{n}", span(translations, size)),
        fields=fields,
        tags=tuple(FieldTag(FieldKind.KILLING) for _ in range(n)),
        base_point=(sympy.Integer(0),) * n,
        chart_domain=((-10.0, 10.0),) * n,
        embed=lambda p: np.concatenate([np.asarray(p, dtype=float), [1.0]]),
        chart=lambda w: np.asarray(w[:n], dtype=float) / float(w[n]),
    )
    return Fixture(
        name="euclidean",
        n=n,
        model=model,
        g_sub=MatrixLieAlgebra(f"R^{k}", span(translations[:k], size)),
        m_bar=span(translations, size),
        expected_h_bar=span([], size),
        expected_m=span(translations[:k], size),
        expected_n=span(translations[k:], size),
        symmetric=True,
        conformal=False,
        principal=True,
        description=f"coordinate R^{k} in flat R^{n}",
    )
