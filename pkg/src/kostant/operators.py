"""
Kostant operators K̄_X = ∇̄X* at the base point and their block form along an orbit.

Chart-frame matrices are exact when the element is exact; the orthonormal
representation is always float.
"""
from dataclasses import asdict, dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from src.config.settings import settings
from src.geometry.model import ChartedHomSpace
from src.geometry.orbit import OrbitData, gram_schmidt, inverse
from src.lie.algebra import bracket
from src.lie.killing import skew_residual
from src.linalg.scalar import Mat, ScalarMode, as_float, convert, is_zero, max_abs, mode_of
from src.linalg.subspace import Subspace
from src.utils.error_handler import SubspaceError
from src.utils.logger import get_logger

logger = get_logger()


def orthonormal_frame(metric: Mat, order: Optional[np.ndarray] = None) -> np.ndarray:
    """Orthonormal columns from Gram-Schmidt on the chart basis, or on the columns of ``order``."""
    g = as_float(metric)
    vectors = list(np.eye(g.shape[0]) if order is None else np.asarray(order, dtype=float).T)
    return np.stack(gram_schmidt(vectors, g, normalize=True), axis=1)


@dataclass(frozen=True, eq=False)
class KostantOperator:
    element: Mat
    chart_matrix: Mat  # [k, j]: K̄_X(∂_j)^k
    metric: Mat

    @property
    def mode(self) -> ScalarMode:
        return mode_of(np.asarray(self.chart_matrix))

    @cached_property
    def skew_residual(self) -> float:
        """|K^T G + G K| in the chart frame."""
        k, g = self.chart_matrix, self.metric
        return max_abs(k.T @ g + g @ k)

    def matrix_in(self, frame: np.ndarray) -> np.ndarray:
        frame = as_float(frame)
        return np.linalg.solve(frame, as_float(self.chart_matrix) @ frame)

    @cached_property
    def matrix_rep(self) -> np.ndarray:
        """Matrix in the default orthonormal frame at o (skew for Killing fields)."""
        return self.matrix_in(orthonormal_frame(self.metric))

    @property
    def orthonormal_skew_residual(self) -> float:
        return skew_residual(self.matrix_rep)

    def __call__(self, u: Mat) -> Mat:
        return self.chart_matrix @ u


def kostant(model: ChartedHomSpace, x: Mat) -> KostantOperator:
    """A ↦ ∇̄_A X* at o; rejects elements with a conformal component."""
    model.require_isometric(x)
    mode = mode_of(np.asarray(x))
    return KostantOperator(element=x, chart_matrix=model.covariant_derivative(x),
                           metric=model.metric_at(mode=mode))


@dataclass(frozen=True, eq=False)
class KostantBlocks:
    """K̄_X in the adapted frame: tangent columns first, then normal."""
    operator: KostantOperator
    frame: Mat
    orbit_dim: int
    adapted: Mat

    @property
    def tangent_block(self) -> Mat:
        m = self.orbit_dim
        return self.adapted[:m, :m]

    @property
    def second_fundamental_block(self) -> Mat:
        m = self.orbit_dim
        return self.adapted[m:, :m]

    @property
    def mixed_block(self) -> Mat:
        m = self.orbit_dim
        return self.adapted[:m, m:]

    @property
    def normal_block(self) -> Mat:
        m = self.orbit_dim
        return self.adapted[m:, m:]

    def second_fundamental(self, j: int) -> Mat:
        """II(X*_o, u_j) as a chart vector, u_j the j-th tangent frame vector."""
        m = self.orbit_dim
        return self.frame[:, m:] @ self.adapted[m:, j]

    def reassemble(self) -> Mat:
        return np.block([[self.tangent_block, self.mixed_block],
                         [self.second_fundamental_block, self.normal_block]])


def kostant_blocks(orbit: OrbitData, x: Mat, operator: Optional[KostantOperator] = None) -> KostantBlocks:
    if not orbit.g_sub.basis.to_mode(mode_of(np.asarray(x))).contains(x):
        raise SubspaceError("Kostant blocks along the orbit need an element of g")
    if orbit.mode == ScalarMode.FLOAT:
        x = as_float(x)
    operator = operator or kostant(orbit.ambient, x)
    mode = operator.mode
    frame = orbit.adapted_frame()
    if mode == ScalarMode.FLOAT:
        frame = as_float(frame)
    adapted = inverse(frame, mode) @ operator.chart_matrix @ frame
    return KostantBlocks(operator=operator, frame=frame, orbit_dim=orbit.dim, adapted=adapted)


def isotropy_bracket_residual(model: ChartedHomSpace, x: Mat, y: Mat) -> float:
    """|K̄_X(Y*_o) - [X, Y]*_o| for X in the isotropy algebra."""
    if not is_zero(model.fundamental_field(x), settings.strict_gate):
        raise SubspaceError("isotropy identity needs X*_o = 0")
    mode = mode_of(np.asarray(x))
    y = convert(y, mode)
    lhs = kostant(model, x)(model.fundamental_field(y))
    return max_abs(lhs - model.fundamental_field(bracket(x, y)))


@dataclass
class KostantReport:
    skew_residual: float
    orthonormal_skew_residual: float
    isotropy_bracket_residual: float
    operators: int
    passed: bool

    def to_dict(self) -> dict:
        return asdict(self)


def kostant_report(model: ChartedHomSpace, h_bar: Subspace) -> KostantReport:
    """Skewness of K̄_X over the isometric basis and the isotropy bracket identity on h̄ × ḡ."""
    mode = h_bar.mode
    basis = [x for x in model.algebra.basis.to_mode(mode).basis if model.is_isometric(x)]
    operators = [kostant(model, x) for x in basis]
    skew = max([op.skew_residual for op in operators] + [0.0])
    ortho = max([op.orthonormal_skew_residual for op in operators] + [0.0])
    identity = 0.0
    for x in h_bar.basis:
        for y in model.algebra.basis.to_mode(mode).basis:
            identity = max(identity, isotropy_bracket_residual(model, x, y))
    if mode == ScalarMode.EXACT:
        passed = skew == 0 and identity == 0
    else:
        passed = skew < settings.skew_gate and identity < settings.skew_gate
    report = KostantReport(skew_residual=float(skew), orthonormal_skew_residual=float(ortho),
                           isotropy_bracket_residual=float(identity), operators=len(operators),
                           passed=bool(passed))
    logger.info("Kostant operators", model=model.name, **report.to_dict())
    return report
