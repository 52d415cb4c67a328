"""Pointwise invariants of a charted model, checked against finite-difference oracles"""
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from src.config.settings import settings
from src.geometry.model import ChartedHomSpace, FieldKind
from src.lie.algebra import bracket
from src.linalg.scalar import Mat, as_float
from src.utils.logger import get_logger, log_execution_time

logger = get_logger()


def field_bracket(model: ChartedHomSpace, x: Mat, y: Mat, p: np.ndarray, h: Optional[float] = None) -> np.ndarray:
    """Lie bracket of vector fields [X*, Y*]_p with finite-difference Jacobians."""
    fx = model.fundamental_field(as_float(x), p)
    fy = model.fundamental_field(as_float(y), p)
    jx = model.field_jacobian_oracle(x, p, h)
    jy = model.field_jacobian_oracle(y, p, h)
    return jy @ fx - jx @ fy


def anti_homomorphism_residual(model: ChartedHomSpace, x: Mat, y: Mat, p: np.ndarray) -> float:
    """|[X,Y]*_p + [X*,Y*]_p|."""
    xf, yf = as_float(x), as_float(y)
    lhs = model.fundamental_field(bracket(xf, yf), p)
    return float(np.max(np.abs(lhs + field_bracket(model, xf, yf, p))))


def killing_residual(model: ChartedHomSpace, index: int, p: np.ndarray) -> float:
    """|L_{X*} g - 2λ g| for basis element ``index`` with its tagged λ."""
    x = as_float(model.algebra.basis.basis[index])
    tag = model.tags[index]
    lam = float(tag.factor) if tag.kind == FieldKind.CONFORMAL else 0.0
    return float(np.max(np.abs(model.lie_derivative_metric(x, p) - 2 * lam * model.metric_at(p))))


def christoffel_oracle_residual(model: ChartedHomSpace, p: np.ndarray) -> float:
    closed = model.christoffel_at(p)
    oracle = model.christoffel_oracle(p)
    return float(np.max(np.abs(closed - oracle)) / max(1.0, np.max(np.abs(closed))))


def jacobian_oracle_residual(model: ChartedHomSpace, index: int, p: np.ndarray) -> float:
    x = as_float(model.algebra.basis.basis[index])
    closed = model.field_jacobian(x, p)
    oracle = model.field_jacobian_oracle(x, p)
    return float(np.max(np.abs(closed - oracle)) / max(1.0, np.max(np.abs(closed))))


@dataclass
class ModelCheckReport:
    points: int
    min_metric_eigenvalue: float
    anti_homomorphism: float
    killing: float
    christoffel_oracle: float
    jacobian_oracle: float
    passed: bool

    def to_dict(self) -> dict:
        return asdict(self)


@log_execution_time()
def check_model(model: ChartedHomSpace, count: Optional[int] = None, seed: int = 0) -> ModelCheckReport:
    """Sample points and evaluate every model invariant."""
    points = model.sample_points(count, seed)
    basis = model.algebra.basis.basis
    d = len(basis)
    min_eig = np.inf
    anti = killing = gamma = jac = 0.0
    for p in points:
        min_eig = min(min_eig, float(np.linalg.eigvalsh(model.metric_at(p)).min()))
        gamma = max(gamma, christoffel_oracle_residual(model, p))
        for i in range(d):
            killing = max(killing, killing_residual(model, i, p))
            jac = max(jac, jacobian_oracle_residual(model, i, p))
            for j in range(i + 1, d):
                anti = max(anti, anti_homomorphism_residual(model, basis[i], basis[j], p))

    passed = (min_eig > 0 and anti < settings.skew_gate and killing < settings.skew_gate
              and gamma < settings.oracle_rtol and jac < settings.oracle_rtol)
    report = ModelCheckReport(points=len(points), min_metric_eigenvalue=float(min_eig),
                              anti_homomorphism=anti, killing=killing, christoffel_oracle=gamma,
                              jacobian_oracle=jac, passed=bool(passed))
    logger.info("Model invariants", model=model.name, **report.to_dict())
    return report
