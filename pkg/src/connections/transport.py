"""Parallel transport along group curves by adaptive Runge-Kutta."""
from typing import Dict, List, Optional, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from src.config.settings import settings
from src.connections.frames import GroupCurve, PointData, velocity
from src.connections.tensors import Connection
from src.utils.error_handler import ChartDomainError, PreimageError, TransportError
from src.utils.logger import get_logger

logger = get_logger()


def _rhs(connection: Connection, curve: GroupCurve, segment: int, cols: int):
    n = connection.coordinates.model.dim

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        pd = PointData(connection.coordinates, curve.element(t, segment))
        a = connection.matrix(pd, velocity(pd, curve, t, segment))
        return -(a @ y.reshape(n, cols)).ravel()

    return rhs


def transport_path(connection: Connection, curve: GroupCurve, v0: np.ndarray,
                   times: Sequence[float], rtol: Optional[float] = None,
                   atol: Optional[float] = None) -> List[np.ndarray]:
    """Transported values of v0 (a vector or a matrix of column vectors) at each of ``times``."""
    rtol = settings.ode_rtol if rtol is None else rtol
    atol = settings.ode_atol if atol is None else atol
    v0 = np.asarray(v0, dtype=float)
    n = connection.coordinates.model.dim
    if v0.shape[0] != n:
        raise TransportError(f"initial vector has {v0.shape[0]} components, expected {n}")
    cols = 1 if v0.ndim == 1 else v0.shape[1]
    wanted = sorted(set(float(t) for t in times))
    if wanted and (wanted[0] < 0 or wanted[-1] > 1):
        raise TransportError("transport times must lie in [0, 1]")

    y = v0.reshape(-1).copy()
    found: Dict[float, np.ndarray] = {}
    last = wanted[-1] if wanted else 0.0
    for k, (a, b) in enumerate(curve.segments()):
        for t in wanted:
            if t == a:
                found.setdefault(t, y.copy())
        if a >= last:
            break
        end = min(b, last)
        try:
            sol = solve_ivp(_rhs(connection, curve, k, cols), (a, end), y, method="RK45",
                            rtol=rtol, atol=atol, dense_output=True)
        except (ChartDomainError, PreimageError) as e:
            raise TransportError(f"transport left the chart on segment {k}: {e}") from e
        if not sol.success:
            raise TransportError(f"integration failed on segment {k}: {sol.message}")
        for t in wanted:
            if a < t <= end:
                found[t] = sol.sol(t)
        y = sol.y[:, -1]
        logger.debug("Transported segment", kind=connection.kind.value, segment=k, steps=int(sol.t.size))
    shape = v0.shape
    return [found[float(t)].reshape(shape) for t in times]


def parallel_transport(connection: Connection, curve: GroupCurve, v0: np.ndarray,
                       t1: float = 1.0) -> np.ndarray:
    """τ_{c|[0, t1]} v0 for the given connection."""
    if t1 == 0:
        return np.asarray(v0, dtype=float).copy()
    return transport_path(connection, curve, v0, [t1])[0]
