"""Connections along orbits: ∇̄, ∇̃, D, their difference tensors, transport and parallelism checks."""
from src.connections.frames import AlgebraCoordinates, GroupCurve, PointData, curve_family
from src.connections.tensors import (
    AmbientConnections,
    Connection,
    ConnectionKind,
    GammaTensor,
    ReductiveConnections,
    connections_agree_on_tangent,
    corrupt_m,
    preimage_in,
)
from src.connections.transport import parallel_transport, transport_path
from src.connections.verify import (
    ConnectionReport,
    Residual,
    ambient_canonical_residuals,
    transport_check,
    verify_homogeneous_structure,
    verify_parallel_subbundle,
)

__all__ = [
    "AlgebraCoordinates",
    "AmbientConnections",
    "Connection",
    "ConnectionKind",
    "ConnectionReport",
    "GammaTensor",
    "GroupCurve",
    "PointData",
    "ReductiveConnections",
    "Residual",
    "ambient_canonical_residuals",
    "connections_agree_on_tangent",
    "corrupt_m",
    "curve_family",
    "parallel_transport",
    "preimage_in",
    "transport_check",
    "transport_path",
    "verify_homogeneous_structure",
    "verify_parallel_subbundle",
]
