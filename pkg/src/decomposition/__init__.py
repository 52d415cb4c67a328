"""Reductive decompositions of the ambient algebra and of an orbit algebra"""
from src.decomposition.pipeline import (
    ambient_reductive_complement,
    induced_orbit_decomposition,
    isotropy_algebra,
    normal_complement,
    principal_orbit_report,
    require_reductive_complement,
)
from src.decomposition.result import Certificates, DecompositionResult, PrincipalOrbitReport
