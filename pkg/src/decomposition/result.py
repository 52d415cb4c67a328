"""Result containers for the reductive decomposition pipeline"""
from dataclasses import asdict, dataclass, field
from typing import Dict, Optional

from src.geometry.orbit import OrbitData
from src.lie.invariance import InvarianceReport
from src.linalg.forms import GramForm
from src.linalg.serialization import subspace_to_payload
from src.linalg.subspace import Subspace


@dataclass
class Certificates:
    ad_invariance: Dict[str, InvarianceReport] = field(default_factory=dict)
    phi_bar_h_bar_min_eigenvalue: float = 0.0
    phi_bar_h_bar_definite: bool = False
    direct_sums: Dict[str, bool] = field(default_factory=dict)
    h_equals_h_bar_cap_g: bool = False
    complement_identity: bool = False
    phi_bar_complement_match: Optional[bool] = None
    normal_match: bool = False
    normal_match_residual: float = 0.0
    m_plus_n_bracket_invariant: Optional[bool] = None
    invariance_level: str = "lie-algebra level only"

    @property
    def passed(self) -> bool:
        required = ("h_bar_m_bar", "h_m", "h_n")
        invariance_ok = all(self.ad_invariance[k].invariant for k in required if k in self.ad_invariance)
        return (invariance_ok and self.phi_bar_h_bar_definite and all(self.direct_sums.values())
                and self.h_equals_h_bar_cap_g and self.complement_identity and self.normal_match)

    def to_dict(self) -> dict:
        data = asdict(self)
        data["ad_invariance"] = {k: v.to_dict() for k, v in self.ad_invariance.items()}
        data["passed"] = self.passed
        return data


@dataclass
class DecompositionResult:
    """h̄ ⊕ m̄ = ḡ, h ⊕ m = g and ḡ = h̄ ⊕ m ⊕ n at the base point."""
    orbit: OrbitData
    h_bar: Subspace
    m_bar: Subspace
    h: Subspace
    m: Subspace
    psi: GramForm
    n: Optional[Subspace] = None
    certificates: Certificates = field(default_factory=Certificates)

    @property
    def mode(self):
        return self.m.mode

    def dims(self) -> Dict[str, int]:
        return {
            "g_bar": self.orbit.ambient.algebra.dim,
            "h_bar": self.h_bar.dim,
            "m_bar": self.m_bar.dim,
            "g": self.orbit.g_sub.dim,
            "h": self.h.dim,
            "m": self.m.dim,
            "n": self.n.dim if self.n is not None else 0,
        }

    def to_dict(self) -> dict:
        return {
            "dims": self.dims(),
            "bases": {
                "h_bar": subspace_to_payload(self.h_bar),
                "m_bar": subspace_to_payload(self.m_bar),
                "h": subspace_to_payload(self.h),
                "m": subspace_to_payload(self.m),
                "n": subspace_to_payload(self.n) if self.n is not None else [],
            },
            "certificates": self.certificates.to_dict(),
        }


@dataclass
class PrincipalOrbitReport:
    slice_residual: float
    slice_trivial: bool
    phi_vs_phi_bar: Optional[float]
    phi_complement_matches_m: Optional[bool]
    vacuous: bool
    passed: bool

    def to_dict(self) -> dict:
        return asdict(self)
