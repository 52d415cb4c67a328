"""JSON run report and its human summary"""
import json
import math
import os
import tempfile
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, Field

from src.linalg.scalar import format_fraction

SCHEMA_VERSION = "1.1"

# what each results key certifies
CLAIMS: Dict[str, str] = {
    "model_invariants": "ambient model: metric, Killing equations and Christoffel oracle",
    "kostant_operators": "Kostant operators are skew and K̄_X(Y*_o) = [X, Y]*_o on the isotropy algebra",
    "psi_invariant_inner_product": "psi is positive definite and Ad(H̄)-invariant on the ambient algebra",
    "reductive_decomposition": "m̄ = h̄^⊥ is reductive and induces g = h ⊕ m with h = g ∩ h̄ and normal part n",
    "m_plus_n_not_invariant": "m ⊕ n fails h̄-bracket invariance when h is smaller than h̄",
    "principal_orbit_forms": "phi = phi_bar on h × g and h^⊥phi ∩ g = m on a principal orbit",
    "ambient_canonical": "∇̃S̄, ∇̃R̄ and ∇̃ḡ vanish along sampled rays",
    "tangent_bundle_parallel": "TM is D-parallel and DΓ = 0 along sampled curves",
    "difference_identity": "DΓ - DS = -DS̄ = 0 along sampled curves",
    "negative_control": "a corrupted m breaks TM-parallelism",
    "homogeneous_structure": "D = ∇̄ - S is metric with TM and S D-parallel",
    "transport_pushforward": "D-transport along exp(tX)·o equals the group pushforward",
}


def sanitize(value: Any) -> Any:
    """JSON-safe copy: non-finite floats become strings, numpy scalars become Python ones."""
    if isinstance(value, dict):
        return {str(k): sanitize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [sanitize(v) for v in value]
    if isinstance(value, np.ndarray):
        return sanitize(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, Fraction):
        return format_fraction(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    if isinstance(value, Path):
        return str(value)
    return value


class Report(BaseModel):
    schema_version: str = SCHEMA_VERSION
    verb: str
    config: Dict[str, Any]
    fixture: Dict[str, Any]
    checks: List[str]
    sections: Dict[str, Any] = Field(default_factory=dict)
    results: Dict[str, Optional[bool]] = Field(default_factory=dict)
    timing: Optional[Dict[str, float]] = None

    @property
    def passed(self) -> bool:
        return all(v for v in self.results.values() if v is not None)

    def to_payload(self) -> dict:
        data = sanitize(self.model_dump())
        data["claims"] = {name: CLAIMS.get(name, "") for name in self.results}
        data["passed"] = self.passed
        return data

    def to_json(self) -> str:
        return json.dumps(self.to_payload(), indent=2, sort_keys=True, allow_nan=False) + "\n"

    def write(self, path: Path) -> Path:
        """Atomic write: a temp file in the target directory, then os.replace."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as f:
                f.write(self.to_json())
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return path

    def summary(self) -> str:
        """Fixed-width table of check outcomes."""
        rows = [("check", "status")]
        for name in sorted(self.results):
            outcome = self.results[name]
            status = "n/a" if outcome is None else ("PASS" if outcome else "FAIL")
            rows.append((name, status))
        width = max(len(r[0]) for r in rows)
        lines = [f"{self.fixture.get('name', '?')} (n={self.fixture.get('n', '?')}) "
                 f"- {self.verb}, mode={self.config.get('mode')}, seed={self.config.get('seed')}"]
        lines.append(f"{rows[0][0]:<{width}}  {rows[0][1]}")
        lines.append("-" * (width + 8))
        lines.extend(f"{name:<{width}}  {status}" for name, status in rows[1:])
        lines.append("-" * (width + 8))
        lines.append(f"{'overall':<{width}}  {'PASS' if self.passed else 'FAIL'}")
        if self.timing:
            total = sum(self.timing.values())
            lines.append(f"{'elapsed':<{width}}  {total:.2f}s")
        return "\n".join(lines)
