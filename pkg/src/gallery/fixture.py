"""Fixture container and the small matrix helpers shared by the builders"""
import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from src.geometry.model import ChartedHomSpace
from src.lie.algebra import MatrixLieAlgebra
from src.linalg.scalar import Mat, ScalarMode, format_fraction, zeros
from src.linalg.serialization import subspace_to_payload
from src.linalg.subspace import Subspace, from_basis, zero_space
from src.utils.error_handler import FixtureError


def unit(size: int, entries: Dict[tuple, int]) -> Mat:
    """Exact size×size matrix with the given (row, col) -> value entries."""
    out = zeros((size, size), ScalarMode.EXACT)
    for (i, j), value in entries.items():
        out[i, j] = Fraction(value)
    return out


def skew_pairs(indices: Sequence[int]) -> List[tuple]:
    return [(i, j) for a, i in enumerate(indices) for j in indices[a + 1:]]


def span(matrices: List[Mat], size: int) -> Subspace:
    if not matrices:
        return zero_space((size, size), ScalarMode.EXACT)
    return from_basis(matrices, ScalarMode.EXACT)


def require_dimension(name: str, n: int, minimum: int = 3):
    if n < minimum:
        raise FixtureError(f"{name} needs n >= {minimum}, got {n}")


@dataclass(frozen=True, eq=False)
class Fixture:
    """A charted ambient model, an orbit algebra and the decomposition it is expected to produce."""
    name: str
    n: int
    model: ChartedHomSpace
    g_sub: MatrixLieAlgebra
    m_bar: Subspace  # reductive complement fed to the pipeline
    expected_h_bar: Subspace
    expected_m: Subspace
    expected_n: Subspace
    symmetric: bool
    conformal: bool
    principal: bool
    description: str = ""

    @property
    def ambient_isometric(self) -> bool:
        return not self.conformal

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "n": self.n,
            "description": self.description,
            "coordinates": [str(c) for c in self.model.coords],
            "base_point": [str(c) for c in self.model.base_point],
            "chart_domain": [list(b) for b in self.model.chart_domain],
            "metric": [[str(v) for v in row] for row in self.model.metric.matrix.tolist()],
            "algebra": subspace_to_payload(self.model.algebra.basis),
            "fields": [[str(v) for v in f] for f in self.model.fields],
            "field_tags": [{"kind": t.kind.value, "factor": format_fraction(t.factor)} for t in self.model.tags],
            "g": subspace_to_payload(self.g_sub.basis),
            "m_bar": subspace_to_payload(self.m_bar),
            "expected": {
                "h_bar": subspace_to_payload(self.expected_h_bar),
                "m": subspace_to_payload(self.expected_m),
                "n": subspace_to_payload(self.expected_n),
            },
            "flags": {"symmetric": self.symmetric, "conformal": self.conformal, "principal": self.principal},
        }


def export_fixture(fixture: Fixture, path: Optional[Path] = None) -> str:
    """JSON text of a fixture; written to ``path`` when given."""
    text = json.dumps(fixture.to_dict(), indent=2, sort_keys=True)
    if path is not None:
        Path(path).write_text(text + "\n", encoding="utf-8")
    return text
