"""JSON payloads for matrices: exact entries as "p/q" strings, float entries as numbers"""
from typing import List, Union

import numpy as np
from pydantic import BaseModel, model_validator

from src.linalg.scalar import Mat, ScalarMode, as_exact, format_fraction, mode_of
from src.linalg.subspace import Subspace


class MatrixPayload(BaseModel):
    rows: int
    cols: int
    entries: List[List[Union[str, float]]]

    @model_validator(mode="after")
    def _check_size(self):
        if self.rows <= 0 or self.cols <= 0:
            raise ValueError("rows and cols must be positive")
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError(f"entries do not form a {self.rows}x{self.cols} grid")
        kinds = {isinstance(v, str) for r in self.entries for v in r}
        if len(kinds) > 1:
            raise ValueError("exact and float entries mixed in one matrix")
        return self

    @property
    def mode(self) -> ScalarMode:
        return ScalarMode.EXACT if isinstance(self.entries[0][0], str) else ScalarMode.FLOAT


def matrix_to_payload(x: Mat) -> dict:
    x = np.atleast_2d(np.asarray(x))
    if mode_of(x) == ScalarMode.EXACT:
        entries = [[format_fraction(v) for v in row] for row in x]
    else:
        entries = [[float(v) for v in row] for row in x]
    return {"rows": x.shape[0], "cols": x.shape[1], "entries": entries}


def matrix_from_payload(data: Union[dict, MatrixPayload]) -> Mat:
    payload = data if isinstance(data, MatrixPayload) else MatrixPayload.model_validate(data)
    if payload.mode == ScalarMode.EXACT:
        return as_exact(payload.entries)
    return np.asarray(payload.entries, dtype=float)


def subspace_to_payload(sub: Subspace) -> list:
    return [matrix_to_payload(b) for b in sub.basis]
