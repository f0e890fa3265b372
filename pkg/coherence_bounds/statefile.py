"""Read and write bipartite states as versioned JSON files.

Floats are written with their shortest round-trip representation, so a
save/load cycle reproduces the matrix bit for bit.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Union

import numpy as np
from pydantic import ValidationError

from .errors import CoherenceBoundsError, StateFileError
from .qmatrix import BipartiteState
from .schemas import SCHEMA_VERSION, StateFile


logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def to_state_file(s: BipartiteState) -> StateFile:
    flat = s.rho.ravel()
    return StateFile(
        schema_version=SCHEMA_VERSION,
        dim_a=s.dim_a,
        dim_b=s.dim_b,
        matrix=[(float(z.real), float(z.imag)) for z in flat],
    )


def dumps_state(s: BipartiteState) -> str:
    # json uses repr() for floats: shortest string that round-trips
    return json.dumps(to_state_file(s).model_dump(), indent=2) + "\n"


def _describe(exc: ValidationError) -> str:
    first = exc.errors()[0]
    location = ".".join(str(part) for part in first.get("loc", ())) or "file"
    return f"{location}: {first.get('msg', 'invalid value')}"


def loads_state(text: str) -> BipartiteState:
    try:
        model = StateFile.model_validate_json(text)
    except ValidationError as exc:
        raise StateFileError(f"Malformed state file ({_describe(exc)})") from exc
    dim = model.dim_a * model.dim_b
    pairs = np.asarray(model.matrix, dtype=np.float64)
    rho = (pairs[:, 0] + 1j * pairs[:, 1]).reshape(dim, dim)
    try:
        return BipartiteState(rho, model.dim_a, model.dim_b)
    except CoherenceBoundsError as exc:
        raise StateFileError(f"State file matrix is not a valid density matrix: {exc}") from exc


def save_state(s: BipartiteState, path: PathLike) -> Path:
    out = Path(path)
    out.write_text(dumps_state(s), encoding="utf-8")
    logger.info("Wrote %dx%d state to %s", s.dim_a, s.dim_b, out)
    return out


def load_state(path: PathLike) -> BipartiteState:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise StateFileError(f"Cannot read state file {p}: {exc}") from exc
    return loads_state(text)
