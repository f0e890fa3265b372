from __future__ import annotations

from typing import List, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


SCHEMA_VERSION = 1


class StateFile(BaseModel):
    model_config = ConfigDict(allow_inf_nan=False)

    schema_version: int = Field(..., description="State file format version; only 1 is defined")
    dim_a: int = Field(..., ge=1, description="Dimension of Alice's subsystem")
    dim_b: int = Field(..., ge=1, description="Dimension of Bob's subsystem")
    matrix: List[Tuple[float, float]] = Field(
        ..., description="Row-major density matrix entries as [real, imag] pairs"
    )

    @field_validator("schema_version")
    @classmethod
    def _supported_version(cls, value: int) -> int:
        if value != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema_version {value}, expected {SCHEMA_VERSION}")
        return value

    @model_validator(mode="after")
    def _matrix_length(self) -> "StateFile":
        expected = (self.dim_a * self.dim_b) ** 2
        if len(self.matrix) != expected:
            raise ValueError(
                f"matrix has {len(self.matrix)} entries, expected (dim_a*dim_b)^2 = {expected}"
            )
        return self
