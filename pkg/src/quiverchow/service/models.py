"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class KroneckerSpec(BaseModel):
    m: int = Field(ge=1)
    d: int = Field(ge=0)
    e: int = Field(ge=0)


class QuiverSpecModel(BaseModel):
    vertices: int = Field(ge=1)
    arrows: list[tuple[int, int]]
    d: list[int]
    theta: Optional[list[int]] = None


class JobRequest(BaseModel):
    """One computation job: exactly one input source plus options."""

    model_config = ConfigDict(extra="forbid")

    kronecker: Optional[KroneckerSpec] = None
    quiver: Optional[QuiverSpecModel] = None
    theta: Optional[list[int]] = None
    polarization: Optional[list[int]] = None
    series_length: Optional[int] = Field(default=None, ge=0)
    threads: int = Field(default=1, ge=1)
    extended: bool = False

    @model_validator(mode="after")
    def _one_source(self):
        if (self.kronecker is None) == (self.quiver is None):
            raise ValueError("provide exactly one of 'kronecker' or 'quiver'")
        return self


class InvariantsResponse(BaseModel):
    label: str
    dimension: int
    index: int
    degree: int
    hilbert_values: list[int]
    hilbert_numerator: list[int]
    chi_O: int
    chi_T: int
    chi_top: int
    quotient_dimensions: list[int]


class PointClassResponse(BaseModel):
    label: str
    dimension: int
    reduced: dict[str, str]  # quotient-basis monomial -> exact rational
    sides_agree: bool
    integral: str


class ToddResponse(BaseModel):
    label: str
    dimension: int
    components: dict[int, str]  # degree -> canonical polynomial dump


class HilbertResponse(BaseModel):
    label: str
    dimension: int
    index: int
    values: list[int]
    numerator: list[int]


class CheckRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    level: Literal["quick", "full"] = "quick"
    extended: bool = False
    threads: int = Field(default=1, ge=1)


class CheckResponse(BaseModel):
    ok: bool
    passed: int
    failed: int
    lines: list[str]


class ErrorBody(BaseModel):
    kind: Literal["usage", "assumption-violation", "structural"]
    message: str
