"""Pydantic request/response envelopes for the service.

Polynomials, words, catalogs and reports travel as the package's JSON wire
formats (arbitrary-precision rationals as decimal-string pairs), so the
models treat those bodies as opaque dicts and validation happens in the
domain parsers, which produce precise error messages.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field


class HealthResponse(BaseModel):
    status: str
    version: str


class CatalogPayload(BaseModel):
    """Either an inline catalog document or 'bundled'."""

    catalog: Optional[dict] = None
    use_bundled: bool = True


class ValidateRequest(CatalogPayload):
    pass


class ValidateResponse(BaseModel):
    entries: int
    names: list[str]
    automorphisms: list[str]


class ComposeRequest(CatalogPayload):
    left: str
    right: str


class ComposeResponse(BaseModel):
    map: dict
    keller: bool
    degree: float


class DegreeRequest(CatalogPayload):
    name: str
    trials: int = Field(default=16, ge=1)
    seed: int = Field(default=0, ge=0)


class DegreeResponse(BaseModel):
    name: str
    degree: int
    trials: int
    seed: int
    cardinalities: list[int]
    bezout_bound: float


class DecomposeRequest(CatalogPayload):
    name: str


class DecomposeResponse(BaseModel):
    name: str
    word: dict
    factors: int


class InvertRequest(CatalogPayload):
    name: str


class InvertResponse(BaseModel):
    name: str
    word: dict
    inverse_map: dict


class DomainSpec(BaseModel):
    kind: Literal["ball", "charset"] = "ball"
    radius: float = 1.0
    charset: Optional[dict] = None


class RhoRequest(CatalogPayload):
    left: str
    right: str
    domain: DomainSpec = DomainSpec()
    samples: int = Field(default=100_000, ge=10_000)
    seed: int = Field(default=0, ge=0)
    workers: int = Field(default=1, ge=1)


class RhoResponse(BaseModel):
    left: str
    right: str
    value: float
    stderr: float
    samples: int
    seed: int
    box: Optional[list[list[float]]] = None


class TractSearchRequest(CatalogPayload):
    name: Optional[str] = None
    map: Optional[dict] = None
    alpha_max: int = Field(default=2, ge=0)
    beta_max: int = Field(default=2, ge=0)
    phi_deg_max: int = Field(default=1, ge=0)


class TractHit(BaseModel):
    alpha: int
    beta: int
    phi: list[dict]
    flags: list[str]


class TractSearchResponse(BaseModel):
    tracts: list[TractHit]


class CharsetBuildRequest(BaseModel):
    ball_radius: float = 2.0
    slices: int = Field(default=2, ge=1)
    bundles_per_slice: int = Field(default=2, ge=1)
    fattening_radius: float = Field(default=0.0, ge=0.0)
    seed: int = Field(default=0, ge=0)


class CharsetBuildResponse(BaseModel):
    charset: dict
    stars: int
    removed_volume: float


class ExperimentRequest(CatalogPayload):
    config: dict


class ErrorEnvelope(BaseModel):
    kind: Literal["input", "numeric"]
    type: str
    message: str
