from typing import Literal

from pydantic import BaseModel, Field

FORMAT_VERSION = 1


class DocumentEdge(BaseModel):
    a: int = Field(ge=0)
    b: int = Field(ge=0)
    color: int = Field(ge=1)


class ColoringMetadata(BaseModel):
    method: str | None = None
    shift_vector: list[int] | None = None


class ColoringDocument(BaseModel):
    """Serialized interval coloring of K2n"""

    format_version: int = FORMAT_VERSION
    n: int = Field(ge=1)
    t: int = Field(ge=1)
    edges: list[DocumentEdge]
    metadata: ColoringMetadata | None = None


class MatchingEntry(BaseModel):
    label: Literal["free"] | int
    edges: list[tuple[int, int]]


class FactorizationDocument(BaseModel):
    """Serialized labeled 1-factorization; ``ordering`` lists u1, v1, ..., un, vn"""

    format_version: int = FORMAT_VERSION
    n: int = Field(ge=1)
    ordering: list[int] | None = None
    matchings: list[MatchingEntry]


class CertificateDocument(BaseModel):
    format_version: int = FORMAT_VERSION
    n: int
    total: int
    filters: list[str]
    examined: int
    survivors: int
    empty: bool
    claimed_bound: int | None = None
