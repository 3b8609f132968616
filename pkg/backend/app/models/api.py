from enum import Enum

from sqlmodel import SQLModel

from app.models.coloring import FailureWitness
from app.models.documents import CertificateDocument, FactorizationDocument


class DocumentFormat(str, Enum):
    COLORING = "coloring"
    FACTORIZATION = "factorization"


class VerifyResponse(SQLModel):
    n: int
    t: int
    valid: bool
    failure: FailureWitness | None = None


class ShiftResponse(SQLModel):
    n: int
    t: int
    shift_vector: list[int]
    total: int


class CompositeRequest(SQLModel):
    """Outer factorization of K2m and inner factorization of K2n"""

    left: FactorizationDocument
    right: FactorizationDocument


class CertifiedBoundResponse(SQLModel):
    n: int
    bound: int
    certificates: list[CertificateDocument]
