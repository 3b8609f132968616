from fastapi import APIRouter

from app.models.api import ShiftResponse, VerifyResponse
from app.models.documents import ColoringDocument, FactorizationDocument
from app.services.coloring import shift_vector, verify_interval
from app.services.documents import (
    coloring_to_document,
    document_to_coloring,
    document_to_factorization,
    factorization_to_document,
)
from app.services.equivalence import coloring_to_factorization, factorization_to_coloring

router = APIRouter(tags=["colorings"])


@router.post("/colorings/verify", response_model=VerifyResponse)
def verify_coloring(document: ColoringDocument):
    """Check an edge coloring for the interval property"""
    coloring = document_to_coloring(document)
    report = verify_interval(coloring)
    return VerifyResponse(n=coloring.n, t=coloring.t, valid=report.valid, failure=report.failure)


@router.post("/colorings/shift", response_model=ShiftResponse)
def coloring_shift(document: ColoringDocument):
    """Shift vector of an interval coloring under its canonical ordering"""
    coloring = document_to_coloring(document)
    vector = shift_vector(coloring)
    return ShiftResponse(
        n=coloring.n, t=coloring.t, shift_vector=list(vector.b), total=vector.total
    )


@router.post("/colorings/convert", response_model=FactorizationDocument)
def coloring_to_factorization_document(document: ColoringDocument):
    """Labeled 1-factorization behind an interval coloring"""
    factorization = coloring_to_factorization(document_to_coloring(document))
    return factorization_to_document(factorization)


@router.post("/factorizations/convert", response_model=ColoringDocument)
def factorization_to_coloring_document(document: FactorizationDocument):
    """Interval coloring of a labeled 1-factorization"""
    coloring = factorization_to_coloring(document_to_factorization(document))
    return coloring_to_document(coloring)
