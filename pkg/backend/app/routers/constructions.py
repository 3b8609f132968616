from fastapi import APIRouter, Query

from app.models.api import CompositeRequest, DocumentFormat
from app.models.documents import ColoringDocument, FactorizationDocument
from app.models.factorization import ConstructionMethod, LabeledFactorization
from app.services.constructions import construct, construct_composite
from app.services.documents import (
    coloring_to_document,
    document_to_factorization,
    factorization_to_document,
)
from app.services.equivalence import factorization_to_coloring

router = APIRouter(prefix="/constructions", tags=["constructions"])


def _render(
    factorization: LabeledFactorization, output: DocumentFormat, method: ConstructionMethod
) -> ColoringDocument | FactorizationDocument:
    # Conversion verifies the coloring before anything is returned
    coloring = factorization_to_coloring(factorization)
    if output == DocumentFormat.FACTORIZATION:
        return factorization_to_document(factorization)
    return coloring_to_document(coloring, method=method.value)


@router.post("/composite", response_model=ColoringDocument | FactorizationDocument)
def build_composite(
    request: CompositeRequest,
    output: DocumentFormat = Query(DocumentFormat.COLORING, alias="format"),
):
    """Combine factorizations of K2m and K2n into one of K2mn"""
    factorization = construct_composite(
        document_to_factorization(request.left), document_to_factorization(request.right)
    )
    return _render(factorization, output, ConstructionMethod.COMPOSITE)


@router.get("/{method}", response_model=ColoringDocument | FactorizationDocument)
def build(
    method: ConstructionMethod,
    n: int = Query(..., ge=1, le=64, description="Half the number of vertices"),
    output: DocumentFormat = Query(DocumentFormat.COLORING, alias="format"),
):
    """Run a single-size construction"""
    return _render(construct(method, n), output, method)
