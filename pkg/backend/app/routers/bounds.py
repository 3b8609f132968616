from fastapi import APIRouter, HTTPException, Query

from app.core.config import settings
from app.core.exceptions import PreconditionError
from app.models.api import CertifiedBoundResponse
from app.models.bounds import MFilterResult, ReferenceBounds, TableColumn
from app.models.documents import CertificateDocument
from app.services.bounds import (
    certificate,
    certified_upper_bound,
    m_filter,
    reference_formulas,
    table_columns,
)
from app.services.documents import certificate_to_document

router = APIRouter(prefix="/bounds", tags=["bounds"])


@router.get("/table", response_model=list[TableColumn])
def bounds_table(max_n: int = Query(18, ge=1, le=64)):
    """Lower, exact and upper rows for n = 1..max_n"""
    return table_columns(max_n, workers=settings.search_workers)


@router.get("/m-filter", response_model=MFilterResult)
def minimal_weighted_sum(k: int = Query(..., ge=1, le=16), r: int = Query(..., ge=0)):
    """Smallest sum of i * b_i over feasible prefixes of length k and sum r"""
    result = m_filter(k, r)
    if result is None:
        raise HTTPException(status_code=404, detail="No feasible prefix")
    return result


@router.get("/{n}", response_model=ReferenceBounds)
def bounds_for(n: int):
    """Closed-form bounds and conjectures for K2n"""
    return reference_formulas(n)


@router.get("/{n}/certificate", response_model=CertificateDocument)
def bound_certificate(n: int, total: int = Query(..., ge=0)):
    """Exhaust every candidate shift vector of one total"""
    _check_certifiable(n)
    return certificate_to_document(certificate(n, total, workers=settings.search_workers))


@router.get("/{n}/certified", response_model=CertifiedBoundResponse)
def certified_bound(n: int):
    """Upper bound proved by descending totals until a vector survives"""
    _check_certifiable(n)
    bound, certificates = certified_upper_bound(n, workers=settings.search_workers)
    return CertifiedBoundResponse(
        n=n, bound=bound, certificates=[certificate_to_document(c) for c in certificates]
    )


def _check_certifiable(n: int) -> None:
    if not 1 <= n <= settings.certify_max_n:
        raise PreconditionError(f"certification is limited to 1 <= n <= {settings.certify_max_n}")
