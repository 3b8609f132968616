from fastapi import APIRouter, Depends, HTTPException, Query
from fastapi.concurrency import run_in_threadpool
from sqlalchemy import desc, select
from sqlalchemy.ext.asyncio import AsyncSession

from app.database.connection import get_db_session
from app.models.documents import ColoringDocument
from app.models.witness import Witness, WitnessCreate, WitnessRead
from app.services.coloring import shift_vector, verify_interval
from app.services.documents import coloring_to_document, document_to_coloring, dumps

router = APIRouter(prefix="/witnesses", tags=["witnesses"])


def _to_read(witness: Witness) -> WitnessRead:
    return WitnessRead(
        id=witness.id,
        n=witness.n,
        t=witness.t,
        method=witness.method,
        shift_vector=witness.shift_vector,
        created_at=witness.created_at,
        document=ColoringDocument.model_validate_json(witness.document),
    )


@router.post("", response_model=WitnessRead)
async def create_witness(payload: WitnessCreate, db: AsyncSession = Depends(get_db_session)):
    """Verify an interval coloring and store it"""
    coloring = document_to_coloring(payload.document)
    report = await run_in_threadpool(verify_interval, coloring)
    if report.failure is not None:
        raise HTTPException(status_code=422, detail=report.failure.message)

    method = payload.method or (
        payload.document.metadata.method if payload.document.metadata else None
    )
    db_witness = Witness(
        n=coloring.n,
        t=coloring.t,
        method=method,
        shift_vector=str(shift_vector(coloring)),
        document=dumps(coloring_to_document(coloring, method=method)),
    )
    db.add(db_witness)
    await db.commit()
    await db.refresh(db_witness)
    return _to_read(db_witness)


@router.get("", response_model=list[WitnessRead])
async def get_witnesses(
    skip: int = Query(0, ge=0),
    limit: int = Query(100, ge=1, le=1000),
    n: int = Query(None, ge=1, description="Filter by K2n"),
    db: AsyncSession = Depends(get_db_session),
):
    """Stored witnesses, largest t first"""
    query = select(Witness).order_by(desc(Witness.t), Witness.id)
    if n:
        query = query.where(Witness.n == n)
    query = query.offset(skip).limit(limit)
    result = await db.execute(query)
    return [_to_read(witness) for witness in result.scalars().all()]


@router.get("/{witness_id}", response_model=WitnessRead)
async def get_witness(witness_id: int, db: AsyncSession = Depends(get_db_session)):
    """Get a stored witness by ID"""
    witness = await db.get(Witness, witness_id)
    if not witness:
        raise HTTPException(status_code=404, detail="Witness not found")
    return _to_read(witness)


@router.delete("/{witness_id}")
async def delete_witness(witness_id: int, db: AsyncSession = Depends(get_db_session)):
    """Delete a stored witness"""
    witness = await db.get(Witness, witness_id)
    if not witness:
        raise HTTPException(status_code=404, detail="Witness not found")

    await db.delete(witness)
    await db.commit()
    return {"message": "Witness deleted successfully"}
