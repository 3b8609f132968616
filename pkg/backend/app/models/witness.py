from datetime import UTC, datetime

from sqlmodel import Field, SQLModel

from app.models.documents import ColoringDocument


class Witness(SQLModel, table=True):
    """Verified interval coloring kept as a lower-bound witness"""

    __tablename__ = "witnesses"

    id: int | None = Field(default=None, primary_key=True)
    n: int = Field(index=True)
    t: int
    method: str | None = None
    shift_vector: str  # comma separated, "1,1,3,0,0"
    document: str  # canonical ColoringDocument JSON
    created_at: datetime = Field(default_factory=lambda: datetime.now(UTC).replace(tzinfo=None))


class WitnessCreate(SQLModel):
    """Model for storing a new witness"""

    document: ColoringDocument
    method: str | None = None


class WitnessRead(SQLModel):
    id: int
    n: int
    t: int
    method: str | None
    shift_vector: str
    created_at: datetime
    document: ColoringDocument
