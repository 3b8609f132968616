from pydantic import BaseModel, ConfigDict, Field

from app.models.factorization import LabeledFactorization


class SearchBudget(BaseModel):
    model_config = ConfigDict(frozen=True)

    node_limit: int = Field(default=5_000_000, gt=0)
    time_limit: float = Field(default=600.0, gt=0)
    seed: int | None = None


class SigmaResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int
    sigma: int
    witness: LabeledFactorization
    exhaustive: bool
    nodes: int = 0
    elapsed: float = 0.0
    interrupted: bool = False
