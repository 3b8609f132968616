from enum import Enum

from pydantic import BaseModel, ConfigDict, Field


class FilterKind(str, Enum):
    PREFIX_SUM = "prefix-sum"
    AFTER_SATURATED = "after-saturated"
    BEFORE_SATURATED = "before-saturated"
    EDGE_COUNT = "edge-count"


ALL_FILTERS: tuple[FilterKind, ...] = (
    FilterKind.PREFIX_SUM,
    FilterKind.AFTER_SATURATED,
    FilterKind.BEFORE_SATURATED,
    FilterKind.EDGE_COUNT,
)


class Direction(str, Enum):
    FORWARD = "forward"
    REVERSED = "reversed"


class CandidateVector(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1)
    b: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.b)

    def reversed(self) -> "CandidateVector":
        return CandidateVector(n=self.n, b=tuple(reversed(self.b)))


class FeasibilityVerdict(BaseModel):
    model_config = ConfigDict(frozen=True)

    passed: bool
    rejecting_filter: FilterKind | None = None
    direction: Direction | None = None
    k: int | None = None


class BoundCertificate(BaseModel):
    """Outcome of exhausting every candidate shift vector of one total"""

    model_config = ConfigDict(frozen=True)

    n: int
    total: int
    filters: tuple[FilterKind, ...]
    examined: int  # prefixes visited, complete vectors included
    survivors: int
    empty: bool
    claimed_bound: int | None = None


class MFilterResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    k: int
    r: int
    value: int
    vector: tuple[int, ...]


class ReferenceBounds(BaseModel):
    """Closed-form bounds and conjectures on W(K2n) from the literature"""

    model_config = ConfigDict(frozen=True)

    n: int
    kamalian: int
    kamalian_upper: int
    giaro: int
    petrosyan_3n2: int
    petrosyan_pq: int
    petrosyan_doubling: int | None = None
    conjecture_pq: int
    conjecture_log: int
    composite: int | None = None
    composite_split: tuple[int, int] | None = None
    lower_bound: int
    upper_bound: int
    disproved: dict[str, int] = Field(default_factory=dict)


class TableColumn(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int
    lower: int
    exact: int | None = None
    upper: int
