from enum import Enum

from pydantic import BaseModel, ConfigDict, Field

from app.models.graph import EdgePair


class EdgeColoring(BaseModel):
    """Total color map of K2n; ``colors[k]`` is the color of the edge with canonical index k"""

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1)
    t: int = Field(ge=1)
    colors: tuple[int, ...]


class Spectrum(BaseModel):
    model_config = ConfigDict(frozen=True)

    vertex: int
    lo: int
    hi: int
    colors: frozenset[int]

    @property
    def is_interval(self) -> bool:
        return self.hi - self.lo + 1 == len(self.colors)


class FailureKind(str, Enum):
    IMPROPER = "improper"
    NOT_SURJECTIVE = "not_surjective"
    NOT_INTERVAL = "not_interval"


class FailureWitness(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: FailureKind
    vertex: int | None = None
    edge: EdgePair | None = None
    color: int | None = None
    message: str


class IntervalReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    valid: bool
    t: int
    spectra: tuple[Spectrum, ...]
    failure: FailureWitness | None = None


class ShiftVector(BaseModel):
    """(b1, ..., b_{n-1}); B_i are the partial sums with B_0 = 0"""

    model_config = ConfigDict(frozen=True)

    b: tuple[int, ...]

    @property
    def partial_sums(self) -> tuple[int, ...]:
        sums = [0]
        for value in self.b:
            sums.append(sums[-1] + value)
        return tuple(sums)

    @property
    def total(self) -> int:
        return sum(self.b)

    def reversed(self) -> "ShiftVector":
        return ShiftVector(b=tuple(reversed(self.b)))

    def __str__(self) -> str:
        return ",".join(str(value) for value in self.b)


class SplitColorSets(BaseModel):
    """Colors private to one side of the boundary after pair i, with the pairs that see them"""

    model_config = ConfigDict(frozen=True)

    i: int
    left_colors: frozenset[int]
    right_colors: frozenset[int]
    left_pairs: frozenset[int]
    right_pairs: frozenset[int]
