from enum import Enum

from pydantic import BaseModel, ConfigDict, Field

from app.models.coloring import ShiftVector
from app.models.graph import EdgePair, PairedOrdering, PerfectMatching, Side

# Label of a non-splitted (free) matching
FREE = 0


class LabeledFactorization(BaseModel):
    """1-factorization of K2n whose matchings carry a split index, or FREE"""

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1)
    matchings: tuple[PerfectMatching, ...]
    labels: tuple[int, ...]
    ordering: PairedOrdering

    @property
    def labeled_count(self) -> int:
        return sum(1 for label in self.labels if label != FREE)

    @property
    def shift_vector(self) -> ShiftVector:
        counts = [0] * (self.n - 1)
        for label in self.labels:
            if label != FREE:
                counts[label - 1] += 1
        return ShiftVector(b=tuple(counts))

    @property
    def t(self) -> int:
        return 2 * self.n - 1 + self.labeled_count

    def with_label(self, position: int, label: int) -> "LabeledFactorization":
        labels = list(self.labels)
        labels[position] = label
        return self.model_copy(update={"labels": tuple(labels)})


class PnFactorization(BaseModel):
    """Matchings P0..P_{n-1} of K2 square Kn; P_i is i-splitted for i >= 1"""

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1)
    matchings: tuple[PerfectMatching, ...]


class EdgeProjection(BaseModel):
    """Projections of the edges of K2mn onto K2n (bar) and K2m (tilde).

    K2mn has vertices x^p_s for copy p in [1, m], side x and pair s in [1, n]; its ordering
    is the identity with global pair (p-1)n + s. ``outer`` orders K2m, ``inner`` orders K2n.
    """

    model_config = ConfigDict(frozen=True)

    m: int = Field(ge=1)
    n: int = Field(ge=1)
    outer: PairedOrdering
    inner: PairedOrdering

    def lift(self, copy: int, inner_vertex: int) -> int:
        """Vertex of the given copy that projects onto ``inner_vertex``"""
        position = self.inner.order[inner_vertex]
        return 2 * (copy - 1) * self.n + position

    def locate(self, vertex: int) -> tuple[int, int]:
        """(copy, inner vertex) of a vertex of K2mn"""
        copy, position = divmod(vertex, 2 * self.n)
        return copy + 1, self.inner.vertices[position]

    def bar(self, edge: EdgePair) -> EdgePair | None:
        """Edge of K2n that ``edge`` projects to, or None when both ends copy one vertex"""
        (_, first), (_, second) = self.locate(edge[0]), self.locate(edge[1])
        if first == second:
            return None
        return (min(first, second), max(first, second))

    def tilde(self, edge: EdgePair) -> EdgePair | None:
        """Edge of K2m joining copies of one vertex, or None outside that domain"""
        (p, first), (q, second) = self.locate(edge[0]), self.locate(edge[1])
        if first != second:
            return None
        side = self.inner.side(first)
        a, b = self.outer.vertex(p, side), self.outer.vertex(q, side)
        return (min(a, b), max(a, b))

    def bar_preimages(self, inner_edge: EdgePair, k: int, l: int) -> list[EdgePair]:
        """Preimages of ``inner_edge`` inside copy k (k == l) or between copies k and l"""
        a, b = inner_edge
        if k == l:
            pairs = [(self.lift(k, a), self.lift(k, b))]
        else:
            pairs = [(self.lift(k, a), self.lift(l, b)), (self.lift(k, b), self.lift(l, a))]
        return [(min(x, y), max(x, y)) for x, y in pairs]


class ConstructionMethod(str, Enum):
    THREE_FIVE = "three-five"
    COMPOSITE = "composite"
    PN = "pn"
    ROUND_ROBIN = "round-robin"
    BEST = "best"
