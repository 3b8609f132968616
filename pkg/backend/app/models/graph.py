from enum import Enum
from functools import lru_cache

from pydantic import BaseModel, ConfigDict, Field

# Unordered edge stored as (smaller id, larger id)
EdgePair = tuple[int, int]


class Side(str, Enum):
    U = "u"
    V = "v"


@lru_cache(maxsize=256)
def _positions_to_vertices(order: tuple[int, ...]) -> tuple[int, ...]:
    vertices = [0] * len(order)
    for vertex, position in enumerate(order):
        vertices[position] = vertex
    return tuple(vertices)


class PairedOrdering(BaseModel):
    """Arrangement (u1, v1, ..., un, vn) of the 2n vertices of K2n.

    ``order[v]`` is the position of vertex ``v``; positions 2(i-1) and 2i-1 hold u_i and v_i.
    """

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1)
    order: tuple[int, ...]

    @property
    def vertices(self) -> tuple[int, ...]:
        """Vertex ids in position order"""
        return _positions_to_vertices(self.order)

    def pair(self, vertex: int) -> int:
        return self.order[vertex] // 2 + 1

    def side(self, vertex: int) -> Side:
        return Side.U if self.order[vertex] % 2 == 0 else Side.V

    def vertex(self, pair: int, side: Side) -> int:
        return self.vertices[2 * (pair - 1) + (0 if side == Side.U else 1)]

    def u(self, pair: int) -> int:
        return self.vertex(pair, Side.U)

    def v(self, pair: int) -> int:
        return self.vertex(pair, Side.V)

    def is_identity(self) -> bool:
        return self.order == tuple(range(2 * self.n))


class Edge(BaseModel):
    model_config = ConfigDict(frozen=True)

    a: int
    b: int
    index: int

    @property
    def endpoints(self) -> EdgePair:
        return (self.a, self.b)


class PerfectMatching(BaseModel):
    """Perfect matching of K2n with its vertex -> partner involution"""

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1)
    edges: tuple[EdgePair, ...]
    partner: tuple[int, ...]

    def edge_set(self) -> frozenset[EdgePair]:
        return frozenset(self.edges)


class PairRangeSubgraph(BaseModel):
    """Subgraph H[lo, hi] induced by the vertices of pairs lo..hi"""

    model_config = ConfigDict(frozen=True)

    lo: int = Field(ge=1)
    hi: int = Field(ge=1)
    vertices: frozenset[int]

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)
