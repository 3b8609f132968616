"""Vertex and edge indexing for K2n under a paired ordering, pair ranges and splittedness."""

from collections.abc import Iterable
from functools import lru_cache

from app.core.exceptions import (
    InvalidEdgeError,
    InvalidMatchingError,
    InvalidOrderingError,
    SplitIndexError,
)
from app.models.graph import (
    Edge,
    EdgePair,
    PairedOrdering,
    PairRangeSubgraph,
    PerfectMatching,
)


def edge_count(n: int) -> int:
    """|E(K2n)| = n(2n-1)"""
    return n * (2 * n - 1)


def normalize(a: int, b: int) -> EdgePair:
    return (a, b) if a < b else (b, a)


def _position(a: int, b: int, n: int) -> int:
    # Lexicographic rank of (a, b), a < b, among the pairs of {0, ..., 2n-1}
    return a * (4 * n - 1 - a) // 2 + (b - a - 1)


def edge_index(a: int, b: int, n: int) -> Edge:
    """Canonical edge of K2n for the unordered pair {a, b}"""
    if a == b:
        raise InvalidEdgeError(f"loop at vertex {a} is not an edge")
    if not (0 <= a < 2 * n and 0 <= b < 2 * n):
        raise InvalidEdgeError(f"edge ({a}, {b}) outside K{2 * n}")
    a, b = normalize(a, b)
    return Edge(a=a, b=b, index=_position(a, b, n))


def edge_position(a: int, b: int, n: int) -> int:
    """Index of edge {a, b} without building an Edge model"""
    if a > b:
        a, b = b, a
    return _position(a, b, n)


@lru_cache(maxsize=64)
def all_edges(n: int) -> tuple[EdgePair, ...]:
    """Edges of K2n in canonical index order"""
    return tuple((a, b) for a in range(2 * n) for b in range(a + 1, 2 * n))


def identity_ordering(n: int) -> PairedOrdering:
    return PairedOrdering(n=n, order=tuple(range(2 * n)))


def make_ordering(n: int, order: Iterable[int]) -> PairedOrdering:
    """Ordering from vertex -> position map, checked to be a permutation"""
    order = tuple(order)
    if sorted(order) != list(range(2 * n)):
        raise InvalidOrderingError(f"order {order} is not a permutation of 0..{2 * n - 1}")
    return PairedOrdering(n=n, order=order)


def ordering_from_sequence(n: int, vertices: Iterable[int]) -> PairedOrdering:
    """Ordering from the sequence (u1, v1, ..., un, vn) of vertex ids"""
    vertices = tuple(vertices)
    if sorted(vertices) != list(range(2 * n)):
        raise InvalidOrderingError(f"sequence {vertices} is not a permutation of 0..{2 * n - 1}")
    order = [0] * (2 * n)
    for position, vertex in enumerate(vertices):
        order[vertex] = position
    return PairedOrdering(n=n, order=tuple(order))


def perfect_matching(n: int, edges: Iterable[EdgePair]) -> PerfectMatching:
    """Validated perfect matching of K2n"""
    partner = [-1] * (2 * n)
    normalized = []
    for a, b in edges:
        edge = edge_index(a, b, n)
        for vertex, other in ((edge.a, edge.b), (edge.b, edge.a)):
            if partner[vertex] != -1:
                raise InvalidMatchingError(f"vertex {vertex} covered twice")
            partner[vertex] = other
        normalized.append(edge.endpoints)
    if -1 in partner:
        raise InvalidMatchingError(f"vertex {partner.index(-1)} is not covered")
    return PerfectMatching(n=n, edges=tuple(sorted(normalized)), partner=tuple(partner))


def pair_range(lo: int, hi: int, ordering: PairedOrdering) -> PairRangeSubgraph:
    """Vertices of pairs lo..hi"""
    if not 1 <= lo <= hi <= ordering.n:
        raise SplitIndexError(f"pair range [{lo}, {hi}] outside [1, {ordering.n}]")
    vertices = ordering.vertices[2 * (lo - 1) : 2 * hi]
    return PairRangeSubgraph(lo=lo, hi=hi, vertices=frozenset(vertices))


def induced_edges(subgraph: PairRangeSubgraph) -> frozenset[EdgePair]:
    vertices = sorted(subgraph.vertices)
    return frozenset(
        (a, b) for position, a in enumerate(vertices) for b in vertices[position + 1 :]
    )


def split_parts(
    matching: PerfectMatching, i: int, ordering: PairedOrdering
) -> tuple[frozenset[EdgePair], frozenset[EdgePair], frozenset[EdgePair]]:
    """(left, right, crossing) parts of a matching at the boundary after pair i"""
    if not 1 <= i <= ordering.n - 1:
        raise SplitIndexError(f"split index {i} outside [1, {ordering.n - 1}]")
    left, right, crossing = set(), set(), set()
    for a, b in matching.edges:
        pa, pb = ordering.pair(a), ordering.pair(b)
        if pa <= i and pb <= i:
            left.add((a, b))
        elif pa > i and pb > i:
            right.add((a, b))
        else:
            crossing.add((a, b))
    return frozenset(left), frozenset(right), frozenset(crossing)


def split_indices_of_edges(edges: Iterable[EdgePair], ordering: PairedOrdering) -> frozenset[int]:
    """Split indices of any edge set: an edge spanning pairs p < q blocks p..q-1"""
    blocked = [False] * (ordering.n + 1)
    for a, b in edges:
        pa, pb = ordering.pair(a), ordering.pair(b)
        for index in range(min(pa, pb), max(pa, pb)):
            blocked[index] = True
    return frozenset(i for i in range(1, ordering.n) if not blocked[i])


def split_indices(matching: PerfectMatching, ordering: PairedOrdering) -> frozenset[int]:
    """{ i in [1, n-1] : the matching has no edge crossing the boundary after pair i }"""
    return split_indices_of_edges(matching.edges, ordering)


def split_indices_by_parts(matching: PerfectMatching, ordering: PairedOrdering) -> frozenset[int]:
    """Same set as split_indices, computed from split_parts"""
    return frozenset(
        i for i in range(1, ordering.n) if not split_parts(matching, i, ordering)[2]
    )


def build_k2_square_kn(n: int, ordering: PairedOrdering | None = None) -> frozenset[EdgePair]:
    """E(K2 square Kn): u_i u_j, v_i v_j for i < j, and the vertical edges u_i v_i"""
    ordering = ordering or identity_ordering(n)
    edges = set()
    for i in range(1, n + 1):
        edges.add(normalize(ordering.u(i), ordering.v(i)))
        for j in range(i + 1, n + 1):
            edges.add(normalize(ordering.u(i), ordering.u(j)))
            edges.add(normalize(ordering.v(i), ordering.v(j)))
    return frozenset(edges)


def build_k2_times_kn(n: int, ordering: PairedOrdering | None = None) -> frozenset[EdgePair]:
    """E(K2 x Kn): u_i v_j for i != j"""
    ordering = ordering or identity_ordering(n)
    return frozenset(
        normalize(ordering.u(i), ordering.v(j))
        for i in range(1, n + 1)
        for j in range(1, n + 1)
        if i != j
    )


def is_perfect_matching(edges: Iterable[EdgePair], n: int) -> bool:
    covered = [0] * (2 * n)
    count = 0
    for a, b in edges:
        covered[a] += 1
        covered[b] += 1
        count += 1
    return count == n and all(value == 1 for value in covered)
