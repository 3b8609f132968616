"""Explicit 1-factorizations of K2n with many splitted matchings, and coloring transformations.

Every construction ends in validate_factorization; conversion to a coloring verifies again.
"""

import logging
from collections.abc import Iterable
from functools import cache, lru_cache

import networkx as nx
from networkx.algorithms.bipartite.matching import hopcroft_karp_matching

from app.core.exceptions import (
    InternalInconsistencyError,
    PreconditionError,
    SplitIndexError,
)
from app.models.coloring import EdgeColoring
from app.models.factorization import (
    FREE,
    ConstructionMethod,
    EdgeProjection,
    LabeledFactorization,
    PnFactorization,
)
from app.models.graph import EdgePair, PairedOrdering, PerfectMatching, Side
from app.services.equivalence import (
    assign_splits,
    coloring_to_factorization,
    factorization_to_coloring,
    reverse_factorization,
    validate_factorization,
)
from app.services.graph_core import (
    build_k2_square_kn,
    build_k2_times_kn,
    identity_ordering,
    normalize,
    pair_range,
    perfect_matching,
    split_indices,
    split_parts,
)

logger = logging.getLogger(__name__)


def round_robin_matchings(n: int) -> list[PerfectMatching]:
    """Circle-method 1-factorization of K2n, sorted by the partner of vertex 0"""
    if n < 1:
        raise PreconditionError(f"K{2 * n} has no vertices")
    fixed, size = 2 * n - 1, 2 * n - 1
    rounds = []
    for r in range(size):
        edges = [(r, fixed)]
        edges.extend(((r + k) % size, (r - k) % size) for k in range(1, n))
        rounds.append(perfect_matching(n, edges))
    return sorted(rounds, key=lambda matching: matching.partner[0])


def round_robin_factorization(n: int) -> LabeledFactorization:
    """All-free factorization; its coloring uses the minimum 2n-1 colors"""
    matchings = tuple(round_robin_matchings(n))
    return LabeledFactorization(
        n=n, matchings=matchings, labels=(FREE,) * len(matchings), ordering=identity_ordering(n)
    )


def _mirrored(lo: int, hi: int, ordering: PairedOrdering) -> list[EdgePair]:
    # Pairs lo..hi folded onto each other; an odd range keeps its middle pair vertical
    edges = []
    p, q = lo, hi
    while p < q:
        edges.append(normalize(ordering.u(p), ordering.u(q)))
        edges.append(normalize(ordering.v(p), ordering.v(q)))
        p, q = p + 1, q - 1
    if p == q:
        edges.append(normalize(ordering.u(p), ordering.v(p)))
    return edges


def pn_factorization(n: int, ordering: PairedOrdering | None = None) -> PnFactorization:
    """1-factorization P0..P_{n-1} of K2 square Kn in which P_i is i-splitted"""
    if n < 1:
        raise PreconditionError(f"K{2 * n} has no vertices")
    ordering = ordering or identity_ordering(n)
    matchings = [perfect_matching(n, _mirrored(1, n, ordering))]
    for i in range(1, n):
        edges = _mirrored(1, i, ordering) + _mirrored(i + 1, n, ordering)
        matchings.append(perfect_matching(n, edges))

    covered = [edge for matching in matchings for edge in matching.edges]
    if len(covered) != len(set(covered)) or set(covered) != build_k2_square_kn(n, ordering):
        raise InternalInconsistencyError(f"P_{n} does not partition K2 square K{n}")
    for i in range(1, n):
        if i not in split_indices(matchings[i], ordering):
            raise InternalInconsistencyError(f"P_{i} is not {i}-splitted")
    return PnFactorization(n=n, matchings=tuple(matchings))


def bipartite_one_factorization(
    edges: Iterable[EdgePair], vertices: Iterable[int] | None = None
) -> list[frozenset[EdgePair]]:
    """Split an r-regular bipartite graph into r perfect matchings.

    Repeatedly takes a Hopcroft-Karp maximum matching, which is perfect by König's theorem,
    and removes it.
    """
    edges = sorted(normalize(a, b) for a, b in edges)
    graph = nx.Graph()
    nodes = vertices if vertices is not None else {vertex for edge in edges for vertex in edge}
    graph.add_nodes_from(sorted(nodes))
    graph.add_edges_from(edges)

    if not nx.is_bipartite(graph):
        raise PreconditionError("graph is not bipartite")
    degrees = {degree for _, degree in graph.degree()}
    if len(degrees) > 1:
        raise PreconditionError(f"graph is not regular, degrees {sorted(degrees)}")
    r = degrees.pop() if degrees else 0
    top = {vertex for vertex, color in nx.bipartite.color(graph).items() if color == 0}

    matchings = []
    for _ in range(r):
        matching = hopcroft_karp_matching(graph, top_nodes=top)
        found = frozenset(normalize(a, b) for a, b in matching.items())
        if 2 * len(found) != graph.number_of_nodes():
            raise InternalInconsistencyError("regular bipartite graph without a perfect matching")
        graph.remove_edges_from(found)
        matchings.append(found)
    return matchings


def construct_three_five(n: int) -> LabeledFactorization:
    """Factorization of K2n with floor(1.5n) - 2 splitted matchings (t = floor(3.5n) - 3).

    K2 x Kn is cut at pair h = floor(n/2); matchings of the two halves are joined pairwise
    and labeled h, the rest of K2 x Kn is factorized as free matchings, and P_n supplies
    one i-splitted matching for every i.
    """
    if n < 2:
        raise PreconditionError("the construction needs n >= 2")
    ordering = identity_ordering(n)
    h = n // 2

    halves = []
    for lo, hi in ((1, h), (h + 1, n)):
        half = [
            normalize(ordering.u(i), ordering.v(j))
            for i in range(lo, hi + 1)
            for j in range(lo, hi + 1)
            if i != j
        ]
        halves.append(bipartite_one_factorization(half, pair_range(lo, hi, ordering).vertices))
    left_factors, right_factors = halves
    joined = [left_factors[k] | right_factors[k] for k in range(h - 1)]

    used = set().union(*joined) if joined else set()
    residual = build_k2_times_kn(n, ordering) - used
    residual_factors = bipartite_one_factorization(residual, range(2 * n))

    pn = pn_factorization(n, ordering)
    matchings = list(pn.matchings[1:]) + [perfect_matching(n, edges) for edges in joined]
    labels = list(range(1, n)) + [h] * len(joined)
    matchings.append(pn.matchings[0])
    matchings.extend(perfect_matching(n, edges) for edges in residual_factors)
    labels.extend([FREE] * (1 + len(residual_factors)))

    factorization = LabeledFactorization(
        n=n, matchings=tuple(matchings), labels=tuple(labels), ordering=ordering
    )
    validate_factorization(factorization)
    if factorization.labeled_count != n + h - 2:
        raise InternalInconsistencyError(
            f"expected {n + h - 2} labels, got {factorization.labeled_count}"
        )
    logger.info("three-five factorization of K%d: %d labels", 2 * n, factorization.labeled_count)
    return factorization


def pn_augmented_factorization(n: int) -> LabeledFactorization:
    """P_n together with a König factorization of K2 x Kn, n-1 matchings labeled (t = 3n - 2)"""
    ordering = identity_ordering(n)
    pn = pn_factorization(n, ordering)
    factors = bipartite_one_factorization(build_k2_times_kn(n, ordering), range(2 * n))
    matchings = list(pn.matchings[1:]) + [pn.matchings[0]]
    matchings.extend(perfect_matching(n, edges) for edges in factors)
    return assign_splits(matchings, ordering, n - 1)


def _column(vertex: int) -> int:
    return vertex // 2 + 1


def _cell(column: int) -> int:
    return (column + 1) // 2


def _parity_counts(m: int, j: int) -> tuple[int, int, int, int]:
    # Vertical edges in the left/right column of a cell, and cross-cell edge counts
    if m % 2:
        return 1, 1, (m - 1) // 2, (m - 1) // 2
    return 2 * (1 - j % 2), 2 * (j % 2), m // 2 - (1 - j % 2), m // 2 - j % 2


def _splitted_pieces(
    projection: EdgeProjection,
    p_matching: PerfectMatching,
    left: frozenset[EdgePair],
    right: frozenset[EdgePair],
) -> list[set[EdgePair]]:
    pieces: list[set[EdgePair]] = [set(), set(), set(), set()]
    for a, b in p_matching.edges:
        ca, cb = _column(a), _column(b)
        if ca == cb:
            part, target = (left, 0) if ca % 2 else (right, 1)
            cell = _cell(ca)
            for edge in part:
                pieces[target].update(projection.bar_preimages(edge, cell, cell))
        elif a % 2 == 0 and b % 2 == 0:
            if ca % 2 != cb % 2:
                raise InternalInconsistencyError("P matching joins columns of mixed parity")
            part, target = (left, 2) if ca % 2 else (right, 3)
            for edge in part:
                pieces[target].update(projection.bar_preimages(edge, _cell(ca), _cell(cb)))
    return pieces


def _free_pieces(
    projection: EdgeProjection, p_matching: PerfectMatching, matching: PerfectMatching
) -> list[set[EdgePair]]:
    pieces: list[set[EdgePair]] = [set(), set()]
    cell_pairs = set()
    for a, b in p_matching.edges:
        if a % 2 or b % 2:
            continue
        k, l = sorted((_cell(_column(a)), _cell(_column(b))))
        if k == l:
            for edge in matching.edges:
                pieces[0].update(projection.bar_preimages(edge, k, k))
        elif (k, l) not in cell_pairs:
            cell_pairs.add((k, l))
            for edge in matching.edges:
                pieces[1].update(projection.bar_preimages(edge, k, l))
    return pieces


def _check_pieces(pieces: list[set[EdgePair]], expected: list[int], name: str, size: int) -> set:
    sizes = [len(piece) for piece in pieces]
    if sizes != expected:
        raise InternalInconsistencyError(f"{name} pieces have sizes {sizes}, expected {expected}")
    union = set().union(*pieces)
    if len(union) != size:
        raise InternalInconsistencyError(f"{name} has {len(union)} edges, expected {size}")
    return union


def construct_composite(
    fm: LabeledFactorization, fn: LabeledFactorization
) -> LabeledFactorization:
    """Factorization of K2mn from factorizations of K2m and K2n.

    Labels: s_m + s_n + 2(m-1)(n-1). Copy p of K2n occupies global pairs (p-1)n+1..pn.
    """
    validate_factorization(fm)
    validate_factorization(fn)
    m, n = fm.n, fn.n
    size = m * n
    free_inner = [
        matching for matching, label in zip(fn.matchings, fn.labels, strict=True) if label == FREE
    ]
    if not free_inner:
        raise PreconditionError("the inner factorization needs a free matching")
    exception, others = free_inner[0], free_inner[1:]

    projection = EdgeProjection(m=m, n=n, outer=fm.ordering, inner=fn.ordering)
    cells = pn_factorization(2 * m)
    matchings: list[PerfectMatching] = []
    labels: list[int] = []

    for matching, r in zip(fn.matchings, fn.labels, strict=True):
        if r == FREE:
            continue
        left, right, _ = split_parts(matching, r, fn.ordering)
        for j in range(m):
            vertical_l, vertical_r, cross_l, cross_r = _parity_counts(m, j)
            pieces = _splitted_pieces(projection, cells.matchings[2 * j + 1], left, right)
            expected = [
                len(left) * vertical_l,
                len(right) * vertical_r,
                2 * len(left) * cross_l,
                2 * len(right) * cross_r,
            ]
            edges = _check_pieces(pieces, expected, f"F1[{r},{j}]", size)
            matchings.append(perfect_matching(size, edges))
            labels.append(j * n + r)

    for matching in others:
        for j in range(m):
            same_cell = 1 if m % 2 else 2 * (j % 2)
            cross = (m - 1) // 2 if m % 2 else m // 2 - j % 2
            pieces = _free_pieces(projection, cells.matchings[2 * j], matching)
            edges = _check_pieces(pieces, [n * same_cell, 2 * n * cross], f"F2[{j}]", size)
            matchings.append(perfect_matching(size, edges))
            labels.append(j * n if j >= 1 else FREE)

    for outer_matching, label in zip(fm.matchings, fm.labels, strict=True):
        edges = set()
        for a, b in exception.edges:
            for x, y in outer_matching.edges:
                ends = []
                for vertex in (x, y):
                    inner = a if fm.ordering.side(vertex) == Side.U else b
                    ends.append(projection.lift(fm.ordering.pair(vertex), inner))
                edges.add(normalize(*ends))
        if len(edges) != size:
            raise InternalInconsistencyError(f"F3 has {len(edges)} edges, expected {size}")
        matchings.append(perfect_matching(size, edges))
        labels.append(label * n if label != FREE else FREE)

    factorization = LabeledFactorization(
        n=size, matchings=tuple(matchings), labels=tuple(labels), ordering=identity_ordering(size)
    )
    validate_factorization(factorization)
    expected_labels = fm.labeled_count + fn.labeled_count + 2 * (m - 1) * (n - 1)
    if factorization.labeled_count != expected_labels:
        raise InternalInconsistencyError(
            f"composite has {factorization.labeled_count} labels, expected {expected_labels}"
        )
    logger.info(
        "composite factorization of K%d from K%d and K%d: %d labels",
        2 * size,
        2 * m,
        2 * n,
        expected_labels,
    )
    return factorization


@cache
def _plan(n: int) -> tuple[int, tuple[str, int, int]]:
    # (labels, (method, a, b)); composite splits only replace three-five when strictly better
    if n == 1:
        return 0, ("round-robin", 1, 1)
    best = (n + n // 2 - 2, ("three-five", n, 1))
    for a in range(2, n):
        if n % a:
            continue
        b = n // a
        labels = _plan(a)[0] + _plan(b)[0] + 2 * (a - 1) * (b - 1)
        if labels > best[0]:
            best = (labels, ("composite", a, b))
    return best


def planned_labels(n: int) -> int:
    """Number of splitted matchings witness_for(n) will produce"""
    return _plan(n)[0]


@lru_cache(maxsize=32)
def witness_for(n: int) -> LabeledFactorization:
    """Best factorization of K2n reachable by three-five and composite constructions"""
    _, (method, a, b) = _plan(n)
    if method == "round-robin":
        return round_robin_factorization(n)
    if method == "three-five":
        return construct_three_five(n)
    return construct_composite(witness_for(a), witness_for(b))


def reverse_coloring(coloring: EdgeColoring) -> EdgeColoring:
    """Coloring with the reversed shift vector and the same t"""
    factorization = coloring_to_factorization(coloring)
    return factorization_to_coloring(reverse_factorization(factorization))


def drop_color(coloring: EdgeColoring, i: int) -> EdgeColoring:
    """Coloring with t-1 colors: the last i-labeled matching becomes free"""
    if not 1 <= i <= coloring.n - 1:
        raise SplitIndexError(f"split index {i} outside [1, {coloring.n - 1}]")
    factorization = coloring_to_factorization(coloring)
    positions = [position for position, label in enumerate(factorization.labels) if label == i]
    if not positions:
        raise PreconditionError(f"b_{i} = 0, no matching to release")
    return factorization_to_coloring(factorization.with_label(positions[-1], FREE))


def construct(method: ConstructionMethod, n: int) -> LabeledFactorization:
    """Single-size construction by name; composite needs two inputs and goes through its own call"""
    builders = {
        ConstructionMethod.THREE_FIVE: construct_three_five,
        ConstructionMethod.PN: pn_augmented_factorization,
        ConstructionMethod.ROUND_ROBIN: round_robin_factorization,
        ConstructionMethod.BEST: witness_for,
    }
    if method not in builders:
        raise PreconditionError(f"{method.value} needs two input factorizations")
    if n < 1:
        raise PreconditionError(f"K{2 * n} has no vertices")
    return builders[method](n)
