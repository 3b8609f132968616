"""Edge colorings of K2n: interval verification, spectra, canonical ordering, shift vectors."""

import logging
from collections.abc import Iterable, Mapping

from app.core.exceptions import (
    ColorRangeError,
    InternalInconsistencyError,
    InvalidEdgeError,
    MalformedColoringError,
    PreconditionError,
)
from app.models.coloring import (
    EdgeColoring,
    FailureKind,
    FailureWitness,
    IntervalReport,
    ShiftVector,
    Spectrum,
    SplitColorSets,
)
from app.models.graph import EdgePair, PairedOrdering
from app.services.graph_core import (
    all_edges,
    edge_count,
    edge_index,
    edge_position,
    ordering_from_sequence,
)

logger = logging.getLogger(__name__)


def coloring_from_mapping(
    n: int, mapping: Mapping[EdgePair, int], t: int | None = None
) -> EdgeColoring:
    """Build a total coloring from an edge -> color map"""
    colors: list[int | None] = [None] * edge_count(n)
    for (a, b), color in mapping.items():
        try:
            edge = edge_index(a, b, n)
        except InvalidEdgeError as exc:
            raise MalformedColoringError(str(exc)) from exc
        if colors[edge.index] is not None:
            raise MalformedColoringError(f"edge {edge.endpoints} colored twice")
        colors[edge.index] = color

    missing = [all_edges(n)[index] for index, color in enumerate(colors) if color is None]
    if missing:
        raise MalformedColoringError(
            f"color map is partial: {len(missing)} edges uncolored, first {missing[0]}"
        )
    return _checked(n, tuple(colors), t)  # type: ignore[arg-type]


def coloring_from_classes(n: int, classes: Iterable[Iterable[EdgePair]]) -> EdgeColoring:
    """Coloring whose k-th class (1-based) gets color k"""
    mapping: dict[EdgePair, int] = {}
    for color, edges in enumerate(classes, start=1):
        for a, b in edges:
            key = (min(a, b), max(a, b))
            if key in mapping:
                raise MalformedColoringError(f"edge {key} appears in two color classes")
            mapping[key] = color
    return coloring_from_mapping(n, mapping)


def _checked(n: int, colors: tuple[int, ...], t: int | None) -> EdgeColoring:
    t = t if t is not None else max(colors)
    out_of_range = next((color for color in colors if not 1 <= color <= t), None)
    if out_of_range is not None:
        raise MalformedColoringError(f"color {out_of_range} outside [1, {t}]")
    return EdgeColoring(n=n, t=t, colors=colors)


def color_of(coloring: EdgeColoring, a: int, b: int) -> int:
    return coloring.colors[edge_position(a, b, coloring.n)]


def _check_total(coloring: EdgeColoring) -> None:
    expected = edge_count(coloring.n)
    if len(coloring.colors) != expected:
        raise MalformedColoringError(
            f"coloring of K{2 * coloring.n} needs {expected} colors, got {len(coloring.colors)}"
        )
    out_of_range = next((c for c in coloring.colors if not 1 <= c <= coloring.t), None)
    if out_of_range is not None:
        raise MalformedColoringError(f"color {out_of_range} outside [1, {coloring.t}]")


def incident_colors(coloring: EdgeColoring) -> list[list[int]]:
    """Colors at every vertex, in canonical edge order"""
    incident: list[list[int]] = [[] for _ in range(2 * coloring.n)]
    for (a, b), color in zip(all_edges(coloring.n), coloring.colors, strict=True):
        incident[a].append(color)
        incident[b].append(color)
    return incident


def verify_interval(coloring: EdgeColoring) -> IntervalReport:
    """Check properness, surjectivity onto [1, t] and the interval property at every vertex"""
    _check_total(coloring)
    n, t = coloring.n, coloring.t
    failure: FailureWitness | None = None

    seen: list[dict[int, EdgePair]] = [{} for _ in range(2 * n)]
    for edge, color in zip(all_edges(n), coloring.colors, strict=True):
        for vertex in edge:
            if color in seen[vertex] and failure is None:
                failure = FailureWitness(
                    kind=FailureKind.IMPROPER,
                    vertex=vertex,
                    edge=edge,
                    color=color,
                    message=(
                        f"edges {seen[vertex][color]} and {edge} share color {color}"
                        f" at vertex {vertex}"
                    ),
                )
            seen[vertex].setdefault(color, edge)

    spectra = tuple(
        Spectrum(vertex=vertex, lo=min(colors), hi=max(colors), colors=frozenset(colors))
        for vertex, colors in enumerate(seen)
    )

    if failure is None:
        used = set(coloring.colors)
        missing = next((color for color in range(1, t + 1) if color not in used), None)
        if missing is not None:
            failure = FailureWitness(
                kind=FailureKind.NOT_SURJECTIVE,
                color=missing,
                message=f"color {missing} of [1, {t}] is not used",
            )

    if failure is None:
        for spectrum in spectra:
            if not spectrum.is_interval:
                gap = min(set(range(spectrum.lo, spectrum.hi + 1)) - spectrum.colors)
                failure = FailureWitness(
                    kind=FailureKind.NOT_INTERVAL,
                    vertex=spectrum.vertex,
                    color=gap,
                    message=f"spectrum of vertex {spectrum.vertex} misses color {gap}",
                )
                break

    if failure is not None:
        logger.debug("coloring of K%d rejected: %s", 2 * n, failure.message)
    return IntervalReport(valid=failure is None, t=t, spectra=spectra, failure=failure)


def require_interval(coloring: EdgeColoring) -> IntervalReport:
    """verify_interval, raising PreconditionError on an invalid coloring"""
    report = verify_interval(coloring)
    if report.failure is not None:
        raise PreconditionError(f"not an interval coloring: {report.failure.message}")
    return report


def _canonical_from_spectra(n: int, spectra: tuple[Spectrum, ...]) -> PairedOrdering:
    lows = [spectrum.lo for spectrum in spectra]
    sequence = sorted(range(2 * n), key=lambda vertex: (lows[vertex], vertex))
    for position in range(0, 2 * n, 2):
        u, v = sequence[position], sequence[position + 1]
        if lows[u] != lows[v]:
            raise InternalInconsistencyError(
                f"vertices {u} and {v} paired with different spectrum minima {lows[u]} != {lows[v]}"
            )
    return ordering_from_sequence(n, sequence)


def canonical_ordering(coloring: EdgeColoring) -> PairedOrdering:
    """Pair vertices by equal spectrum minimum, pairs sorted by that minimum, ties by vertex id"""
    report = require_interval(coloring)
    return _canonical_from_spectra(coloring.n, report.spectra)


def shift_vector(coloring: EdgeColoring, ordering: PairedOrdering | None = None) -> ShiftVector:
    """b_i = min S(u_{i+1}) - min S(u_i) under the canonical (or given) ordering"""
    report = require_interval(coloring)
    n = coloring.n
    ordering = ordering or _canonical_from_spectra(n, report.spectra)
    lows = [report.spectra[ordering.u(i)].lo for i in range(1, n + 1)]
    vector = ShiftVector(b=tuple(lows[i] - lows[i - 1] for i in range(1, n)))
    if vector.total != coloring.t - (2 * n - 1):
        raise InternalInconsistencyError(
            f"total shift {vector.total} differs from t - (2n - 1) = {coloring.t - (2 * n - 1)}"
        )
    return vector


def color_class(coloring: EdgeColoring, k: int) -> frozenset[EdgePair]:
    """C_k = edges colored k"""
    if not 1 <= k <= coloring.t:
        raise ColorRangeError(f"color {k} outside [1, {coloring.t}]")
    return frozenset(
        edge
        for edge, color in zip(all_edges(coloring.n), coloring.colors, strict=True)
        if color == k
    )


def color_classes(coloring: EdgeColoring) -> list[list[EdgePair]]:
    """All classes; entry k-1 holds C_k"""
    classes: list[list[EdgePair]] = [[] for _ in range(coloring.t)]
    for edge, color in zip(all_edges(coloring.n), coloring.colors, strict=True):
        classes[color - 1].append(edge)
    return classes


def _spectra_of(coloring: EdgeColoring, vertices: Iterable[int]) -> list[frozenset[int]]:
    vertices = list(vertices)
    if not vertices:
        raise PreconditionError("vertex set is empty")
    incident = incident_colors(coloring)
    return [frozenset(incident[vertex]) for vertex in vertices]


def spectrum_meet(coloring: EdgeColoring, vertices: Iterable[int]) -> frozenset[int]:
    """Colors present at every vertex of the set"""
    return frozenset.intersection(*_spectra_of(coloring, vertices))


def spectrum_join(coloring: EdgeColoring, vertices: Iterable[int]) -> frozenset[int]:
    """Colors present at some vertex of the set"""
    return frozenset.union(*_spectra_of(coloring, vertices))


def split_color_sets(
    coloring: EdgeColoring, ordering: PairedOrdering | None = None
) -> list[SplitColorSets]:
    """For each i with b_i > 0, the colors below and above the shift step and who sees them"""
    report = require_interval(coloring)
    n = coloring.n
    ordering = ordering or _canonical_from_spectra(n, report.spectra)
    spectra = report.spectra
    records = []
    for i in range(1, n):
        current, following = spectra[ordering.u(i)], spectra[ordering.u(i + 1)]
        if following.lo == current.lo:
            continue
        left = frozenset(range(current.lo, following.lo))
        right = frozenset(range(current.hi + 1, following.hi + 1))
        left_pairs, right_pairs = set(), set()
        for vertex in range(2 * n):
            if spectra[vertex].colors & left:
                left_pairs.add(ordering.pair(vertex))
            if spectra[vertex].colors & right:
                right_pairs.add(ordering.pair(vertex))
        records.append(
            SplitColorSets(
                i=i,
                left_colors=left,
                right_colors=right,
                left_pairs=frozenset(left_pairs),
                right_pairs=frozenset(right_pairs),
            )
        )
    return records
