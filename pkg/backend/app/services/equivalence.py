"""Interval colorings of K2n versus labeled 1-factorizations, in both directions."""

import logging
from collections import Counter
from collections.abc import Sequence

from app.core.exceptions import (
    InsufficientSplitsError,
    InternalInconsistencyError,
    LabeledFactorizationInvalidError,
    PreconditionError,
)
from app.models.coloring import EdgeColoring
from app.models.factorization import FREE, LabeledFactorization
from app.models.graph import PairedOrdering, PerfectMatching
from app.services.coloring import (
    canonical_ordering,
    color_classes,
    require_interval,
    shift_vector,
    verify_interval,
)
from app.services.graph_core import (
    edge_count,
    edge_position,
    is_perfect_matching,
    perfect_matching,
    split_indices,
    split_parts,
)

logger = logging.getLogger(__name__)


def validate_factorization(factorization: LabeledFactorization) -> None:
    """Raise LabeledFactorizationInvalidError unless every invariant holds"""
    n = factorization.n
    if factorization.ordering.n != n:
        raise LabeledFactorizationInvalidError("ordering is for a different K2n")
    if len(factorization.matchings) != 2 * n - 1:
        raise LabeledFactorizationInvalidError(
            f"expected {2 * n - 1} matchings, got {len(factorization.matchings)}"
        )
    if len(factorization.labels) != len(factorization.matchings):
        raise LabeledFactorizationInvalidError("one label per matching is required")

    covered = [False] * edge_count(n)
    for position, (matching, label) in enumerate(
        zip(factorization.matchings, factorization.labels, strict=True)
    ):
        if matching.n != n or not is_perfect_matching(matching.edges, n):
            raise LabeledFactorizationInvalidError(f"matching {position} is not perfect")
        for a, b in matching.edges:
            index = edge_position(a, b, n)
            if covered[index]:
                raise LabeledFactorizationInvalidError(f"edge {(a, b)} is in two matchings")
            covered[index] = True
        if label == FREE:
            continue
        if not 1 <= label <= n - 1:
            raise LabeledFactorizationInvalidError(f"label {label} outside [1, {n - 1}]")
        if label not in split_indices(matching, factorization.ordering):
            raise LabeledFactorizationInvalidError(
                f"matching {position} is labeled {label} but is not {label}-splitted"
            )

    sums = factorization.shift_vector.partial_sums
    for k in range(1, n):
        if sums[k] > 2 * k - 1:
            raise LabeledFactorizationInvalidError(
                f"labels 1..{k} used {sums[k]} times, more than 2k-1 = {2 * k - 1}"
            )


def factorization_to_coloring(factorization: LabeledFactorization) -> EdgeColoring:
    """Color a labeled 1-factorization.

    The j-th matching labeled i colors its left part B_{i-1}+j and its right part
    B_{i-1}+2n-1+j; the j-th free matching gets B_{n-1}+j.
    """
    validate_factorization(factorization)
    n, ordering = factorization.n, factorization.ordering
    sums = factorization.shift_vector.partial_sums
    colors = [0] * edge_count(n)
    seen: Counter[int] = Counter()

    for matching, label in zip(factorization.matchings, factorization.labels, strict=True):
        seen[label] += 1
        j = seen[label]
        if label == FREE:
            for a, b in matching.edges:
                colors[edge_position(a, b, n)] = sums[n - 1] + j
            continue
        left, right, _ = split_parts(matching, label, ordering)
        for a, b in left:
            colors[edge_position(a, b, n)] = sums[label - 1] + j
        for a, b in right:
            colors[edge_position(a, b, n)] = sums[label - 1] + 2 * n - 1 + j

    coloring = EdgeColoring(n=n, t=factorization.t, colors=tuple(colors))
    failure = verify_interval(coloring).failure
    if failure is not None:
        raise InternalInconsistencyError(
            f"labeled factorization produced an invalid coloring: {failure.message}"
        )
    return coloring


def coloring_to_factorization(coloring: EdgeColoring) -> LabeledFactorization:
    """Recover the labeled 1-factorization of an interval coloring.

    F0_j = C_{|sh|+j} and F^i_j = C_{B_{i-1}+j} union C_{B_{i-1}+2n-1+j}. Free matchings
    that happen to be splitted stay free.
    """
    require_interval(coloring)
    n = coloring.n
    ordering = canonical_ordering(coloring)
    vector = shift_vector(coloring, ordering)
    sums = vector.partial_sums
    classes = color_classes(coloring)
    matchings: list[PerfectMatching] = []
    labels: list[int] = []

    for i in range(1, n):
        for j in range(1, vector.b[i - 1] + 1):
            edges = classes[sums[i - 1] + j - 1] + classes[sums[i - 1] + 2 * n - 1 + j - 1]
            matching = _as_matching(n, edges, f"F^{i}_{j}")
            if i not in split_indices(matching, ordering):
                raise InternalInconsistencyError(f"F^{i}_{j} is not {i}-splitted")
            matchings.append(matching)
            labels.append(i)

    for j in range(1, 2 * n - vector.total):
        matchings.append(_as_matching(n, classes[vector.total + j - 1], f"F0_{j}"))
        labels.append(FREE)

    factorization = LabeledFactorization(
        n=n, matchings=tuple(matchings), labels=tuple(labels), ordering=ordering
    )
    validate_factorization(factorization)
    return factorization


def _as_matching(n: int, edges, name: str) -> PerfectMatching:
    if not is_perfect_matching(edges, n):
        raise InternalInconsistencyError(f"{name} is not a perfect matching")
    return perfect_matching(n, edges)


def assign_splits(
    matchings: Sequence[PerfectMatching], ordering: PairedOrdering, want: int
) -> LabeledFactorization:
    """Label the first ``want`` splittable matchings with their smallest split index"""
    if want < 0:
        raise PreconditionError(f"cannot label {want} matchings")
    labels = []
    remaining = want
    for matching in matchings:
        indices = split_indices(matching, ordering)
        if remaining > 0 and indices:
            labels.append(min(indices))
            remaining -= 1
        else:
            labels.append(FREE)
    if remaining > 0:
        raise InsufficientSplitsError(
            f"only {want - remaining} splittable matchings, {want} requested"
        )
    factorization = LabeledFactorization(
        n=ordering.n, matchings=tuple(matchings), labels=tuple(labels), ordering=ordering
    )
    validate_factorization(factorization)
    return factorization


def splittable_count(matchings: Sequence[PerfectMatching], ordering: PairedOrdering) -> int:
    return sum(1 for matching in matchings if split_indices(matching, ordering))


def label_all_splits(
    matchings: Sequence[PerfectMatching], ordering: PairedOrdering
) -> LabeledFactorization:
    """Label every splittable matching; the coloring then has 2n-1+s colors"""
    return assign_splits(matchings, ordering, splittable_count(matchings, ordering))


def reverse_ordering(ordering: PairedOrdering) -> PairedOrdering:
    """Pair i becomes pair n+1-i, sides kept"""
    n = ordering.n
    order = tuple(
        2 * (n - ordering.pair(vertex)) + ordering.order[vertex] % 2 for vertex in range(2 * n)
    )
    return PairedOrdering(n=n, order=order)


def reverse_factorization(factorization: LabeledFactorization) -> LabeledFactorization:
    """Same matchings read right to left: an i-splitted matching becomes (n-i)-splitted"""
    n = factorization.n
    labels = tuple(FREE if label == FREE else n - label for label in factorization.labels)
    reversed_factorization = factorization.model_copy(
        update={"labels": labels, "ordering": reverse_ordering(factorization.ordering)}
    )
    validate_factorization(reversed_factorization)
    return reversed_factorization
