"""Filter calculus on shift vectors, certified upper bounds and closed-form bounds on W(K2n)."""

import logging
from collections.abc import Iterable, Iterator
from functools import lru_cache
from multiprocessing import Pool

from sympy import factorint

from app.core.config import settings
from app.core.exceptions import PreconditionError
from app.models.bounds import (
    ALL_FILTERS,
    BoundCertificate,
    CandidateVector,
    Direction,
    FeasibilityVerdict,
    FilterKind,
    MFilterResult,
    ReferenceBounds,
    TableColumn,
)

logger = logging.getLogger(__name__)

Vector = tuple[int, ...]

# W(K2p) for the small primes; larger primes use the three-five construction
PRIME_VALUES = {2: 4, 3: 7, 5: 14, 7: 21, 11: 37}


def _selected(filters: Iterable[FilterKind]) -> frozenset[FilterKind]:
    return frozenset(filters) | {FilterKind.PREFIX_SUM}


def first_rejection(
    b: Vector, n: int, filters: frozenset[FilterKind]
) -> tuple[FilterKind, int] | None:
    """First (filter, k) rejecting b, read as (b_1, ..., b_{n-1}) of K2n.

    A prefix of length L is checked soundly with n = L + 1: every condition used then only
    involves known coordinates, and edge-count sums only grow with the missing ones.
    """
    sums = [0]
    for value in b:
        sums.append(sums[-1] + value)
    length = len(b)

    def saturated(k: int) -> bool:
        return sums[k] == 2 * k - 1

    for k in range(1, length + 1):
        if sums[k] > 2 * k - 1:
            return FilterKind.PREFIX_SUM, k

    if FilterKind.AFTER_SATURATED in filters:
        for k in range(2, min(n - 2, length - 1) + 1):
            if saturated(k) and b[k] > 1:
                return FilterKind.AFTER_SATURATED, k

    if FilterKind.BEFORE_SATURATED in filters:
        for k in range(3, min(n - 1, length) + 1):
            if saturated(k) and b[k - 1] < 3:
                return FilterKind.BEFORE_SATURATED, k

    if FilterKind.EDGE_COUNT in filters:
        for k in range(2, min(n - 2, length) + 1):
            weighted = sum(i * b[i - 1] for i in range(1, k + 1))
            weighted += sum(
                (2 * k - i) * b[i - 1] for i in range(k + 1, min(2 * k - 1, n - 1, length) + 1)
            )
            if k * (2 * k - 1) < weighted:
                return FilterKind.EDGE_COUNT, k
    return None


def filter_feasible(
    vector: CandidateVector, filters: Iterable[FilterKind] = ALL_FILTERS
) -> FeasibilityVerdict:
    """Apply the filters to the vector and to its reversal; passing means not refuted"""
    if len(vector.b) != vector.n - 1:
        raise PreconditionError(f"K{2 * vector.n} needs {vector.n - 1} coordinates")
    selected = _selected(filters)
    for direction, b in ((Direction.FORWARD, vector.b), (Direction.REVERSED, vector.b[::-1])):
        rejected = first_rejection(b, vector.n, selected)
        if rejected is not None:
            kind, k = rejected
            logger.debug("%s rejected by %s at k=%d (%s)", vector.b, kind.value, k, direction.value)
            return FeasibilityVerdict(passed=False, rejecting_filter=kind, direction=direction, k=k)
    return FeasibilityVerdict(passed=True)


def _children(
    prefix: Vector, n: int, total: int, filters: frozenset[FilterKind]
) -> Iterator[Vector]:
    """Extensions of a prefix by one entry that survive the filters and can still reach total"""
    k = len(prefix) + 1
    spent = sum(prefix)
    remaining = total - spent
    free_slots = n - 1 - k
    for value in range(min(remaining, 2 * k - 1 - spent) + 1):
        rest = remaining - value
        # Reversed prefix sums cap whatever the tail still has to absorb
        if (free_slots == 0 and rest) or (free_slots and rest > 2 * free_slots - 1):
            continue
        candidate = (*prefix, value)
        if first_rejection(candidate, k + 1, filters) is None:
            yield candidate


def _walk(
    n: int, total: int, filters: frozenset[FilterKind], head: Vector = ()
) -> Iterator[tuple[Vector, bool | None]]:
    """Every prefix surviving pruning, in lex order.

    Complete vectors with the right total come with their final verdict, every other
    visited prefix with None.
    """

    def descend(prefix: Vector) -> Iterator[tuple[Vector, bool | None]]:
        if len(prefix) == n - 1 and sum(prefix) == total:
            passed = (
                first_rejection(prefix, n, filters) is None
                and first_rejection(prefix[::-1], n, filters) is None
            )
            yield prefix, passed
            return
        yield prefix, None
        if len(prefix) < n - 1:
            for child in _children(prefix, n, total, filters):
                yield from descend(child)

    if sum(head) <= total and first_rejection(head, len(head) + 1, filters) is None:
        yield from descend(head)


def iter_feasible(
    n: int, total: int, filters: Iterable[FilterKind] = ALL_FILTERS
) -> Iterator[CandidateVector]:
    """Lazily yield the filter-feasible vectors of K2n with the given total, lexicographically"""
    if n < 1 or total < 0:
        raise PreconditionError("need n >= 1 and total >= 0")
    selected = _selected(filters)
    for b, passed in _walk(n, total, selected):
        if passed:
            yield CandidateVector(n=n, b=b)


def _explore(payload: tuple[int, int, frozenset[FilterKind], Vector]) -> tuple[int, list[Vector]]:
    n, total, filters, head = payload
    examined, survivors = 0, []
    for b, passed in _walk(n, total, filters, head):
        examined += 1
        if passed:
            survivors.append(b)
    return examined, survivors


def _heads(
    n: int, total: int, filters: frozenset[FilterKind], depth: int
) -> tuple[int, list[Vector]]:
    """Prefixes of the given depth, and how many shallower prefixes were visited on the way"""
    heads: list[Vector] = [()]
    visited = 0
    for _ in range(min(depth, n - 1)):
        visited += len(heads)
        heads = [child for head in heads for child in _children(head, n, total, filters)]
    return visited, heads


def _enumerate(
    n: int, total: int, filters: frozenset[FilterKind], workers: int
) -> tuple[int, list[Vector]]:
    if workers <= 1:
        examined, survivors = _explore((n, total, filters, ()))
    else:
        examined, heads = _heads(n, total, filters, 3)
        payloads = [(n, total, filters, head) for head in heads]
        survivors: list[Vector] = []
        with Pool(processes=workers) as pool:
            for processed, chunk in pool.imap_unordered(_explore, payloads):
                examined += processed
                survivors.extend(chunk)
    return examined, sorted(survivors)


def enumerate_feasible(
    n: int, total: int, filters: Iterable[FilterKind] = ALL_FILTERS, workers: int = 1
) -> list[CandidateVector]:
    """All filter-feasible vectors of length n-1 summing to total, sorted.

    An empty result certifies W(K2n) <= 2n - 1 + total - 1. The list does not depend on
    the number of workers.
    """
    if n < 1 or total < 0:
        raise PreconditionError("need n >= 1 and total >= 0")
    _, survivors = _enumerate(n, total, _selected(filters), workers)
    return [CandidateVector(n=n, b=b) for b in survivors]


def certificate(
    n: int, total: int, filters: Iterable[FilterKind] = ALL_FILTERS, workers: int = 1
) -> BoundCertificate:
    """Exhaust one total and record the outcome"""
    if n < 1 or total < 0:
        raise PreconditionError("need n >= 1 and total >= 0")
    selected = _selected(filters)
    examined, survivors = _enumerate(n, total, selected, workers)
    empty = not survivors
    result = BoundCertificate(
        n=n,
        total=total,
        filters=tuple(kind for kind in ALL_FILTERS if kind in selected),
        examined=examined,
        survivors=len(survivors),
        empty=empty,
        claimed_bound=2 * n - 1 + total - 1 if empty else None,
    )
    logger.info(
        "K%d total %d: %d prefixes examined, %d survive", 2 * n, total, examined, len(survivors)
    )
    return result


@lru_cache(maxsize=64)
def _certified(n: int, workers: int) -> tuple[int, tuple[BoundCertificate, ...]]:
    certificates = []
    for total in range(max(0, 2 * n - 3), -1, -1):
        record = certificate(n, total, workers=workers)
        certificates.append(record)
        if not record.empty:
            return 2 * n - 1 + total, tuple(certificates)
    raise PreconditionError(f"no feasible shift vector for K{2 * n}")


def certified_upper_bound(n: int, workers: int = 1) -> tuple[int, list[BoundCertificate]]:
    """Descend totals from 2n-3 to the first nonempty T; W(K2n) <= 2n - 1 + T"""
    if n < 1:
        raise PreconditionError("need n >= 1")
    bound, certificates = _certified(n, workers)
    return bound, list(certificates)


def m_filter(k: int, r: int) -> MFilterResult | None:
    """min sum(i * b_i) over filter-feasible prefixes of length k with sum r.

    Ties go to the lexicographically largest prefix. None when no prefix survives.
    """
    if k < 1 or r < 0:
        raise PreconditionError("need k >= 1 and r >= 0")
    best: tuple[tuple[int, Vector], Vector] | None = None
    stack: list[int] = []
    selected = _selected(ALL_FILTERS)

    def descend(remaining: int) -> None:
        nonlocal best
        position = len(stack)
        if position == k:
            if remaining == 0:
                b = tuple(stack)
                value = sum(i * x for i, x in enumerate(b, start=1))
                key = (value, tuple(-x for x in b))
                if best is None or key < best[0]:
                    best = (key, b)
            return
        spent = r - remaining
        for value in range(min(remaining, 2 * (position + 1) - 1 - spent) + 1):
            stack.append(value)
            if first_rejection(tuple(stack), position + 2, selected) is None:
                descend(remaining - value)
            stack.pop()

    descend(r)
    if best is None:
        return None
    return MFilterResult(k=k, r=r, value=best[0][0], vector=best[1])


def upper_bound(n: int) -> int:
    """Closed-form upper bound on W(K2n), tightest applicable"""
    if n < 1:
        raise PreconditionError("need n >= 1")
    if n == 1:
        return 1
    if n == 2:
        return 4
    if n <= 4:
        return 4 * n - 5
    if n <= 8:
        return 4 * n - 6
    return 4 * n - 7


def prime_deficit(p: int) -> int:
    """4p - 3 - W(K2p) for the known primes, 4p - 3 - (floor(3.5p) - 3) otherwise"""
    if p in PRIME_VALUES:
        return 4 * p - 3 - PRIME_VALUES[p]
    return 4 * p - 3 - (7 * p // 2 - 3)


def lower_bound(n: int) -> int:
    """4n - 3 minus the deficits of the prime factors of n, with multiplicity"""
    if n < 1:
        raise PreconditionError("need n >= 1")
    return 4 * n - 3 - sum(alpha * prime_deficit(p) for p, alpha in factorint(n).items())


def _composite_best(n: int) -> tuple[int, tuple[int, int]] | None:
    best = None
    for a in range(2, int(n**0.5) + 1):
        if n % a:
            continue
        b = n // a
        value = lower_bound(a) + lower_bound(b) + 4 * (a - 1) * (b - 1) - 1
        if best is None or value > best[0]:
            best = (value, (a, b))
    return best


def reference_formulas(n: int) -> ReferenceBounds:
    """Every closed-form bound and conjecture for K2n, with the conjectures lower_bound refutes"""
    if n < 1:
        raise PreconditionError("need n >= 1")
    q = (n & -n).bit_length() - 1
    p = n >> q
    lower = lower_bound(n)
    conjecture_pq = 4 * n - 2 - p - q
    conjecture_log = 4 * n - 2 - (n.bit_length() - 1) - n.bit_count()
    composite = _composite_best(n)
    disproved = {
        name: value
        for name, value in (("conjecture_pq", conjecture_pq), ("conjecture_log", conjecture_log))
        if value < lower
    }
    return ReferenceBounds(
        n=n,
        kamalian=2 * n - 1 + (2 * n - 1).bit_length() - 1,
        kamalian_upper=4 * n - 3,
        giaro=4 * n - 4,
        petrosyan_3n2=3 * n - 2,
        petrosyan_pq=conjecture_pq,
        petrosyan_doubling=2 * n - 1 + lower_bound(n // 2) if n % 2 == 0 else None,
        conjecture_pq=conjecture_pq,
        conjecture_log=conjecture_log,
        composite=composite[0] if composite else None,
        composite_split=composite[1] if composite else None,
        lower_bound=lower,
        upper_bound=upper_bound(n),
        disproved=disproved,
    )


def table_columns(
    max_n: int, certify_max_n: int | None = None, workers: int = 1
) -> list[TableColumn]:
    """Lower, exact and upper rows for n = 1..max_n"""
    certify_max_n = settings.certify_max_n if certify_max_n is None else certify_max_n
    columns = []
    for n in range(1, max_n + 1):
        lower = lower_bound(n)
        upper = upper_bound(n)
        best = upper
        if n <= certify_max_n:
            best = min(upper, certified_upper_bound(n, workers)[0])
        columns.append(
            TableColumn(n=n, lower=lower, exact=lower if lower == best else None, upper=upper)
        )
    return columns
