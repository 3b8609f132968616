"""Budgeted searches: sigma_n by branch and bound, and colorings realizing a target shift vector."""

import logging
import random
import time
from collections.abc import Callable, Iterator
from multiprocessing import Pool

from app.core.config import settings
from app.core.exceptions import InternalInconsistencyError, PreconditionError
from app.models.bounds import CandidateVector, FilterKind
from app.models.coloring import EdgeColoring
from app.models.factorization import FREE, LabeledFactorization
from app.models.graph import EdgePair, PerfectMatching
from app.models.search import SearchBudget, SigmaResult
from app.services.bounds import filter_feasible, first_rejection, upper_bound
from app.services.coloring import shift_vector
from app.services.constructions import round_robin_factorization, round_robin_matchings
from app.services.equivalence import (
    assign_splits,
    factorization_to_coloring,
    label_all_splits,
)
from app.services.graph_core import (
    identity_ordering,
    normalize,
    perfect_matching,
    split_indices,
)

logger = logging.getLogger(__name__)

# Filters whose verdict can only turn to rejection as coordinates grow
GROWTH_FILTERS = frozenset({FilterKind.PREFIX_SUM, FilterKind.EDGE_COUNT})

ProgressHook = Callable[[int, int], None]


class _BudgetExhausted(Exception):
    pass


def _perfect_matchings(
    adjacency: list[set[int]],
    forced: EdgePair,
    region: list[int] | None = None,
    rng: random.Random | None = None,
) -> Iterator[tuple[EdgePair, ...]]:
    """Perfect matchings of the remaining graph through ``forced``, fewest-options vertex first.

    With ``region`` set, only edges inside one region are allowed.
    """
    size = len(adjacency)
    partner = [-1] * size
    a, b = forced
    partner[a], partner[b] = b, a
    edges = [normalize(a, b)]

    def options(vertex: int) -> list[int]:
        return [
            other
            for other in adjacency[vertex]
            if partner[other] == -1 and (region is None or region[other] == region[vertex])
        ]

    def extend() -> Iterator[tuple[EdgePair, ...]]:
        chosen, chosen_options = -1, None
        for vertex in range(size):
            if partner[vertex] != -1:
                continue
            vertex_options = options(vertex)
            if chosen_options is None or len(vertex_options) < len(chosen_options):
                chosen, chosen_options = vertex, vertex_options
                if not vertex_options:
                    return
        if chosen_options is None:
            yield tuple(sorted(edges))
            return
        ordered = sorted(chosen_options)
        if rng is not None:
            rng.shuffle(ordered)
        for other in ordered:
            partner[chosen], partner[other] = other, chosen
            edges.append(normalize(chosen, other))
            yield from extend()
            edges.pop()
            partner[chosen] = partner[other] = -1

    yield from extend()


def _complete_adjacency(n: int) -> list[set[int]]:
    return [set(range(2 * n)) - {vertex} for vertex in range(2 * n)]


def _remove(adjacency: list[set[int]], edges: tuple[EdgePair, ...]) -> None:
    for a, b in edges:
        adjacency[a].discard(b)
        adjacency[b].discard(a)


def _restore(adjacency: list[set[int]], edges: tuple[EdgePair, ...]) -> None:
    for a, b in edges:
        adjacency[a].add(b)
        adjacency[b].add(a)


class SigmaSearch:
    """Branch and bound over 1-factorizations of K2n under the identity ordering.

    Slot k holds the matching through edge (k, 2n-1), which fixes the order of the matchings.
    A matching counts as labeled with its smallest split index.
    """

    def __init__(
        self,
        n: int,
        budget: SearchBudget,
        *,
        pruning: bool = True,
        progress: ProgressHook | None = None,
    ):
        self.n = n
        self.budget = budget
        self.pruning = pruning
        self.progress = progress
        self.ordering = identity_ordering(n)
        self.slots = 2 * n - 1
        self.cap = upper_bound(n) - self.slots if pruning else self.slots
        self.rng = random.Random(budget.seed) if budget.seed is not None else None

        self.adjacency = _complete_adjacency(n)
        self.chosen: list[PerfectMatching] = []
        self.counts = [0] * (n - 1)
        self.nodes = 0
        self.started = time.monotonic()
        self.exhausted = False
        self.optimal = False

        baseline = label_all_splits(round_robin_matchings(n), self.ordering)
        self.best_count = baseline.labeled_count
        self.best_matchings = list(baseline.matchings)

    def candidates(self, slot: int) -> list[tuple[PerfectMatching, int]]:
        found = []
        for edges in _perfect_matchings(self.adjacency, (slot, 2 * self.n - 1)):
            matching = perfect_matching(self.n, edges)
            indices = split_indices(matching, self.ordering)
            found.append((matching, min(indices) if indices else FREE))
        splitted = [entry for entry in found if entry[1] != FREE]
        free = [entry for entry in found if entry[1] == FREE]
        if self.rng is not None:
            self.rng.shuffle(splitted)
            self.rng.shuffle(free)
        return splitted + free

    def _consistent(self) -> bool:
        counts = tuple(self.counts)
        return (
            first_rejection(counts, self.n, GROWTH_FILTERS) is None
            and first_rejection(counts[::-1], self.n, GROWTH_FILTERS) is None
        )

    def _tick(self) -> None:
        self.nodes += 1
        if self.progress is not None and self.nodes % 10_000 == 0:
            self.progress(self.nodes, self.best_count)
        if self.nodes >= self.budget.node_limit:
            raise _BudgetExhausted
        if time.monotonic() - self.started > self.budget.time_limit:
            raise _BudgetExhausted

    def _descend(self, slot: int, labeled: int) -> None:
        if slot == self.slots:
            if labeled > self.best_count:
                self.best_count = labeled
                self.best_matchings = list(self.chosen)
                logger.debug(
                    "K%d: %d splitted matchings after %d nodes", 2 * self.n, labeled, self.nodes
                )
            if labeled >= self.cap:
                self.optimal = True
            return
        if self.pruning and labeled + (self.slots - slot) <= self.best_count:
            return

        for matching, label in self.candidates(slot):
            self._tick()
            if label != FREE:
                self.counts[label - 1] += 1
            if not self.pruning or self._consistent():
                _remove(self.adjacency, matching.edges)
                self.chosen.append(matching)
                self._descend(slot + 1, labeled + (label != FREE))
                self.chosen.pop()
                _restore(self.adjacency, matching.edges)
            if label != FREE:
                self.counts[label - 1] -= 1
            if self.optimal:
                return

    def run(self, first: PerfectMatching | None = None) -> SigmaResult:
        """Search everything, or only the subtree whose slot-0 matching is ``first``"""
        interrupted = False
        try:
            if first is None:
                self._descend(0, 0)
            else:
                label = min(split_indices(first, self.ordering), default=FREE)
                if label != FREE:
                    self.counts[label - 1] += 1
                _remove(self.adjacency, first.edges)
                self.chosen.append(first)
                self._descend(1, int(label != FREE))
        except _BudgetExhausted:
            self.exhausted = True
        except KeyboardInterrupt:
            interrupted = True
        return self.result(interrupted=interrupted)

    def result(self, *, interrupted: bool = False) -> SigmaResult:
        """The incumbent as it stands"""
        witness = assign_splits(self.best_matchings, self.ordering, self.best_count)
        return SigmaResult(
            n=self.n,
            sigma=self.best_count,
            witness=witness,
            exhaustive=self.optimal or not (self.exhausted or interrupted),
            nodes=self.nodes,
            elapsed=time.monotonic() - self.started,
            interrupted=interrupted,
        )


def _sigma_subtree(payload: tuple[int, SearchBudget, bool, PerfectMatching]) -> SigmaResult:
    n, budget, pruning, first = payload
    return SigmaSearch(n, budget, pruning=pruning).run(first)


def sigma_search(
    n: int,
    budget: SearchBudget | None = None,
    *,
    pruning: bool = True,
    workers: int = 1,
    progress: ProgressHook | None = None,
) -> SigmaResult:
    """Maximum number of splitted matchings over the 1-factorizations of K2n.

    ``exhaustive`` is set when the tree was fully explored or the closed-form bound was met;
    otherwise the result is the best found within the budget.
    """
    if n < 1:
        raise PreconditionError("need n >= 1")
    budget = budget or SearchBudget(
        node_limit=settings.search_node_limit, time_limit=settings.search_time_limit
    )
    if n == 1 or workers <= 1:
        result = SigmaSearch(n, budget, pruning=pruning, progress=progress).run()
    else:
        root = SigmaSearch(n, budget, pruning=pruning)
        firsts = [matching for matching, _ in root.candidates(0)]
        payloads = [(n, budget, pruning, first) for first in firsts]
        results = []
        interrupted = False
        try:
            with Pool(processes=workers) as pool:
                for partial in pool.imap(_sigma_subtree, payloads):
                    results.append(partial)
                    if progress is not None:
                        progress(sum(r.nodes for r in results), max(r.sigma for r in results))
        except KeyboardInterrupt:
            interrupted = True
            logger.warning("sigma search interrupted after %d subtrees", len(results))
        finished = len(results) == len(payloads) and all(r.exhaustive for r in results)
        best = max([*results, root.result(interrupted=interrupted)], key=lambda r: r.sigma)
        reached = best.sigma >= root.cap
        result = best.model_copy(
            update={
                "exhaustive": reached or (finished and not interrupted),
                "nodes": sum(r.nodes for r in results),
                "elapsed": time.monotonic() - root.started,
                "interrupted": interrupted,
            }
        )

    logger.info(
        "sigma search K%d: sigma=%d exhaustive=%s nodes=%d",
        2 * n,
        result.sigma,
        result.exhaustive,
        result.nodes,
    )
    return result


class _Realizer:
    """Depth-first placement of labeled matchings, then of the free ones"""

    def __init__(
        self, n: int, labels: list[int], rng: random.Random, node_cap: int, deadline: float
    ):
        self.n = n
        self.labels = labels + [FREE] * (2 * n - 1 - len(labels))
        self.rng = rng
        self.node_cap = node_cap
        self.deadline = deadline
        self.ordering = identity_ordering(n)
        self.adjacency = _complete_adjacency(n)
        self.chosen: list[tuple[EdgePair, ...]] = []
        self.nodes = 0

    def _region(self, label: int) -> list[int]:
        return [int(self.ordering.pair(vertex) > label) for vertex in range(2 * self.n)]

    def _tick(self) -> None:
        self.nodes += 1
        if self.nodes >= self.node_cap or time.monotonic() > self.deadline:
            raise _BudgetExhausted

    def _choices(self, slot: int) -> Iterator[tuple[EdgePair, ...]]:
        label = self.labels[slot]
        if label == FREE:
            if not self.adjacency[0]:
                return
            yield from _perfect_matchings(
                self.adjacency, (0, min(self.adjacency[0])), rng=self.rng
            )
            return
        region = self._region(label)
        floor = -1
        if slot and self.labels[slot - 1] == label:
            floor = next(b for a, b in self.chosen[-1] if a == 0)
        partners = [w for w in sorted(self.adjacency[0]) if w > floor and region[w] == region[0]]
        self.rng.shuffle(partners)
        for w in partners:
            yield from _perfect_matchings(self.adjacency, (0, w), region, self.rng)

    def _place(self, slot: int) -> bool:
        if slot == len(self.labels):
            return True
        for edges in self._choices(slot):
            self._tick()
            _remove(self.adjacency, edges)
            self.chosen.append(edges)
            if self._place(slot + 1):
                return True
            self.chosen.pop()
            _restore(self.adjacency, edges)
        return False

    def run(self) -> list[tuple[EdgePair, ...]] | None:
        return list(self.chosen) if self._place(0) else None


def realize_shift(
    n: int, target: CandidateVector, budget: SearchBudget | None = None
) -> EdgeColoring | None:
    """Interval coloring of K2n whose shift vector is ``target``, or None when the budget runs out
    or the search is interrupted.

    None is inconclusive. Restarts reshuffle the search with a doubled node cap.
    """
    if len(target.b) != n - 1 or target.n != n:
        raise PreconditionError(f"target for K{2 * n} needs {n - 1} coordinates")
    verdict = filter_feasible(target)
    if verdict.rejecting_filter is not None:
        raise PreconditionError(
            f"target {target.b} rejected by {verdict.rejecting_filter.value} at k={verdict.k}"
        )
    if target.total == 0:
        return factorization_to_coloring(round_robin_factorization(n))

    budget = budget or SearchBudget(
        node_limit=settings.search_node_limit, time_limit=settings.search_time_limit
    )
    labels = [i for i in range(1, n) for _ in range(target.b[i - 1])]
    deadline = time.monotonic() + budget.time_limit
    seed = budget.seed or 0
    spent, cap, attempt = 0, settings.realize_attempt_nodes, 0

    while spent < budget.node_limit and time.monotonic() < deadline:
        cap = min(cap, budget.node_limit - spent)
        realizer = _Realizer(n, labels, random.Random(seed + attempt), cap, deadline)
        complete = True
        try:
            placed = realizer.run()
        except _BudgetExhausted:
            placed, complete = None, False
        except KeyboardInterrupt:
            logger.warning("realize_shift interrupted after %d nodes", spent + realizer.nodes)
            return None
        spent += realizer.nodes
        if placed is not None:
            matchings = tuple(perfect_matching(n, edges) for edges in placed)
            factorization = LabeledFactorization(
                n=n,
                matchings=matchings,
                labels=tuple(realizer.labels),
                ordering=realizer.ordering,
            )
            coloring = factorization_to_coloring(factorization)
            if shift_vector(coloring).b != target.b:
                raise InternalInconsistencyError("realized coloring has a different shift vector")
            logger.info(
                "realized %s on K%d after %d attempts, %d nodes",
                target.b,
                2 * n,
                attempt + 1,
                spent,
            )
            return coloring
        if complete:
            logger.info("target %s has no realization under the identity ordering", target.b)
            return None
        attempt += 1
        cap *= 2
        logger.debug("realize attempt %d exhausted, node cap now %d", attempt, cap)

    logger.info("realize_shift budget exhausted for %s after %d nodes", target.b, spent)
    return None
