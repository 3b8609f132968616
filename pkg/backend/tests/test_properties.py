"""Randomized checks over colorings derived from the constructions (n <= 8, fixed seed)."""

import random
from collections import Counter

import pytest

from app.models.bounds import CandidateVector
from app.models.factorization import FREE
from app.services.bounds import filter_feasible, lower_bound, upper_bound
from app.services.coloring import color_classes, shift_vector, verify_interval
from app.services.constructions import (
    construct_three_five,
    drop_color,
    pn_augmented_factorization,
    reverse_coloring,
    round_robin_factorization,
    witness_for,
)
from app.services.equivalence import coloring_to_factorization, factorization_to_coloring
from app.services.graph_core import (
    ordering_from_sequence,
    split_indices,
    split_indices_by_parts,
    split_parts,
)

INSTANCES = 200


def _base_factorization(rng: random.Random, n: int):
    builders = [witness_for, pn_augmented_factorization, round_robin_factorization]
    if n >= 2:
        builders.append(construct_three_five)
    return rng.choice(builders)(n)


def _random_coloring(rng: random.Random):
    n = rng.randint(1, 8)
    coloring = factorization_to_coloring(_base_factorization(rng, n))
    for _ in range(rng.randint(0, 3)):
        positive = [i for i, value in enumerate(shift_vector(coloring).b, start=1) if value]
        if not positive:
            break
        coloring = drop_color(coloring, rng.choice(positive))
    if n >= 2 and rng.random() < 0.5:
        coloring = reverse_coloring(coloring)
    return coloring


@pytest.fixture(scope="module")
def colorings():
    rng = random.Random(20240607)
    return [_random_coloring(rng) for _ in range(INSTANCES)]


class TestColoringProperties:
    """Test invariants on random interval colorings"""

    def test_all_valid(self, colorings):
        """Test that every derived coloring is interval"""
        assert all(verify_interval(coloring).valid for coloring in colorings)

    def test_shift_total(self, colorings):
        """Test |sh| = t - (2n - 1)"""
        for coloring in colorings:
            assert shift_vector(coloring).total == coloring.t - (2 * coloring.n - 1)

    def test_equivalence_round_trip(self, colorings):
        """Test that colorings and factorizations convert losslessly up to t and shift vector"""
        for coloring in colorings:
            factorization = coloring_to_factorization(coloring)
            again = factorization_to_coloring(factorization)
            assert again.t == coloring.t
            assert shift_vector(again) == shift_vector(coloring)

    def test_classes_follow_factorization(self, colorings):
        """Test that each class of a round-tripped coloring is a free matching or a split side"""
        for coloring in colorings:
            factorization = coloring_to_factorization(coloring)
            expected: Counter = Counter()
            for matching, label in zip(
                factorization.matchings, factorization.labels, strict=True
            ):
                if label == FREE:
                    expected[frozenset(matching.edges)] += 1
                else:
                    left, right, _ = split_parts(matching, label, factorization.ordering)
                    expected.update([left, right])
            again = factorization_to_coloring(factorization)
            assert Counter(frozenset(edges) for edges in color_classes(again)) == expected

    def test_filters_are_sound(self, colorings):
        """Test that no realized shift vector is refuted"""
        for coloring in colorings:
            if coloring.n < 2:
                continue
            vector = CandidateVector(n=coloring.n, b=shift_vector(coloring).b)
            assert filter_feasible(vector).passed

    def test_colors_within_bounds(self, colorings):
        """Test 2n - 1 <= t <= closed-form upper bound"""
        for coloring in colorings:
            assert 2 * coloring.n - 1 <= coloring.t <= upper_bound(coloring.n)

    def test_reversal_is_involutive(self, colorings):
        """Test that reversing twice restores the shift vector"""
        for coloring in colorings[:40]:
            if coloring.n < 2:
                continue
            twice = reverse_coloring(reverse_coloring(coloring))
            assert shift_vector(twice) == shift_vector(coloring)


class TestSplitProperties:
    """Test splittedness under random orderings"""

    def test_split_definitions_agree(self):
        """Test split_indices against split_parts under random paired orderings"""
        rng = random.Random(7)
        for _ in range(INSTANCES):
            n = rng.randint(2, 8)
            sequence = list(range(2 * n))
            rng.shuffle(sequence)
            ordering = ordering_from_sequence(n, sequence)
            for matching in round_robin_factorization(n).matchings:
                assert split_indices(matching, ordering) == split_indices_by_parts(
                    matching, ordering
                )

    def test_witnesses_never_exceed_lower_bound(self):
        """Test that constructions never beat the best known lower bound"""
        for n in range(1, 9):
            assert factorization_to_coloring(witness_for(n)).t <= lower_bound(n)
