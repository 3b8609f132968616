import networkx as nx
import pytest

from app.core.exceptions import (
    InvalidEdgeError,
    InvalidMatchingError,
    InvalidOrderingError,
    SplitIndexError,
)
from app.models.graph import Side
from app.services.constructions import round_robin_matchings
from app.services.graph_core import (
    all_edges,
    build_k2_square_kn,
    build_k2_times_kn,
    edge_count,
    edge_index,
    identity_ordering,
    induced_edges,
    is_perfect_matching,
    make_ordering,
    ordering_from_sequence,
    pair_range,
    perfect_matching,
    split_indices,
    split_indices_by_parts,
    split_parts,
)


class TestEdgeIndexing:
    """Test canonical edge indices"""

    def test_edge_count(self):
        """Test |E(K2n)| = n(2n-1)"""
        assert edge_count(1) == 1
        assert edge_count(3) == 15
        assert len(all_edges(4)) == 28

    def test_first_and_last_index(self):
        """Test the index range of K4"""
        assert edge_index(0, 1, 2).index == 0
        assert edge_index(2, 3, 2).index == 5

    def test_endpoints_are_normalized(self):
        """Test that {a, b} and {b, a} give the same edge"""
        edge = edge_index(3, 1, 2)
        assert edge.endpoints == (1, 3)
        assert edge == edge_index(1, 3, 2)

    @pytest.mark.parametrize("n", [1, 2, 3, 5])
    def test_indices_follow_all_edges(self, n):
        """Test that all_edges lists edges in index order"""
        for position, (a, b) in enumerate(all_edges(n)):
            assert edge_index(a, b, n).index == position

    def test_loop_rejected(self):
        """Test that a loop is not an edge"""
        with pytest.raises(InvalidEdgeError):
            edge_index(1, 1, 2)

    def test_out_of_range_rejected(self):
        """Test that vertices must lie in [0, 2n)"""
        with pytest.raises(InvalidEdgeError):
            edge_index(0, 4, 2)
        with pytest.raises(InvalidEdgeError):
            edge_index(-1, 2, 2)


class TestOrderings:
    """Test paired orderings"""

    def test_identity(self):
        """Test u_i = 2(i-1) and v_i = 2i-1"""
        ordering = identity_ordering(3)
        assert ordering.u(1) == 0
        assert ordering.v(1) == 1
        assert ordering.u(3) == 4
        assert ordering.pair(3) == 2
        assert ordering.side(3) == Side.V
        assert ordering.is_identity()

    def test_from_sequence(self):
        """Test building an ordering from (u1, v1, u2, v2)"""
        ordering = ordering_from_sequence(2, [3, 1, 0, 2])
        assert ordering.u(1) == 3
        assert ordering.v(1) == 1
        assert ordering.u(2) == 0
        assert ordering.v(2) == 2
        assert ordering.pair(0) == 2
        assert ordering.vertices == (3, 1, 0, 2)
        assert not ordering.is_identity()

    def test_non_permutation_rejected(self):
        """Test that orderings must be permutations"""
        with pytest.raises(InvalidOrderingError):
            ordering_from_sequence(2, [0, 1, 1, 2])
        with pytest.raises(InvalidOrderingError):
            make_ordering(2, [0, 1, 2])

    def test_ordering_error_is_not_a_matching_error(self):
        """Test that a bad ordering is reported apart from bad matchings"""
        with pytest.raises(InvalidOrderingError) as excinfo:
            make_ordering(2, [0, 0, 1, 2])
        assert not isinstance(excinfo.value, InvalidMatchingError)


class TestPerfectMatchings:
    """Test perfect matching validation"""

    def test_partner_involution(self):
        """Test the partner map of a matching"""
        matching = perfect_matching(2, [(1, 0), (2, 3)])
        assert matching.edges == ((0, 1), (2, 3))
        assert matching.partner == (1, 0, 3, 2)

    def test_uncovered_vertex(self):
        """Test that every vertex must be covered"""
        with pytest.raises(InvalidMatchingError):
            perfect_matching(2, [(0, 1)])

    def test_vertex_covered_twice(self):
        """Test that no vertex may be covered twice"""
        with pytest.raises(InvalidMatchingError):
            perfect_matching(2, [(0, 1), (1, 2), (2, 3)])

    def test_is_perfect_matching(self):
        """Test the lightweight matching check"""
        assert is_perfect_matching([(0, 1), (2, 3)], 2)
        assert not is_perfect_matching([(0, 1), (0, 2)], 2)
        assert not is_perfect_matching([(0, 1)], 2)


class TestSplitIndices:
    """Test splittedness of matchings"""

    def test_vertical_matching_splits_everywhere(self):
        """Test that the matching of vertical edges is i-splitted for every i"""
        matching = perfect_matching(3, [(0, 1), (2, 3), (4, 5)])
        assert split_indices(matching, identity_ordering(3)) == {1, 2}

    def test_crossing_edges_block(self):
        """Test that edges between pairs 1 and 2 block index 1"""
        matching = perfect_matching(3, [(0, 2), (1, 3), (4, 5)])
        assert split_indices(matching, identity_ordering(3)) == {2}

    def test_long_edge_blocks_every_index(self):
        """Test that an edge from pair 1 to pair 3 blocks both indices"""
        matching = perfect_matching(3, [(0, 5), (1, 2), (3, 4)])
        assert split_indices(matching, identity_ordering(3)) == frozenset()

    def test_split_parts(self):
        """Test the left, right and crossing parts at a boundary"""
        matching = perfect_matching(3, [(0, 2), (1, 3), (4, 5)])
        left, right, crossing = split_parts(matching, 2, identity_ordering(3))
        assert left == {(0, 2), (1, 3)}
        assert right == {(4, 5)}
        assert crossing == frozenset()

    def test_split_parts_index_range(self):
        """Test that split indices lie in [1, n-1]"""
        matching = perfect_matching(3, [(0, 1), (2, 3), (4, 5)])
        with pytest.raises(SplitIndexError):
            split_parts(matching, 0, identity_ordering(3))
        with pytest.raises(SplitIndexError):
            split_parts(matching, 3, identity_ordering(3))

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_both_computations_agree(self, n):
        """Test split_indices against the split_parts definition"""
        ordering = identity_ordering(n)
        for matching in round_robin_matchings(n):
            assert split_indices(matching, ordering) == split_indices_by_parts(matching, ordering)

    def test_non_identity_ordering(self):
        """Test splittedness read through a permuted ordering"""
        ordering = ordering_from_sequence(2, [3, 1, 0, 2])
        matching = perfect_matching(2, [(1, 3), (0, 2)])
        assert split_indices(matching, ordering) == {1}

    @pytest.mark.parametrize("n", range(2, 33))
    def test_split_parts_partition(self, n):
        """Test that left, right and crossing parts partition every matching"""
        ordering = identity_ordering(n)
        for matching in round_robin_matchings(n):
            edges = set(matching.edges)
            for i in range(1, n):
                left, right, crossing = split_parts(matching, i, ordering)
                assert len(left) + len(right) + len(crossing) == len(edges)
                assert left | right | crossing == edges


class TestSubgraphs:
    """Test pair ranges and the K2 square Kn / K2 x Kn decomposition"""

    def test_pair_range(self):
        """Test the vertices of H[2, 3]"""
        subgraph = pair_range(2, 3, identity_ordering(3))
        assert subgraph.vertices == {2, 3, 4, 5}
        assert subgraph.vertex_count == 4
        assert len(induced_edges(subgraph)) == 6

    def test_pair_range_bounds(self):
        """Test that lo <= hi inside [1, n] is required"""
        with pytest.raises(SplitIndexError):
            pair_range(0, 1, identity_ordering(3))
        with pytest.raises(SplitIndexError):
            pair_range(3, 2, identity_ordering(3))

    @pytest.mark.parametrize("n", range(1, 33))
    def test_decomposition(self, n):
        """Test that K2 square Kn and K2 x Kn partition K2n with degrees n and n - 1"""
        ordering = identity_ordering(n)
        square = build_k2_square_kn(n, ordering)
        times = build_k2_times_kn(n, ordering)
        assert len(square) == n * n
        assert len(times) == n * (n - 1)
        assert not square & times
        assert square | times == set(all_edges(n))

        square_graph, times_graph = nx.Graph(), nx.Graph()
        for graph, edges in ((square_graph, square), (times_graph, times)):
            graph.add_nodes_from(range(2 * n))
            graph.add_edges_from(edges)
        assert {degree for _, degree in square_graph.degree()} == {n}
        assert {degree for _, degree in times_graph.degree()} == {n - 1}

        assert nx.is_bipartite(times_graph)
        u_side = {ordering.u(i) for i in range(1, n + 1)}
        assert all((a in u_side) != (b in u_side) for a, b in times)
