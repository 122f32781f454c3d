import itertools

import pytest

from clusterexp.graphs import (
    EnrichedTree,
    EnumerationTooLarge,
    Graph,
    GraphClass,
    blocks,
    cutpoints,
    enumerate_bicolored,
    enumerate_enriched_trees,
    enumerate_graphs,
    is_articulation_free,
    is_biconnected,
    is_connected,
    nodal_vertices,
    prufer_trees,
    set_partitions,
)


def brute_force_count(n, predicate):
    """Independent census: loop over all edge subsets directly."""
    pairs = list(itertools.combinations(range(n), 2))
    count = 0
    for r in range(len(pairs) + 1):
        for sub in itertools.combinations(pairs, r):
            g = Graph(n, frozenset(sub), n)
            if predicate(g):
                count += 1
    return count


class TestCensus:
    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_connected_counts_match_brute_force(self, n):
        got = sum(1 for _ in enumerate_graphs(n, GraphClass.CONNECTED))
        assert got == brute_force_count(n, is_connected)

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_biconnected_counts_match_brute_force(self, n):
        got = sum(1 for _ in enumerate_graphs(n, GraphClass.BICONNECTED))
        assert got == brute_force_count(n, is_biconnected)

    @pytest.mark.parametrize("n,total", [(1, 1), (2, 2), (3, 8), (4, 64)])
    def test_all_counts(self, n, total):
        assert sum(1 for _ in enumerate_graphs(n, GraphClass.ALL)) == total

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_cayley_tree_counts(self, n):
        trees = list(prufer_trees(n))
        assert len(trees) == n ** (n - 2)
        assert len({t.edges for t in trees}) == len(trees)
        for t in trees:
            assert len(t.edges) == n - 1 and is_connected(t)

    def test_enumeration_cap(self):
        with pytest.raises(EnumerationTooLarge):
            list(enumerate_graphs(9, GraphClass.CONNECTED))


class TestBicolored:
    # white vertices 0..1, black 2..; counts cross-checked by brute force
    @pytest.mark.parametrize("k,cls,expected", [
        (0, GraphClass.CONNECTED, 1),
        (0, GraphClass.BLACK_TO_WHITE_CONNECTED, 2),
        (0, GraphClass.ARTICULATION_FREE, 1),
        (0, GraphClass.BICONNECTED, 1),
        (1, GraphClass.CONNECTED, 4),
        (1, GraphClass.BLACK_TO_WHITE_CONNECTED, 6),
        (1, GraphClass.ARTICULATION_FREE, 2),
        (1, GraphClass.BICONNECTED, 1),
        (2, GraphClass.CONNECTED, 38),
        (2, GraphClass.BLACK_TO_WHITE_CONNECTED, 48),
        (2, GraphClass.ARTICULATION_FREE, 16),
        (2, GraphClass.BICONNECTED, 10),
    ])
    def test_two_white_counts(self, k, cls, expected):
        got = sum(1 for _ in enumerate_bicolored(2, k, cls))
        assert got == expected

    def test_black_to_white_requires_black_attachment(self):
        for g in enumerate_bicolored(2, 2, GraphClass.BLACK_TO_WHITE_CONNECTED):
            adj = g.adjacency()
            for b in g.blacks:
                assert adj[b], "isolated black vertex slipped through"

    def test_articulation_free_is_subset_of_connected(self):
        af = {g.edges for g in enumerate_bicolored(2, 2, GraphClass.ARTICULATION_FREE)}
        con = {g.edges for g in enumerate_bicolored(2, 2, GraphClass.CONNECTED)}
        assert af <= con


class TestBlocksAndNodal:
    def test_path_blocks(self):
        g = Graph(4, frozenset({(0, 1), (1, 2), (2, 3)}), 4)
        bl = blocks(g)
        assert len(bl) == 3
        assert cutpoints(g) == {1, 2}

    def test_triangle_with_pendant(self):
        g = Graph(4, frozenset({(0, 1), (1, 2), (0, 2), (2, 3)}), 4)
        bl = blocks(g)
        sizes = sorted(len(b.edges) for b in bl)
        assert sizes == [1, 3]
        assert cutpoints(g) == {2}

    def test_nodal_vertex_on_white_path(self):
        # white-black-white path: the middle black vertex separates whites
        # but still has two vertex-disjoint routes to distinct whites
        g = Graph(3, frozenset({(0, 2), (1, 2)}), 2)
        assert 2 in nodal_vertices(g)
        assert is_articulation_free(g)

    def test_dangling_black_is_articulated(self):
        # black 3 reaches a white only through black 2
        g = Graph(4, frozenset({(0, 1), (0, 2), (2, 3)}), 2)
        assert not is_articulation_free(g)

    def test_direct_edge_graph_articulation_free(self):
        g = Graph(2, frozenset({(0, 1)}), 2)
        assert is_articulation_free(g)


class TestPartitionsAndEnrichedTrees:
    @pytest.mark.parametrize("n,bell", [(0, 1), (1, 1), (2, 2), (3, 5), (4, 15)])
    def test_set_partition_counts(self, n, bell):
        assert sum(1 for _ in set_partitions(list(range(n)))) == bell

    def test_enriched_tree_count_two_children(self):
        assert sum(1 for _ in enumerate_enriched_trees(2)) == 4

    def test_enriched_tree_count_one(self):
        assert sum(1 for _ in enumerate_enriched_trees(1)) == 1

    def test_enriched_tree_invariants(self):
        for et in enumerate_enriched_trees(3):
            assert isinstance(et, EnrichedTree)
            assert is_connected(et.tree)
            assert len(et.tree.edges) == et.tree.n_vertices - 1
            # every child sits in exactly one clique of its parent
            for v, parts in enumerate(et.child_partitions):
                seen = set()
                for clique in parts:
                    assert clique, "empty clique"
                    assert not (seen & set(clique))
                    seen |= set(clique)


class TestDump:
    def test_dump_line_format(self):
        g = Graph(3, frozenset({(0, 1), (1, 2)}), 2)
        line = g.dump_line()
        assert line.startswith("3 2 ")
        assert "0-1" in line and "1-2" in line
        assert line.endswith("whites=2")
