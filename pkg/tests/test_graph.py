import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modkcolor.graph import (
    EdgeColoring,
    Graph,
    InputError,
    add_edges,
    build_graph,
    complete_graph,
    components,
    cycle_graph,
    degree_classes,
    format_edge_list,
    induced_bipartite,
    induced_subgraph,
    is_connected,
    is_dominating,
    is_forest,
    path_graph,
    read_edge_list,
    remove_edges,
    remove_vertex,
    residue_class,
    verify_coloring,
    write_edge_list,
)
from modkcolor.random_model import gnp

from conftest import small_graphs

C4 = cycle_graph(4)
K4 = complete_graph(4)


def test_build_graph_cycle():
    G = build_graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert G.m == 4 and G == C4


def test_build_graph_empty_and_dedup():
    G = build_graph(3, [])
    assert G.degrees() == [0, 0, 0]
    assert build_graph(3, [(0, 1), (1, 0), (0, 1)]).m == 1


@pytest.mark.parametrize("edges", [[(0, 0)], [(0, 2)], [(-1, 0)]])
def test_build_graph_rejects(edges):
    with pytest.raises(InputError):
        build_graph(2, edges)


def test_degree_classes_examples():
    assert degree_classes(K4, 2)[1] == {0, 1, 2, 3} and not degree_classes(K4, 2)[2]
    assert degree_classes(C4, 2)[2] == {0, 1, 2, 3}
    P = degree_classes(path_graph(4), 3)
    assert P[1] == {0, 3} and P[2] == {1, 2} and not P[3]


def test_degree_classes_isolated_in_last_class():
    G = Graph(3, [(0, 1)])
    assert degree_classes(G, 4)[4] == {2}
    with pytest.raises(InputError):
        degree_classes(G, 1)


def test_degree_partition_over_random_graphs():
    for seed in range(1000):
        k = 2 + seed % 5
        G = gnp(12, 0.4, seed)
        P = degree_classes(G, k)
        seen = [v for i in range(1, k + 1) for v in P[i]]
        assert sorted(seen) == list(range(G.n))
        assert sum(P.sizes) == G.n
        for v in range(G.n):
            assert P.class_of(v) == residue_class(G.degree(v), k)
            assert P.class_of(v) == (G.degree(v) % k or k)


def test_induced_bipartite_examples():
    assert induced_bipartite(C4, {0, 2}, {1, 3}).m == 4
    assert induced_bipartite(C4, {0, 1}, {2, 3}).edges == {(1, 2), (0, 3)}
    assert induced_bipartite(K4, {0}, {1, 2, 3}).m == 3
    with pytest.raises(InputError):
        induced_bipartite(C4, {0, 1}, {1, 2})


def test_remove_edges_examples():
    P = remove_edges(C4, [(3, 0)])
    assert P == path_graph(4)
    assert remove_edges(C4, []) == C4
    assert remove_edges(K4, [(0, 1), (2, 3)]).edges == {(0, 2), (0, 3), (1, 2), (1, 3)}
    with pytest.raises(InputError):
        remove_edges(C4, [(0, 2)])


@given(small_graphs(), st.data())
def test_remove_add_round_trip(G, data):
    F = data.draw(st.lists(st.sampled_from(sorted(G.edges)), unique=True)) if G.m else []
    H = remove_edges(G, F)
    assert H.n == G.n and H.m == G.m - len(F)
    assert add_edges(H, F) == G


def test_is_connected_examples():
    assert is_connected(C4, range(4))
    assert not is_connected(C4, {0, 2})
    assert all(is_connected(K4, S) for S in ({0}, {1, 3}, {0, 1, 2}))
    with pytest.raises(InputError):
        is_connected(C4, set())


def test_is_dominating_examples():
    assert is_dominating(K4, {0})
    assert not is_dominating(C4, {0})
    assert is_dominating(C4, range(4))


def test_components_and_forest():
    G = Graph(6, [(0, 1), (1, 2), (3, 4)])
    assert sorted(map(sorted, components(G))) == [[0, 1, 2], [3, 4], [5]]
    assert is_forest(G) and not is_forest(C4)


def test_induced_subgraph_and_remove_vertex():
    H = induced_subgraph(K4, {0, 1, 2})
    assert H.n == 4 and H.m == 3
    R, ids = remove_vertex(K4, 1)
    assert R.n == 3 and R.m == 3 and ids == [0, 2, 3]


def test_verify_coloring_examples():
    ones = EdgeColoring(2, 1, {e: 1 for e in K4.edges})
    assert verify_coloring(K4, ones).valid
    alt = EdgeColoring(2, 2, {(0, 1): 1, (1, 2): 2, (2, 3): 1, (0, 3): 2})
    assert verify_coloring(C4, alt).valid
    bad = verify_coloring(C4, EdgeColoring(2, 1, {e: 1 for e in C4.edges}))
    assert not bad.valid and len(bad.violations) == 4
    assert all(d == 2 for _, _, d in bad.violations)


def test_verify_coloring_rejects_partial_and_foreign_edges():
    with pytest.raises(InputError):
        verify_coloring(C4, EdgeColoring(2, 1, {(0, 1): 1}))
    with pytest.raises(InputError):
        verify_coloring(C4, EdgeColoring(2, 1, {e: 1 for e in K4.edges}))


def test_edge_coloring_color_range():
    with pytest.raises(InputError):
        EdgeColoring(2, 2, {(0, 1): 3})


@settings(max_examples=200)
@given(small_graphs(), st.integers(2, 5))
def test_all_one_coloring_on_mod_k_graphs(G, k):
    is_mod_k = all(d == 0 or d % k == 1 for d in G.degrees())
    col = EdgeColoring(k, 1, {e: 1 for e in G.edges})
    assert verify_coloring(G, col).valid == is_mod_k


@settings(max_examples=200)
@given(small_graphs(max_n=6), small_graphs(max_n=6), st.integers(2, 4))
def test_merging_valid_colorings_on_disjoint_parts(A, B, k):
    # B is shifted onto fresh vertices; one edge per color is always valid and
    # the two palettes overlap, so the merge has to rely on disjointness
    shift = A.n
    union = Graph(A.n + B.n, list(A.edges) + [(u + shift, v + shift) for u, v in B.edges])
    ca = EdgeColoring(k, max(A.m, 1), {e: j + 1 for j, e in enumerate(A.sorted_edges())})
    cb_edges = [(u + shift, v + shift) for u, v in B.sorted_edges()]
    cb = EdgeColoring(k, max(B.m, 1), {e: j + 1 for j, e in enumerate(cb_edges)})
    assert verify_coloring(A, ca).valid
    assert verify_coloring(Graph(union.n, cb_edges), cb).valid
    merged = ca.merged(cb)
    assert verify_coloring(union, merged).valid


def test_edge_list_round_trip(tmp_path):
    G = Graph(5, [(0, 1), (1, 4), (2, 3)])
    text = format_edge_list(G)
    assert read_edge_list(text) == G
    path = tmp_path / "g.txt"
    write_edge_list(G, str(path))
    assert read_edge_list(str(path)) == G


def test_edge_list_comments_and_errors():
    assert read_edge_list(["# header", "3 1", "0 2  # edge"]) == Graph(3, [(0, 2)])
    with pytest.raises(InputError):
        read_edge_list(["3 2", "0 1"])
    with pytest.raises(InputError):
        read_edge_list(["2 1", "0 5"])
