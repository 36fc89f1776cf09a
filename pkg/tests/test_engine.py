import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modkcolor.engine import (
    FAILURE_STAGES,
    Star,
    StarForest,
    StarPlan,
    case_even_even,
    case_even_odd,
    case_odd,
    color_star_forest,
    construct_coloring,
    forest_chi_value,
    k1kk_coloring,
    k1kk_graph,
    select_star_forest,
)
from modkcolor.exact import chi_k_exact
from modkcolor.graph import (
    Graph,
    InputError,
    color_degrees,
    complete_graph,
    complete_multipartite,
    cycle_graph,
    degree_classes,
    star_graph,
    verify_coloring,
)
from modkcolor.random_model import gnp

PAW = Graph(4, [(2, 0), (2, 1), (2, 3), (0, 1)])  # c=2, a=0, b=1, x=3


def k4_plus_u():
    """Vertex 0 joined to two vertices of a K_4 on 1..4."""
    k4 = [(u, v) for u, v in itertools.combinations(range(1, 5), 2)]
    return Graph(5, k4 + [(0, 1), (0, 2)])


def assert_sound(G, k, res):
    assert verify_coloring(G, res.coloring).valid
    assert res.colors_used <= res.budget(k)


# -- stars -------------------------------------------------------------------


def test_star_selection_examples():
    F = select_star_forest(PAW, 3, StarPlan((3,)))
    assert F.stars == [Star(2, (0, 1), 3, "plain")]
    assert select_star_forest(complete_graph(5), 3, StarPlan(())).stars == []
    # twin stars need two centres in V_3; the paw has one
    assert select_star_forest(PAW, 3, StarPlan((), twin=True)) is None


def test_star_selection_rejects_bad_plans():
    with pytest.raises(InputError):
        select_star_forest(PAW, 3, StarPlan((2,)))
    with pytest.raises(InputError):
        select_star_forest(PAW, 3, StarPlan((4,)))
    with pytest.raises(InputError):
        select_star_forest(PAW, 3, StarPlan((3,), extended=4))


def test_star_forest_colors():
    plain = StarForest([Star(0, (1, 2, 3), 4, "plain")])
    assert sorted(color_star_forest(plain, 4).assignment.values()) == [2, 3, 4]
    ext = StarForest([Star(0, tuple(range(1, 8)), 3, "extended")])
    values = sorted(color_star_forest(ext, 5).assignment.values())
    assert values == [2] + [3] * 6  # one ray of the first color, six of the second
    assert color_star_forest(StarForest([]), 3).assignment == {}


def test_star_forest_colors_reject_malformed():
    with pytest.raises(InputError):
        color_star_forest(StarForest([Star(0, (1, 2), 4, "plain")]), 4)
    with pytest.raises(InputError):
        color_star_forest(StarForest([Star(0, (1, 2), 3, "giant")]), 4)


@pytest.mark.parametrize("k,i", [(k, i) for k in range(3, 7) for i in range(3, k + 1)])
def test_star_colors_leave_every_vertex_with_residue_one(k, i):
    for variant, rays in (("plain", i - 1), ("extended", k + i - 1)):
        F = StarForest([Star(0, tuple(range(1, rays + 1)), i, variant)])
        col = color_star_forest(F, k)
        H = Graph(rays + 1, F.edges())
        for (v, c), d in color_degrees(H, col.assignment).items():
            assert d % k == 1, (variant, v, c, d)
        assert max(col.assignment.values()) <= i


# -- construct_coloring ------------------------------------------------------


def test_c4_two_colors():
    res = construct_coloring(cycle_graph(4), 2)
    assert res.success and res.colors_used == 2 and res.case_tag == "even_even"
    assert res.trace.forest.stars == [] and res.trace.factors[2].r == 1
    assert chi_k_exact(cycle_graph(4), 2).chi == 2


def test_k4_one_color():
    res = case_even_even(complete_graph(4), 2)
    assert res.colors_used == 1 and not res.trace.forest.stars and not res.trace.factors


def test_k4_plus_u_even_odd():
    G = k4_plus_u()
    res = case_even_odd(G, 2)
    assert res.success and res.colors_used == 3
    assert res.trace.removed_vertex == 0
    col = res.coloring.assignment
    assert all(col[e] == 1 for e in G.edges if 0 not in e)
    assert sorted((col[(0, 1)], col[(0, 2)])) == [2, 3]
    assert chi_k_exact(G, 2).chi <= 3


def test_k122_fails_with_a_stage():
    res = construct_coloring(complete_multipartite(1, 2, 2), 2)
    assert not res.success and res.failure.stage in FAILURE_STAGES
    assert chi_k_exact(complete_multipartite(1, 2, 2), 2).chi == 4


def test_paw_odd_case():
    res = case_odd(PAW, 3)
    assert res.success and res.colors_used == 3
    assert res.trace.forest.stars == [Star(2, (0, 1), 3, "plain")]
    assert res.coloring[(2, 3)] == 1 and res.coloring[(0, 1)] == 1
    assert {res.coloring[(0, 2)], res.coloring[(1, 2)]} == {2, 3}


def test_k4_mod_3_succeeds():
    res = construct_coloring(complete_graph(4), 3)
    assert res.success and res.colors_used == 3
    assert chi_k_exact(complete_graph(4), 3).chi == 3


def test_k5_mod_3_single_color():
    assert construct_coloring(complete_graph(5), 3).colors_used == 1


def test_k14_even_odd_within_budget():
    res = construct_coloring(star_graph(4), 2)
    assert res.case_tag == "even_odd"
    if res.success:
        assert res.colors_used <= 3
    assert forest_chi_value(star_graph(4), 2) == 2


def test_case_guards():
    with pytest.raises(InputError):
        case_even_even(PAW, 3)
    with pytest.raises(InputError):
        case_even_even(k4_plus_u(), 2)
    with pytest.raises(InputError):
        case_even_odd(complete_graph(6), 2)
    with pytest.raises(InputError):
        case_odd(cycle_graph(4), 2)
    with pytest.raises(InputError):
        construct_coloring(cycle_graph(4), 1)


def test_isolated_vertices_do_not_change_dispatch():
    G = Graph(5, cycle_graph(4).edges)
    res = construct_coloring(G, 2)
    assert res.case_tag == "even_even" and res.colors_used == 2


def test_empty_graph():
    res = construct_coloring(Graph(3, []), 2)
    assert res.success and res.coloring.assignment == {}


@pytest.mark.parametrize("k,n", [(2, 40), (2, 41), (3, 40), (4, 60), (4, 61)])
def test_engine_on_gnp(k, n):
    wins = 0
    for seed in range(10):
        G = gnp(n, 0.5, seed)
        res = construct_coloring(G, k, seed=seed)
        if res.success:
            wins += 1
            assert_sound(G, k, res)
    assert wins >= 5


def test_engine_deterministic():
    G = gnp(50, 0.5, 11)
    a, b = construct_coloring(G, 4, seed=3), construct_coloring(G, 4, seed=3)
    assert a.success == b.success
    if a.success:
        assert a.coloring.assignment == b.coloring.assignment
    assert a.trace.to_dict() == b.trace.to_dict()


def test_trace_is_json_friendly():
    import json

    res = construct_coloring(gnp(41, 0.5, 2), 2, seed=1)
    json.dumps(res.trace.to_dict())


# -- closed forms ------------------------------------------------------------


def test_forest_formula_examples():
    assert forest_chi_value(Graph(2, [(0, 1)]), 5) == 1
    assert forest_chi_value(star_graph(5), 3) == 2
    for k in (3, 4):
        assert forest_chi_value(star_graph(k), k) == k
        assert chi_k_exact(star_graph(k), k).chi == k
    assert chi_k_exact(star_graph(5), 3).chi == 2
    assert forest_chi_value(Graph(4, []), 3) == 1
    with pytest.raises(InputError):
        forest_chi_value(cycle_graph(3), 2)


@st.composite
def random_forests(draw, max_edges=8):
    n = draw(st.integers(2, max_edges + 1))
    edges = []
    for v in range(1, n):
        parent = draw(st.integers(-1, v - 1))
        if parent >= 0 and len(edges) < max_edges:
            edges.append((parent, v))
    return Graph(n, edges)


@settings(max_examples=60, deadline=None)
@given(random_forests(), st.integers(2, 4))
def test_forest_formula_matches_exact(F, k):
    if F.m == 0:
        assert forest_chi_value(F, k) == 1
        return
    assert forest_chi_value(F, k) == chi_k_exact(F, k).chi


@pytest.mark.parametrize("k", range(2, 11))
def test_k1kk_coloring(k):
    G, col = k1kk_graph(k), k1kk_coloring(k)
    assert verify_coloring(G, col).valid and col.colors_used == k + 2
    classes = col.color_classes()
    for c in range(1, k + 2):
        ends = [v for e in classes[c] for v in e]
        assert len(ends) == len(set(ends)), f"class {c} is not a matching"
    star = classes[k + 2]
    assert len(star) == k + 1 and all(0 in e for e in star)


def test_k1kk_shape():
    G = k1kk_graph(3)
    assert G.n == 7 and G.m == 3 + 3 + 9
    assert G == complete_multipartite(1, 3, 3)
