import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modkcolor.graph import Graph, InputError, complete_graph, cycle_graph, induced_bipartite
from modkcolor.matching import (
    BipartiteInstance,
    FactorDecomposition,
    FactorFailure,
    balanced_split,
    check_factor,
    extract_r_factor,
    max_matching,
    ranked_splits,
    verify_hall_witness,
)
from modkcolor.random_model import gnp


def brute_max_matching(B):
    best = 0
    edges = B.edges
    for size in range(min(len(B.left), len(B.right)), 0, -1):
        for combo in itertools.combinations(edges, size):
            if len({a for a, _ in combo}) == size and len({b for _, b in combo}) == size:
                return size
    return best


def K(a, b):
    return BipartiteInstance.from_edges(a, b, [(i, j) for i in range(a) for j in range(b)])


@st.composite
def bipartite_instances(draw, max_side=5):
    nl = draw(st.integers(1, max_side))
    nr = draw(st.integers(1, max_side))
    pairs = list(itertools.product(range(nl), range(nr)))
    edges = draw(st.lists(st.sampled_from(pairs), unique=True))
    return BipartiteInstance.from_edges(nl, nr, edges)


def test_matching_examples():
    assert max_matching(K(3, 3)).size == 3
    M = max_matching(BipartiteInstance.from_edges(2, 1, [(0, 0), (1, 0)]))
    assert M.size == 1 and M.hall_witness == frozenset({0, 1})
    # path u1-w1, u2-w1, u2-w2
    M = max_matching(BipartiteInstance.from_edges(2, 2, [(0, 0), (1, 0), (1, 1)]))
    assert M.size == 2 and M.edges() == [(0, 0), (1, 1)] and M.hall_witness is None


@settings(max_examples=300)
@given(bipartite_instances())
def test_matching_is_maximum_and_witness_sound(B):
    M = max_matching(B)
    assert M.size == brute_max_matching(B)
    assert all(b in B.adj[a] for a, b in M.pairs.items())
    assert len(set(M.pairs.values())) == M.size
    if M.size < len(B.left):
        assert M.hall_witness is not None and verify_hall_witness(B, M.hall_witness)
        # Konig deficiency: |S| - |N(S)| equals the number of unmatched left vertices
        S = M.hall_witness
        assert len(S) - len(B.neighborhood(S)) == len(B.left) - M.size
    else:
        assert M.hall_witness is None


def test_factor_examples():
    F = extract_r_factor(K(3, 3), 3)
    assert isinstance(F, FactorDecomposition) and check_factor(K(3, 3), F) == []
    assert sorted(e for M in F.matchings for e in M) == sorted(K(3, 3).edges)

    C4 = BipartiteInstance.from_graph(cycle_graph(4), {0, 2}, {1, 3})
    F = extract_r_factor(C4, 2)
    assert check_factor(C4, F) == [] and sum(map(len, F.matchings)) == 4

    B = BipartiteInstance.from_edges(2, 2, [(0, 0), (0, 1)])
    fail = extract_r_factor(B, 1)
    assert isinstance(fail, FactorFailure) and fail.iteration == 1
    assert fail.witness == frozenset({1})


def test_factor_zero_and_errors():
    F = extract_r_factor(K(2, 2), 0)
    assert F.matchings == []
    with pytest.raises(InputError):
        extract_r_factor(K(2, 2), -1)
    with pytest.raises(InputError):
        extract_r_factor(K(2, 3), 1)


def test_repair_escapes_greedy_dead_end():
    # A 2-regular subgraph exists (the 6-cycle) but the first peeled matching
    # may use the chord pattern; either way the result must be a 2-factor.
    edges = [(0, 0), (0, 1), (1, 1), (1, 2), (2, 2), (2, 0), (0, 2)]
    B = BipartiteInstance.from_edges(3, 3, edges)
    F = extract_r_factor(B, 2)
    assert isinstance(F, FactorDecomposition) and check_factor(B, F) == []


def test_host_matchings_use_host_ids():
    G = complete_graph(4)
    B = BipartiteInstance.from_graph(G, {0, 3}, {1, 2})
    F = extract_r_factor(B, 2)
    hosts = F.host_matchings(B)
    assert sorted(e for M in hosts for e in M) == sorted(induced_bipartite(G, {0, 3}, {1, 2}).edges)


def test_split_examples():
    K4 = complete_graph(4)
    for seed in range(5):
        s = balanced_split(K4, range(4), seed=seed)
        assert s.achieved_min_degree == 2 and s.target == 2 and s.target_met
    s = balanced_split(cycle_graph(4), range(4))
    assert s.achieved_min_degree >= 1 and s.target == 1
    s = balanced_split(Graph(2, [(0, 1)]), {0, 1})
    assert {s.U, s.W} == {(0,), (1,)} and s.achieved_min_degree == 1


def test_c4_split_enumeration():
    # natural pairing {0,1}, {2,3}: four outcomes; every outcome puts exactly one
    # of each pair on each side, and the cross degree of every vertex is 1 or 2
    splits = ranked_splits(cycle_graph(4), range(4), retries=64)
    outcomes = {(s.U, s.W) for s in splits}
    assert len(outcomes) == 4
    assert all(s.achieved_min_degree >= 1 for s in splits)


def test_split_errors():
    with pytest.raises(InputError):
        balanced_split(complete_graph(3), range(3))
    with pytest.raises(InputError):
        balanced_split(complete_graph(3), [0])


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 15), st.integers(0, 10**6))
def test_split_is_balanced_and_deterministic(half, seed):
    G = gnp(2 * half + 3, 0.4, seed)
    S = list(range(2 * half))
    a = balanced_split(G, S, retries=20, seed=seed)
    b = balanced_split(G, S, retries=20, seed=seed)
    assert a == b
    assert len(a.U) == len(a.W) == half
    assert set(a.U) | set(a.W) == set(S) and not set(a.U) & set(a.W)
    # pairing is consecutive in sorted order: each pair straddles the cut
    for i in range(0, 2 * half, 2):
        assert (S[i] in a.U) != (S[i + 1] in a.U)
    B = induced_bipartite(G, a.U, a.W)
    assert a.achieved_min_degree == min(B.degree(v) for v in S)


def test_union_of_permutations_admits_factor():
    rng = np.random.default_rng(3)
    n, r = 12, 4
    shifts = rng.choice(n, size=r, replace=False)
    sigma = rng.permutation(n)
    edges = [(a, int(sigma[(a + s) % n])) for a in range(n) for s in shifts]
    B = BipartiteInstance.from_edges(n, n, edges)
    F = extract_r_factor(B, r)
    assert check_factor(B, F) == []
