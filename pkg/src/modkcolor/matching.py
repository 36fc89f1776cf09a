"""Bipartite matchings, r-factors built from perfect matchings, balanced splits.

Instances are relabelled densely: left vertices are ``0..len(left)-1`` and
right vertices ``0..len(right)-1``, with ``left``/``right`` mapping back to
host-graph ids.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np

from .graph import Edge, Graph, InputError, normalize_edge
from .random_model import adjacency_matrix, rng_for

INF = math.inf


@dataclass
class BipartiteInstance:
    left: List[int]
    right: List[int]
    adj: List[List[int]]  # left index -> sorted right indices

    @classmethod
    def from_graph(cls, G: Graph, U: Iterable[int], W: Iterable[int]) -> "BipartiteInstance":
        left, right = sorted(set(U)), sorted(set(W))
        if set(left) & set(right):
            raise InputError("bipartite sides must be disjoint")
        pos = {w: j for j, w in enumerate(right)}
        adj = [sorted(pos[w] for w in G.neighbors(u) if w in pos) for u in left]
        return cls(left, right, adj)

    @classmethod
    def from_edges(cls, n_left: int, n_right: int, edges: Iterable[Tuple[int, int]]) -> "BipartiteInstance":
        adj: List[Set[int]] = [set() for _ in range(n_left)]
        for a, b in edges:
            if not (0 <= a < n_left and 0 <= b < n_right):
                raise InputError(f"edge ({a}, {b}) out of range")
            adj[a].add(b)
        return cls(list(range(n_left)), list(range(n_left, n_left + n_right)), [sorted(s) for s in adj])

    @property
    def edges(self) -> List[Tuple[int, int]]:
        return [(a, b) for a, nb in enumerate(self.adj) for b in nb]

    def host_edge(self, a: int, b: int) -> Edge:
        return normalize_edge(self.left[a], self.right[b])

    def without(self, removed: Iterable[Tuple[int, int]]) -> "BipartiteInstance":
        removed = set(removed)
        return BipartiteInstance(
            self.left, self.right, [[b for b in nb if (a, b) not in removed] for a, nb in enumerate(self.adj)]
        )

    def neighborhood(self, S: Iterable[int]) -> Set[int]:
        out: Set[int] = set()
        for a in S:
            out.update(self.adj[a])
        return out


@dataclass
class Matching:
    pairs: Dict[int, int]  # left index -> right index
    hall_witness: Optional[FrozenSet[int]] = None  # left indices with |N(S)| < |S|

    @property
    def size(self) -> int:
        return len(self.pairs)

    def edges(self) -> List[Tuple[int, int]]:
        return sorted(self.pairs.items())


def max_matching(B: BipartiteInstance) -> Matching:
    """Hopcroft-Karp maximum matching.

    When some left vertex stays unmatched, the left vertices reachable from the
    unmatched ones by alternating paths form a deficient set ``S``: all of
    ``N(S)`` is matched back into ``S``, so ``|N(S)| < |S|``.
    """
    nl, nr = len(B.left), len(B.right)
    adj = B.adj
    match_l = [-1] * nl
    match_r = [-1] * nr
    dist = [INF] * nl

    def bfs() -> bool:
        queue = deque()
        for a in range(nl):
            if match_l[a] < 0:
                dist[a] = 0
                queue.append(a)
            else:
                dist[a] = INF
        found = False
        while queue:
            a = queue.popleft()
            for b in adj[a]:
                a2 = match_r[b]
                if a2 < 0:
                    found = True
                elif dist[a2] == INF:
                    dist[a2] = dist[a] + 1
                    queue.append(a2)
        return found

    def dfs(root: int) -> bool:
        # iterative layered DFS; avoids recursion limits on long paths
        stack = [(root, iter(adj[root]))]
        path = []
        while stack:
            a, it = stack[-1]
            advanced = False
            for b in it:
                a2 = match_r[b]
                if a2 < 0:
                    path.append((a, b))
                    for x, y in path:
                        match_l[x] = y
                        match_r[y] = x
                    return True
                if dist[a2] == dist[a] + 1:
                    path.append((a, b))
                    stack.append((a2, iter(adj[a2])))
                    advanced = True
                    break
            if not advanced:
                dist[a] = INF
                stack.pop()
                if path:
                    path.pop()
        return False

    while bfs():
        for a in range(nl):
            if match_l[a] < 0:
                dfs(a)

    pairs = {a: b for a, b in enumerate(match_l) if b >= 0}
    witness = None
    if len(pairs) < nl:
        seen_l = {a for a in range(nl) if match_l[a] < 0}
        seen_r: Set[int] = set()
        queue = deque(seen_l)
        while queue:
            a = queue.popleft()
            for b in adj[a]:
                if b not in seen_r:
                    seen_r.add(b)
                    a2 = match_r[b]
                    if a2 >= 0 and a2 not in seen_l:
                        seen_l.add(a2)
                        queue.append(a2)
        witness = frozenset(seen_l)
    return Matching(pairs, witness)


def verify_hall_witness(B: BipartiteInstance, S: Iterable[int]) -> bool:
    S = set(S)
    return len(B.neighborhood(S)) < len(S)


@dataclass
class FactorDecomposition:
    r: int
    matchings: List[List[Tuple[int, int]]]  # dense (left, right) pairs
    repaired: bool = False

    def host_matchings(self, B: BipartiteInstance) -> List[List[Edge]]:
        return [[B.host_edge(a, b) for a, b in M] for M in self.matchings]


@dataclass
class FactorFailure:
    iteration: int
    witness: FrozenSet[int]
    residual: BipartiteInstance

    @property
    def stage(self) -> str:
        return "factor"


def _regular_subgraph_by_flow(B: BipartiteInstance, r: int) -> Optional[List[Tuple[int, int]]]:
    """Edge set of an r-regular spanning subgraph, via unit-capacity augmenting paths."""
    nl, nr = len(B.left), len(B.right)
    used: Set[Tuple[int, int]] = set()
    load_l = [0] * nl
    load_r = [0] * nr
    radj: List[List[int]] = [[] for _ in range(nr)]
    for a, nb in enumerate(B.adj):
        for b in nb:
            radj[b].append(a)
    for _ in range(r * nl):
        # BFS in the residual network from any left vertex with spare capacity
        parent_l: Dict[int, Optional[Tuple[int, int]]] = {}
        parent_r: Dict[int, int] = {}
        queue = deque()
        for a in range(nl):
            if load_l[a] < r:
                parent_l[a] = None
                queue.append(a)
        target = -1
        while queue and target < 0:
            a = queue.popleft()
            for b in B.adj[a]:
                if (a, b) in used or b in parent_r:
                    continue
                parent_r[b] = a
                if load_r[b] < r:
                    target = b
                    break
                for a2 in radj[b]:
                    if (a2, b) in used and a2 not in parent_l:
                        parent_l[a2] = (b, a2)
                        queue.append(a2)
        if target < 0:
            return None
        b = target
        load_r[b] += 1
        while True:
            a = parent_r[b]
            used.add((a, b))
            back = parent_l[a]
            if back is None:
                load_l[a] += 1
                break
            b_prev, _ = back
            used.discard((a, b_prev))
            b = b_prev
    return sorted(used)


def extract_r_factor(B: BipartiteInstance, r: int, repair: bool = True):
    """Peel ``r`` edge-disjoint perfect matchings off ``B`` one at a time.

    Returns a :class:`FactorDecomposition` or a :class:`FactorFailure` naming
    the 1-based iteration whose residual graph had no perfect matching plus a
    Hall witness in that residual.  Greedy peeling can paint itself into a
    corner; with ``repair=True`` a failed peel falls back to finding an
    r-regular subgraph by flow and peeling that instead, which cannot fail
    since regular bipartite graphs always have a perfect matching.
    """
    if r < 0:
        raise InputError(f"factor degree must be non-negative, got {r}")
    if len(B.left) != len(B.right):
        raise InputError(f"sides differ in size: {len(B.left)} vs {len(B.right)}")
    if not B.left and r > 0:
        raise InputError("empty instance")
    residual = B
    matchings: List[List[Tuple[int, int]]] = []
    for it in range(1, r + 1):
        M = max_matching(residual)
        if M.size < len(B.left):
            failure = FactorFailure(it, M.hall_witness, residual)
            break
        matchings.append(M.edges())
        residual = residual.without(M.edges())
    else:
        return FactorDecomposition(r, matchings)

    if repair:
        regular = _regular_subgraph_by_flow(B, r)
        if regular is not None:
            sub = BipartiteInstance(B.left, B.right, [[] for _ in B.left])
            for a, b in regular:
                sub.adj[a].append(b)
            matchings = []
            for _ in range(r):
                M = max_matching(sub)
                assert M.size == len(B.left), "regular bipartite graph without perfect matching"
                matchings.append(M.edges())
                sub = sub.without(M.edges())
            return FactorDecomposition(r, matchings, repaired=True)
    return failure


def check_factor(B: BipartiteInstance, F: FactorDecomposition) -> List[str]:
    """Problems with a decomposition (empty list when it is a genuine r-factor)."""
    problems = []
    edge_set = set(B.edges)
    seen: Set[Tuple[int, int]] = set()
    deg_l = [0] * len(B.left)
    deg_r = [0] * len(B.right)
    if len(F.matchings) != F.r:
        problems.append(f"expected {F.r} matchings, got {len(F.matchings)}")
    for i, M in enumerate(F.matchings):
        ls = [a for a, _ in M]
        rs = [b for _, b in M]
        if sorted(ls) != list(range(len(B.left))) or sorted(rs) != list(range(len(B.right))):
            problems.append(f"matching {i} is not perfect")
        for e in M:
            if e not in edge_set:
                problems.append(f"matching {i} uses non-edge {e}")
            if e in seen:
                problems.append(f"edge {e} reused")
            seen.add(e)
            deg_l[e[0]] += 1
            deg_r[e[1]] += 1
    if any(d != F.r for d in deg_l + deg_r):
        problems.append("union is not r-regular")
    return problems


@dataclass
class SplitResult:
    U: Tuple[int, ...]
    W: Tuple[int, ...]
    achieved_min_degree: int
    attempts: int
    target: int
    target_met: bool


def _split_attempts(G: Graph, S: Sequence[int], retries: int, seed: int, pairing_seed: Optional[int] = None):
    """All coin-flip splits of a fixed pairing of ``S``.

    The pairing is sorted ``S`` taken consecutively, or a seeded shuffle of it
    when ``pairing_seed`` is given.  Yields ``(min cross degree, attempt
    index, U, W)`` for every attempt.
    """
    S = sorted(S)
    if pairing_seed is not None:
        S = [S[i] for i in rng_for(pairing_seed, "pairing").permutation(len(S))]
    m = len(S)
    A = adjacency_matrix(G, dtype=np.int32)[np.ix_(S, S)]
    rng = rng_for(seed, "split")
    coins = rng.integers(0, 2, size=(retries, m // 2)).astype(bool)
    first = np.arange(0, m, 2)
    # side[t, v] is True when S[v] goes to U in attempt t
    side = np.zeros((retries, m), dtype=bool)
    side[:, first] = coins
    side[:, first + 1] = ~coins
    inU = side.astype(np.int32)
    to_W = (1 - inU) @ A
    to_U = inU @ A
    cross = np.where(side, to_W, to_U)
    mins = cross.min(axis=1)
    S_arr = np.array(S)
    for t in range(retries):
        yield int(mins[t]), t, tuple(S_arr[side[t]].tolist()), tuple(S_arr[~side[t]].tolist())


def split_target(G: Graph, S: Iterable[int]) -> int:
    S = set(S)
    delta = min((len(G.neighbors(v) & S) for v in S), default=0)
    return math.ceil(2 * delta / 5)


def ranked_splits(
    G: Graph, S: Iterable[int], retries: int = 100, seed: int = 0, pairing_seed: Optional[int] = None
) -> List[SplitResult]:
    """Every attempt of :func:`balanced_split`, best first (ties by attempt order)."""
    S = sorted(set(S))
    if len(S) % 2 or len(S) < 2:
        raise InputError(f"split needs an even number (>= 2) of vertices, got {len(S)}")
    if retries < 1:
        raise InputError("retries must be positive")
    target = split_target(G, S)
    attempts = sorted(_split_attempts(G, S, retries, seed, pairing_seed), key=lambda a: (-a[0], a[1]))
    return [
        SplitResult(tuple(sorted(U)), tuple(sorted(W)), d, retries, target, d >= target) for d, _, U, W in attempts
    ]


def balanced_split(G: Graph, S: Iterable[int], retries: int = 100, seed: int = 0) -> SplitResult:
    """Randomly halve ``S`` pair by pair, keeping the best of ``retries`` attempts.

    Sorted ``S`` is paired consecutively and one fair coin per pair decides
    which member joins ``U``.  The attempt maximizing the minimum degree of
    the bipartite graph between ``U`` and ``W`` wins; ``target_met`` reports
    whether it reaches ``ceil(2 * delta(G[S]) / 5)``.
    """
    return ranked_splits(G, S, retries, seed)[0]
