"""Exact mod-k chromatic index by backtracking, and lower-bound certificates.

The search colors edges one at a time and prunes with purely local residue
arithmetic: at each vertex the colors already present must each be topped up
to a degree congruent to 1, and whatever uncolored edges remain must split
into such amounts using the colors still available.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .graph import EdgeColoring, Graph, InputError, components, degree_classes, is_dominating, residue_class


@dataclass(frozen=True)
class SearchBudget:
    max_colors: Optional[int] = None  # defaults to the edge count, always enough
    node_limit: int = 10**8
    time_limit: Optional[float] = None  # seconds

    def __post_init__(self):
        if self.max_colors is not None and self.max_colors < 1:
            raise InputError("max_colors must be positive")
        if self.node_limit < 1:
            raise InputError("node_limit must be positive")
        if self.time_limit is not None and self.time_limit <= 0:
            raise InputError("time_limit must be positive")


class BudgetExceeded(Exception):
    pass


@dataclass
class Decision:
    status: str  # "feasible" | "infeasible" | "budget_exceeded"
    coloring: Optional[EdgeColoring]
    nodes: int

    @property
    def feasible(self) -> bool:
        return self.status == "feasible"


def _vertex_ok(counts: List[int], rem: int, k: int, c: int) -> bool:
    """Can a vertex with color-degrees ``counts`` and ``rem`` open edges finish?"""
    present = 0
    deficit = 0
    for d in counts:
        if d:
            present += 1
            deficit += (1 - d) % k
    left = rem - deficit
    if left < 0:
        return False
    room = min(c - present, left)
    b = left % k
    if b == 0 and left > 0 and present == 0:
        b = k
    return b <= room


def edge_order(G: Graph) -> List[Tuple[int, int]]:
    deg = G.degrees()
    return sorted(G.edges, key=lambda e: (-(deg[e[0]] + deg[e[1]]), e))


def decide_coloring(G: Graph, k: int, c: int, budget: SearchBudget = SearchBudget(), _clock=None) -> Decision:
    """Decide whether ``G`` has a mod-k coloring with at most ``c`` colors.

    ``budget_exceeded`` is reported as its own status, never as infeasible.
    """
    if c < 1:
        raise InputError(f"color count must be positive, got {c}")
    if k < 2:
        raise InputError(f"modulus k must be at least 2, got {k}")
    order = edge_order(G)
    m = len(order)
    counts = [[0] * c for _ in range(G.n)]
    rem = G.degrees()
    colors = [0] * m
    start = time.monotonic() if _clock is None else _clock
    nodes = 0
    limit = budget.node_limit
    tlimit = budget.time_limit

    for v in range(G.n):
        if not _vertex_ok(counts[v], rem[v], k, c):
            return Decision("infeasible", None, 0)

    def search(j: int, max_used: int) -> bool:
        nonlocal nodes
        if j == m:
            return True
        u, v = order[j]
        cu, cv = counts[u], counts[v]
        rem[u] -= 1
        rem[v] -= 1
        for col in range(min(c, max_used + 1)):
            nodes += 1
            if nodes > limit:
                raise BudgetExceeded
            if tlimit is not None and nodes & 0xFFF == 0 and time.monotonic() - start > tlimit:
                raise BudgetExceeded
            cu[col] += 1
            cv[col] += 1
            if _vertex_ok(cu, rem[u], k, c) and _vertex_ok(cv, rem[v], k, c):
                colors[j] = col + 1
                if search(j + 1, max(max_used, col + 1)):
                    return True
            cu[col] -= 1
            cv[col] -= 1
        rem[u] += 1
        rem[v] += 1
        return False

    try:
        found = search(0, 0)
    except BudgetExceeded:
        return Decision("budget_exceeded", None, nodes)
    if not found:
        return Decision("infeasible", None, nodes)
    col = EdgeColoring(k, c, {e: colors[j] for j, e in enumerate(order)})
    return Decision("feasible", col, nodes)


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------


@dataclass
class LowerBoundCertificate:
    kind: str  # zero_residue_vertex | parity_odd_n | bad_cycle
    witness: Dict
    bound: int

    def to_dict(self) -> Dict:
        return {"kind": self.kind, "witness": self.witness, "bound": self.bound}


def verify_certificate(G: Graph, k: int, cert: LowerBoundCertificate) -> bool:
    """Re-check a certificate's witness against ``G`` from scratch."""
    deg = G.degrees()
    if cert.kind == "zero_residue_vertex":
        v = cert.witness["vertex"]
        return deg[v] > 0 and deg[v] % k == 0 and cert.bound <= k
    if cert.kind == "parity_odd_n":
        V1 = degree_classes(G, k)[1]
        return (
            k % 2 == 0
            and G.n % 2 == 1
            and bool(V1)
            and len(components(G, V1)) == 1
            and is_dominating(G, V1)
            and cert.bound <= k + 1
        )
    if cert.kind == "bad_cycle":
        cyc = cert.witness["cycle"]
        if len(cyc) < 3 or len(set(cyc)) != len(cyc):
            return False
        if not all(G.has_edge(cyc[i], cyc[(i + 1) % len(cyc)]) for i in range(len(cyc))):
            return False
        special = cert.witness["special"]
        others = [v for v in cyc if v != special]
        return (
            special in cyc
            and deg[special] <= k
            and all(deg[v] == k + 1 for v in others)
            and cert.bound <= k + 1
        )
    return False


def _shortest_path(G: Graph, allowed: set, a: int, b: int) -> Optional[List[int]]:
    parent = {a: None}
    queue = deque([a])
    while queue:
        x = queue.popleft()
        if x == b:
            path = []
            while x is not None:
                path.append(x)
                x = parent[x]
            return path[::-1]
        for y in sorted(G.neighbors(x)):
            if y in allowed and y not in parent:
                parent[y] = x
                queue.append(y)
    return None


def find_bad_cycles(G: Graph, k: int, max_length: Optional[int] = 8) -> List[LowerBoundCertificate]:
    """Cycles whose vertices all have degree ``k+1`` except one of degree ``<= k``.

    For every low-degree vertex ``w`` and pair of its neighbours of degree
    ``k+1``, the shortest connecting path through degree-``k+1`` vertices
    closes the shortest such cycle through ``w``; at most one certificate is
    kept per ``w``.
    """
    deg = G.degrees()
    high = {v for v in range(G.n) if deg[v] == k + 1}
    certs = []
    for w in range(G.n):
        if not 2 <= deg[w] <= k:
            continue
        nbs = sorted(x for x in G.neighbors(w) if x in high)
        best = None
        for i, a in enumerate(nbs):
            for b in nbs[i + 1 :]:
                path = _shortest_path(G, high, a, b)
                if path is None:
                    continue
                cycle = [w] + path
                if max_length is not None and len(cycle) > max_length:
                    continue
                if best is None or len(cycle) < len(best):
                    best = cycle
        if best is not None:
            certs.append(LowerBoundCertificate("bad_cycle", {"cycle": best, "special": w}, k + 1))
    return certs


def find_certificates(G: Graph, k: int, max_cycle_length: Optional[int] = 8) -> List[LowerBoundCertificate]:
    """All zero-residue and odd-order certificates, plus bad cycles up to a length cap.

    A vertex of nonzero degree divisible by ``k`` forces ``k`` colors.  For
    even ``k`` and odd ``n``, a connected dominating ``G[V_1]`` forces
    ``k + 1``.  A cycle of degree-``(k+1)`` vertices closed through one vertex
    of degree at most ``k`` also forces ``k + 1``.  Missing bad-cycle output
    is not evidence that none exist beyond the cap.
    """
    if k < 2:
        raise InputError(f"modulus k must be at least 2, got {k}")
    certs = [
        LowerBoundCertificate("zero_residue_vertex", {"vertex": v}, k)
        for v, d in enumerate(G.degrees())
        if d > 0 and d % k == 0
    ]
    if k % 2 == 0 and G.n % 2 == 1:
        V1 = degree_classes(G, k)[1]
        if V1 and len(components(G, V1)) == 1 and is_dominating(G, V1):
            certs.append(
                LowerBoundCertificate("parity_odd_n", {"V1": sorted(V1), "connected": True, "dominating": True}, k + 1)
            )
    certs.extend(find_bad_cycles(G, k, max_cycle_length))
    return certs


def best_certificate(certs: Sequence[LowerBoundCertificate]) -> Optional[LowerBoundCertificate]:
    if not certs:
        return None
    order = {"parity_odd_n": 0, "bad_cycle": 1, "zero_residue_vertex": 2}
    return min(certs, key=lambda c: (-c.bound, order.get(c.kind, 9)))


def residue_lower_bound(G: Graph, k: int) -> int:
    """A vertex of degree ``d`` needs at least ``residue_class(d, k)`` colors."""
    return max((residue_class(d, k) for d in G.degrees() if d > 0), default=1)


# ---------------------------------------------------------------------------
# Exact value
# ---------------------------------------------------------------------------


@dataclass
class ExactResult:
    status: str  # "solved" | "unresolved"
    chi: Optional[int]
    witness: Optional[EdgeColoring]
    interval: Tuple[int, int]
    certificates: List[LowerBoundCertificate] = field(default_factory=list)
    nodes: int = 0

    def to_dict(self) -> Dict:
        out = {
            "status": self.status,
            "chi": self.chi,
            "interval": list(self.interval),
            "certificates": [c.to_dict() for c in self.certificates],
            "nodes": self.nodes,
        }
        if self.witness is not None:
            out["witness"] = self.witness.to_triples()
        return out


def chi_k_exact(
    G: Graph, k: int, budget: SearchBudget = SearchBudget(), max_cycle_length: Optional[int] = 8
) -> ExactResult:
    """Smallest ``c`` for which :func:`decide_coloring` finds a coloring.

    Starts from the best certificate / residue bound.  The node and time
    limits are shared across all values of ``c`` tried; running out returns
    ``status="unresolved"`` with the bracketing interval.
    """
    if G.m == 0:
        raise InputError("graph has no edges")
    certs = find_certificates(G, k, max_cycle_length)
    lb = max([residue_lower_bound(G, k)] + [c.bound for c in certs])
    ub = G.m  # every edge in its own color is always valid
    top = ub if budget.max_colors is None else min(ub, budget.max_colors)
    nodes = 0
    start = time.monotonic()
    for c in range(lb, top + 1):
        sub = SearchBudget(c, max(budget.node_limit - nodes, 1), budget.time_limit)
        dec = decide_coloring(G, k, c, sub, _clock=start)
        nodes += dec.nodes
        if dec.status == "feasible":
            return ExactResult("solved", c, dec.coloring, (c, c), certs, nodes)
        if dec.status == "budget_exceeded":
            return ExactResult("unresolved", None, None, (c, ub), certs, nodes)
        lb = c + 1
    return ExactResult("unresolved", None, None, (lb, ub), certs, nodes)
