"""Simple undirected graphs, degree classes and mod-k coloring validity.

Vertices are the integers ``0..n-1`` and an edge is stored as the normalized
pair ``(min(u, v), max(u, v))``.  Graphs are immutable; every "mutation"
returns a new graph.

Degree classes use the index range ``1..k``: a vertex of degree ``d`` lives in
class ``d % k`` except that residue 0 is stored as class ``k``.  Isolated
vertices therefore land in class ``k`` even though they never constrain a
coloring.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

Edge = Tuple[int, int]


class InputError(ValueError):
    """Raised when an operation receives malformed or out-of-contract input."""


def normalize_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class Graph:
    """Immutable simple graph on vertices ``0..n-1``."""

    __slots__ = ("_n", "_edges", "_adj")

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = ()):
        if n < 0:
            raise InputError(f"vertex count must be non-negative, got {n}")
        adj: List[set] = [set() for _ in range(n)]
        normalized = set()
        for pair in edges:
            u, v = int(pair[0]), int(pair[1])
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u}, {v}) references a vertex outside 0..{n - 1}")
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            e = normalize_edge(u, v)
            if e not in normalized:
                normalized.add(e)
                adj[u].add(v)
                adj[v].add(u)
        self._n = n
        self._edges = frozenset(normalized)
        self._adj = tuple(frozenset(a) for a in adj)

    @property
    def n(self) -> int:
        return self._n

    @property
    def edges(self) -> frozenset:
        return self._edges

    @property
    def m(self) -> int:
        return len(self._edges)

    def neighbors(self, v: int) -> frozenset:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def degrees(self) -> List[int]:
        return [len(a) for a in self._adj]

    def has_edge(self, u: int, v: int) -> bool:
        return 0 <= u < self._n and v in self._adj[u]

    def sorted_edges(self) -> List[Edge]:
        return sorted(self._edges)

    def non_isolated(self) -> List[int]:
        return [v for v in range(self._n) if self._adj[v]]

    def __iter__(self) -> Iterator[Edge]:
        return iter(self.sorted_edges())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self._n, self._edges))

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, m={len(self._edges)})"


def build_graph(n: int, edge_list: Iterable[Sequence[int]]) -> Graph:
    """Build a graph, deduplicating edges and rejecting loops and bad ids."""
    return Graph(n, edge_list)


def _check_vertices(G: Graph, S: Iterable[int], name: str = "vertex set") -> frozenset:
    S = frozenset(int(v) for v in S)
    bad = [v for v in S if not 0 <= v < G.n]
    if bad:
        raise InputError(f"{name} contains vertices outside 0..{G.n - 1}: {sorted(bad)[:5]}")
    return S


@dataclass(frozen=True)
class DegreeClassPartition:
    """Vertices grouped by degree residue; ``classes[i - 1]`` is class ``V_i``."""

    k: int
    classes: Tuple[frozenset, ...]

    def __getitem__(self, i: int) -> frozenset:
        if not 1 <= i <= self.k:
            raise IndexError(f"class index must be in 1..{self.k}, got {i}")
        return self.classes[i - 1]

    @property
    def sizes(self) -> Tuple[int, ...]:
        return tuple(len(c) for c in self.classes)

    def size(self, i: int) -> int:
        return len(self[i])

    def class_of(self, v: int) -> int:
        for i, c in enumerate(self.classes, start=1):
            if v in c:
                return i
        raise KeyError(v)


def residue_class(d: int, k: int) -> int:
    """Class index in ``1..k`` of a vertex with degree ``d``."""
    r = d % k
    return k if r == 0 else r


def degree_classes(G: Graph, k: int) -> DegreeClassPartition:
    if k < 2:
        raise InputError(f"modulus k must be at least 2, got {k}")
    buckets: List[List[int]] = [[] for _ in range(k)]
    for v, d in enumerate(G.degrees()):
        buckets[residue_class(d, k) - 1].append(v)
    return DegreeClassPartition(k, tuple(frozenset(b) for b in buckets))


def induced_bipartite(G: Graph, U: Iterable[int], W: Iterable[int]) -> Graph:
    """Edges of ``G`` with one end in ``U`` and the other in ``W``.

    The result keeps the host vertex set so degrees are read off directly.
    """
    U = _check_vertices(G, U, "U")
    W = _check_vertices(G, W, "W")
    if U & W:
        raise InputError("U and W must be disjoint")
    small, large = (U, W) if len(U) <= len(W) else (W, U)
    edges = [(u, w) for u in small for w in G.neighbors(u) if w in large]
    return Graph(G.n, edges)


def induced_subgraph(G: Graph, S: Iterable[int]) -> Graph:
    """``G[S]`` on the host vertex set (vertices outside ``S`` become isolated)."""
    S = _check_vertices(G, S)
    return Graph(G.n, [e for e in G.edges if e[0] in S and e[1] in S])


def remove_edges(G: Graph, F: Iterable[Sequence[int]]) -> Graph:
    F = {normalize_edge(int(e[0]), int(e[1])) for e in F}
    missing = F - G.edges
    if missing:
        raise InputError(f"edges not in graph: {sorted(missing)[:5]}")
    return Graph(G.n, G.edges - F)


def add_edges(G: Graph, F: Iterable[Sequence[int]]) -> Graph:
    return Graph(G.n, list(G.edges) + [tuple(e) for e in F])


def remove_vertex(G: Graph, u: int) -> Tuple[Graph, List[int]]:
    """Delete ``u`` and relabel densely; returns the graph and new->old ids."""
    if not 0 <= u < G.n:
        raise InputError(f"vertex {u} outside 0..{G.n - 1}")
    keep = [v for v in range(G.n) if v != u]
    new_id = {v: i for i, v in enumerate(keep)}
    edges = [(new_id[a], new_id[b]) for a, b in G.edges if u not in (a, b)]
    return Graph(G.n - 1, edges), keep


def components(G: Graph, S: Optional[Iterable[int]] = None) -> List[List[int]]:
    """Connected components of ``G[S]`` (all of ``G`` by default)."""
    S = frozenset(range(G.n)) if S is None else _check_vertices(G, S)
    seen = set()
    out = []
    for s in sorted(S):
        if s in seen:
            continue
        comp = [s]
        seen.add(s)
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for w in G.neighbors(v):
                if w in S and w not in seen:
                    seen.add(w)
                    comp.append(w)
                    queue.append(w)
        out.append(sorted(comp))
    return out


def is_connected(G: Graph, S: Iterable[int]) -> bool:
    S = _check_vertices(G, S)
    if not S:
        raise InputError("connectivity of an empty vertex set is left to the caller")
    return len(components(G, S)) == 1


def is_dominating(G: Graph, S: Iterable[int]) -> bool:
    S = _check_vertices(G, S)
    return all(v in S or not S.isdisjoint(G.neighbors(v)) for v in range(G.n))


def is_forest(G: Graph) -> bool:
    return G.m == G.n - len(components(G))


@dataclass
class EdgeColoring:
    """Assignment of colors ``1..c`` to edges, keyed by normalized pair."""

    k: int
    c: int
    assignment: Dict[Edge, int] = field(default_factory=dict)
    partial: bool = False

    def __post_init__(self):
        self.assignment = {normalize_edge(*e): col for e, col in self.assignment.items()}
        bad = {col for col in self.assignment.values() if not 1 <= col <= self.c}
        if bad:
            raise InputError(f"colors {sorted(bad)} fall outside 1..{self.c}")

    def __getitem__(self, e: Sequence[int]) -> int:
        return self.assignment[normalize_edge(e[0], e[1])]

    def __len__(self) -> int:
        return len(self.assignment)

    @property
    def colors_used(self) -> int:
        return len(set(self.assignment.values()))

    def color_classes(self) -> Dict[int, List[Edge]]:
        out: Dict[int, List[Edge]] = defaultdict(list)
        for e, col in sorted(self.assignment.items()):
            out[col].append(e)
        return dict(out)

    def compact(self) -> "EdgeColoring":
        """Relabel used colors to ``1..colors_used`` keeping their order."""
        relabel = {col: i for i, col in enumerate(sorted(set(self.assignment.values())), start=1)}
        return EdgeColoring(
            self.k,
            len(relabel),
            {e: relabel[col] for e, col in self.assignment.items()},
            self.partial,
        )

    def merged(self, other: "EdgeColoring") -> "EdgeColoring":
        overlap = self.assignment.keys() & other.assignment.keys()
        if overlap:
            raise InputError(f"colorings overlap on edges {sorted(overlap)[:5]}")
        return EdgeColoring(
            self.k, max(self.c, other.c), {**self.assignment, **other.assignment}, True
        )

    def to_triples(self) -> List[List[int]]:
        return [[u, v, col] for (u, v), col in sorted(self.assignment.items())]

    @classmethod
    def from_triples(cls, k: int, triples: Iterable[Sequence[int]]) -> "EdgeColoring":
        assignment = {normalize_edge(int(t[0]), int(t[1])): int(t[2]) for t in triples}
        c = max(assignment.values(), default=0)
        return cls(k, c, assignment)


@dataclass(frozen=True)
class ValidityReport:
    valid: bool
    violations: Tuple[Tuple[int, int, int], ...]

    def __bool__(self) -> bool:
        return self.valid


def color_degrees(G: Graph, assignment: Mapping[Edge, int]) -> Dict[Tuple[int, int], int]:
    deg: Dict[Tuple[int, int], int] = defaultdict(int)
    for (u, v), col in assignment.items():
        deg[u, col] += 1
        deg[v, col] += 1
    return deg


def verify_coloring(G: Graph, col: EdgeColoring) -> ValidityReport:
    """Check that every nonzero color-degree is congruent to 1 mod ``col.k``.

    Violations are ``(vertex, color, degree)`` triples sorted by vertex then
    color.
    """
    missing = G.edges - col.assignment.keys()
    if missing:
        raise InputError(f"coloring leaves {len(missing)} edges uncolored, e.g. {sorted(missing)[0]}")
    extra = col.assignment.keys() - G.edges
    if extra:
        raise InputError(f"coloring assigns colors to non-edges, e.g. {sorted(extra)[0]}")
    deg = color_degrees(G, col.assignment)
    violations = tuple(
        (v, c, d) for (v, c), d in sorted(deg.items()) if d % col.k != 1
    )
    return ValidityReport(not violations, violations)


def read_edge_list(path_or_lines) -> Graph:
    """Parse the ``n m`` header + ``u v`` lines format; ``#`` starts a comment."""
    if isinstance(path_or_lines, str) and "\n" not in path_or_lines:
        with open(path_or_lines) as fh:
            lines = fh.read().splitlines()
    elif isinstance(path_or_lines, str):
        lines = path_or_lines.splitlines()
    else:
        lines = list(path_or_lines)
    rows = []
    for raw in lines:
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append(line.split())
    if not rows:
        raise InputError("edge list is empty (missing 'n m' header)")
    try:
        header = [int(x) for x in rows[0]]
        body = [(int(r[0]), int(r[1])) for r in rows[1:]]
    except (ValueError, IndexError) as exc:
        raise InputError(f"malformed edge list: {exc}") from None
    if len(header) != 2:
        raise InputError("header must be 'n m'")
    n, m = header
    if len(body) != m:
        raise InputError(f"header announces {m} edges but {len(body)} follow")
    return Graph(n, body)


def format_edge_list(G: Graph) -> str:
    lines = [f"{G.n} {G.m}"] + [f"{u} {v}" for u, v in G.sorted_edges()]
    return "\n".join(lines) + "\n"


def write_edge_list(G: Graph, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(format_edge_list(G))


# Named graphs used across tests, docs and the CLI.

def complete_graph(n: int) -> Graph:
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def star_graph(leaves: int) -> Graph:
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def complete_multipartite(*sizes: int) -> Graph:
    parts, start = [], 0
    for s in sizes:
        parts.append(range(start, start + s))
        start += s
    edges = [
        (u, v)
        for a in range(len(parts))
        for b in range(a + 1, len(parts))
        for u in parts[a]
        for v in parts[b]
    ]
    return Graph(start, edges)
