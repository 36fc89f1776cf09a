"""Constructive mod-k edge coloring.

The construction follows three parity cases:

* ``even_even`` (k even, n even): remove a star forest ``F`` that makes every
  degree class ``V_i(G - E(F))`` with ``i >= 2`` even, split each such class
  in half, peel an ``(i-1)``-factor ``B_i`` off the bipartite graph between the
  halves, and color what is left with color 1.  Star rays and factor
  matchings use colors ``2..i``; at most ``k`` colors overall.
* ``even_odd`` (k even, n odd): color ``G - u`` as above for a suitable
  vertex ``u`` and give most edges at ``u`` a fresh color ``k + 1``.
* ``odd`` (k odd): like ``even_even`` but the star forest may need one
  extended star (``k + i - 1`` rays) or a twin pair of 3-stars to fix the
  parity of ``V_2``.

Isolated vertices never take part: they sit in class ``k`` but are excluded
from every parity count, split and factor, and the even/odd case is chosen
by the number of non-isolated vertices.

Also here: the closed formula for forests and the explicit ``K_{1,k,k}``
coloring with ``k + 2`` colors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .graph import (
    Edge,
    EdgeColoring,
    Graph,
    InputError,
    complete_multipartite,
    degree_classes,
    is_forest,
    normalize_edge,
    remove_edges,
    remove_vertex,
    residue_class,
    verify_coloring,
)
from .matching import (
    BipartiteInstance,
    FactorDecomposition,
    FactorFailure,
    SplitResult,
    extract_r_factor,
    ranked_splits,
)
from .random_model import derive_seed

FAILURE_STAGES = ("star_selection", "split", "factor", "precondition_u", "verify")


@dataclass
class Star:
    center: int
    leaves: Tuple[int, ...]
    class_index: int
    variant: str = "plain"  # or "extended"

    def edges(self) -> List[Edge]:
        return [normalize_edge(self.center, x) for x in self.leaves]


@dataclass
class StarPlan:
    """Which stars to place.

    ``classes`` are the classes needing a plain star; ``extended`` names one of
    them to get ``k + i - 1`` rays instead; ``twin`` asks for the pair
    ``S_3`` (2 rays) and ``S_3'`` (``k + 2`` rays).
    """

    classes: Tuple[int, ...] = ()
    extended: Optional[int] = None
    twin: bool = False

    def requests(self, k: int) -> List[Tuple[int, int, str]]:
        out = []
        for i in sorted(set(self.classes), reverse=True):
            if i == self.extended:
                out.append((i, k + i - 1, "extended"))
            else:
                out.append((i, i - 1, "plain"))
        if self.twin:
            out.append((3, k + 2, "extended"))
            out.append((3, 2, "plain"))
        out.sort(key=lambda r: (-r[0], -r[1]))
        return out


@dataclass
class StarForest:
    stars: List[Star] = field(default_factory=list)

    def edges(self) -> List[Edge]:
        return [e for s in self.stars for e in s.edges()]

    def vertices(self) -> Set[int]:
        out: Set[int] = set()
        for s in self.stars:
            out.add(s.center)
            out.update(s.leaves)
        return out


@dataclass
class Failure:
    stage: str
    reason: str


@dataclass
class ConstructionTrace:
    case_tag: str
    forest: StarForest = field(default_factory=StarForest)
    splits: Dict[int, SplitResult] = field(default_factory=dict)
    factors: Dict[int, FactorDecomposition] = field(default_factory=dict)
    removed_vertex: Optional[int] = None
    class_sizes: Tuple[int, ...] = ()
    class_sizes_after_forest: Tuple[int, ...] = ()
    stage_log: List[Tuple[str, str]] = field(default_factory=list)
    inner: Optional["ConstructionTrace"] = None

    def log(self, stage: str, outcome: str) -> None:
        self.stage_log.append((stage, outcome))

    def to_dict(self) -> Dict:
        return {
            "case": self.case_tag,
            "class_sizes": list(self.class_sizes),
            "class_sizes_after_forest": list(self.class_sizes_after_forest),
            "stars": [
                {"center": s.center, "leaves": list(s.leaves), "class": s.class_index, "variant": s.variant}
                for s in self.forest.stars
            ],
            "splits": {
                str(i): {
                    "U": list(s.U),
                    "W": list(s.W),
                    "min_cross_degree": s.achieved_min_degree,
                    "target": s.target,
                    "target_met": s.target_met,
                }
                for i, s in sorted(self.splits.items())
            },
            "factors": {
                str(i): {"r": f.r, "repaired": f.repaired} for i, f in sorted(self.factors.items())
            },
            "removed_vertex": self.removed_vertex,
            "stages": [list(x) for x in self.stage_log],
            "inner": None if self.inner is None else self.inner.to_dict(),
        }


@dataclass
class ColoringResult:
    coloring: Optional[EdgeColoring]
    trace: ConstructionTrace
    failure: Optional[Failure] = None

    @property
    def success(self) -> bool:
        return self.failure is None

    @property
    def colors_used(self) -> Optional[int]:
        return None if self.coloring is None else self.coloring.colors_used

    @property
    def case_tag(self) -> str:
        return self.trace.case_tag

    def budget(self, k: int) -> int:
        return k + 1 if self.trace.case_tag == "even_odd" else k


class _StageFailure(Exception):
    def __init__(self, stage: str, reason: str):
        super().__init__(f"{stage}: {reason}")
        self.stage = stage
        self.reason = reason


# ---------------------------------------------------------------------------
# Stars
# ---------------------------------------------------------------------------


def _active_classes(G: Graph, k: int) -> List[Set[int]]:
    """Degree classes 1..k (index 0 unused) without isolated vertices."""
    P = degree_classes(G, k)
    out: List[Set[int]] = [set()]
    for i in range(1, k + 1):
        out.append({v for v in P[i] if G.degree(v) > 0})
    return out


def select_star_forest(G: Graph, k: int, plan: StarPlan) -> Optional[StarForest]:
    """Vertex-disjoint stars centred in ``V_i`` with leaves in ``V_2``.

    Requests are placed largest class first; centres are tried by descending
    number of still-free ``V_2`` neighbours.  If a later request cannot be
    placed, the previous choice is revisited once per alternative centre
    before giving up.  Returns ``None`` when no system is found.
    """
    for i in plan.classes:
        if not 3 <= i <= k:
            raise InputError(f"star class {i} outside 3..{k}")
    if plan.extended is not None and plan.extended not in plan.classes:
        raise InputError("extended star must belong to a requested class")
    if plan.twin and k < 3:
        raise InputError("twin stars need k >= 3")
    classes = _active_classes(G, k)
    v2 = classes[2]
    requests = plan.requests(k)

    def place(idx: int, used: Set[int], depth_budget: List[int]) -> Optional[List[Star]]:
        if idx == len(requests):
            return []
        i, rays, variant = requests[idx]
        candidates = []
        for c in classes[i]:
            if c in used:
                continue
            free = sorted(x for x in G.neighbors(c) if x in v2 and x not in used)
            if len(free) >= rays:
                candidates.append((-len(free), c, free))
        candidates.sort()
        for _, c, free in candidates:
            leaves = tuple(free[:rays])
            rest = place(idx + 1, used | {c, *leaves}, depth_budget)
            if rest is not None:
                return [Star(c, leaves, i, variant)] + rest
            if depth_budget[0] <= 0:
                break
            depth_budget[0] -= 1
        return None

    # one level of backtracking per request, shared budget bounds the search
    stars = place(0, set(), [max(len(requests), 1) * 4])
    if stars is None:
        return None
    return StarForest(stars)


def color_star_forest(F: StarForest, k: int) -> EdgeColoring:
    """Colors for star rays: plain ``S_i`` gets ``2..i``; extended ``S_i'`` gets
    ``2..i-1`` once each and color ``i`` on the remaining ``k + 1`` rays."""
    assignment: Dict[Edge, int] = {}
    for s in F.stars:
        i = s.class_index
        if s.variant == "plain":
            if len(s.leaves) != i - 1:
                raise InputError(f"plain star of class {i} needs {i - 1} rays, has {len(s.leaves)}")
            colors = list(range(2, i + 1))
        elif s.variant == "extended":
            if len(s.leaves) != k + i - 1:
                raise InputError(f"extended star of class {i} needs {k + i - 1} rays, has {len(s.leaves)}")
            colors = list(range(2, i)) + [i] * (k + 1)
        else:
            raise InputError(f"unknown star variant {s.variant!r}")
        for x, col in zip(s.leaves, colors):
            assignment[normalize_edge(s.center, x)] = col
    c = max(assignment.values(), default=0)
    return EdgeColoring(k, max(c, 1), assignment, partial=True)


def _check_forest(G: Graph, k: int, F: StarForest) -> None:
    classes = _active_classes(G, k)
    seen: Set[int] = set()
    for s in F.stars:
        assert s.center in classes[s.class_index], "star centre outside its class"
        assert all(x in classes[2] for x in s.leaves), "star leaf outside V_2"
        assert all(G.has_edge(s.center, x) for x in s.leaves), "star ray is not an edge"
        vs = {s.center, *s.leaves}
        assert not (vs & seen) and len(vs) == len(s.leaves) + 1, "stars overlap"
        seen |= vs


# ---------------------------------------------------------------------------
# Cases
# ---------------------------------------------------------------------------


def _class_sizes(classes: List[Set[int]]) -> Tuple[int, ...]:
    return tuple(len(c) for c in classes[1:])


def _split_and_factor(Gp: Graph, S: Set[int], i: int, seed: int, retries: int, candidates: int, pairing_rounds: int):
    """Try the best splits of ``S`` until one carries an ``(i-1)``-factor.

    Round 0 uses the natural pairing; later rounds reshuffle the pairing.
    Returns ``(instance, factor, split, stage, reason)`` with ``factor`` None
    on failure.
    """
    best_split = None
    stage, reason = "split", ""
    for rnd in range(pairing_rounds):
        pairing_seed = None if rnd == 0 else derive_seed(seed, "pairing", rnd)
        splits = ranked_splits(Gp, S, retries, seed, pairing_seed)
        if best_split is None or splits[0].achieved_min_degree > best_split.achieved_min_degree:
            best_split = splits[0]
        if splits[0].achieved_min_degree < i - 1:
            if stage == "split":
                reason = f"best split has min cross degree {best_split.achieved_min_degree} < {i - 1}"
            continue
        tried = set()
        for cand in splits:
            if cand.achieved_min_degree < i - 1 or len(tried) >= candidates:
                break
            if cand.U in tried:
                continue
            tried.add(cand.U)
            B = BipartiteInstance.from_graph(Gp, cand.U, cand.W)
            result = extract_r_factor(B, i - 1)
            if isinstance(result, FactorDecomposition):
                return B, result, cand, None, "ok"
        stage = "factor"
        reason = f"no {i - 1}-factor ({len(tried)} splits tried in round {rnd}, iteration {result.iteration})"
    return None, None, best_split, stage, reason


def _factor_phase(
    Gp: Graph,
    k: int,
    seed: int,
    trace: ConstructionTrace,
    split_retries: int,
    split_candidates: int,
    pairing_rounds: int,
) -> Dict[Edge, int]:
    """Split every class ``V_i(G')``, ``i >= 2``, and peel an ``(i-1)``-factor."""
    classes = _active_classes(Gp, k)
    trace.class_sizes_after_forest = _class_sizes(classes)
    for i in range(2, k + 1):
        if len(classes[i]) % 2:
            raise _StageFailure("star_selection", f"class {i} still has odd size {len(classes[i])} after forest")
    assignment: Dict[Edge, int] = {}
    for i in range(2, k + 1):
        S = classes[i]
        if not S:
            trace.log(f"factor_{i}", "skipped: empty class")
            continue
        B, factor, split, stage, reason = _split_and_factor(
            Gp, S, i, derive_seed(seed, "split", i), split_retries, split_candidates, pairing_rounds
        )
        trace.splits[i] = split
        if factor is None:
            trace.log(f"{stage}_{i}", reason)
            raise _StageFailure(stage, f"class {i}: {reason}")
        trace.factors[i] = factor
        trace.log(f"split_{i}", f"min cross degree {split.achieved_min_degree} (target {split.target})")
        trace.log(f"factor_{i}", "ok" + (" (repaired)" if factor.repaired else ""))
        for color, M in zip(range(2, i + 1), factor.host_matchings(B)):
            for e in M:
                assignment[e] = color
    return assignment


def _assemble(G: Graph, k: int, star_col: Dict[Edge, int], factor_col: Dict[Edge, int]) -> EdgeColoring:
    assignment = dict(star_col)
    assignment.update(factor_col)
    for e in G.edges:
        assignment.setdefault(e, 1)
    return EdgeColoring(k, max(assignment.values(), default=1), assignment)


def _run_forest_and_factors(
    G: Graph,
    k: int,
    plan_fn,
    seed: int,
    trace: ConstructionTrace,
    split_retries: int,
    split_candidates: int,
    pairing_rounds: int,
) -> EdgeColoring:
    classes = _active_classes(G, k)
    trace.class_sizes = _class_sizes(classes)
    forest = plan_fn(classes)
    trace.forest = forest
    _check_forest(G, k, forest)
    trace.log("star_selection", f"{len(forest.stars)} stars")
    Gp = remove_edges(G, forest.edges())
    star_col = color_star_forest(forest, k).assignment
    factor_col = _factor_phase(Gp, k, seed, trace, split_retries, split_candidates, pairing_rounds)
    return _assemble(G, k, star_col, factor_col)


def _even_even(G: Graph, k: int, seed: int, split_retries: int, split_candidates: int, pairing_rounds: int) -> Tuple[EdgeColoring, ConstructionTrace]:
    trace = ConstructionTrace("even_even")

    def plan_fn(classes):
        odd = tuple(i for i in range(3, k + 1) if len(classes[i]) % 2)
        forest = select_star_forest(G, k, StarPlan(odd))
        if forest is None:
            raise _StageFailure("star_selection", f"no disjoint stars for classes {list(odd)}")
        return forest

    try:
        col = _run_forest_and_factors(G, k, plan_fn, seed, trace, split_retries, split_candidates, pairing_rounds)
    except _StageFailure as exc:
        exc.trace = trace
        raise
    return col, trace


def _odd(G: Graph, k: int, seed: int, split_retries: int, split_candidates: int, pairing_rounds: int) -> Tuple[EdgeColoring, ConstructionTrace]:
    trace = ConstructionTrace("odd")

    def plan_fn(classes):
        odd = tuple(i for i in range(3, k + 1) if len(classes[i]) % 2)
        n2 = len(classes[2])
        plain_leaves = sum(i - 1 for i in odd)
        if (n2 - plain_leaves) % 2 == 0:
            plans = [StarPlan(odd)]
        elif odd:
            # any class may take the extended star; try them largest first
            plans = [StarPlan(odd, extended=i) for i in sorted(odd, reverse=True)]
        else:
            if len(classes[3]) < 2:
                raise _StageFailure("star_selection", "twin-star fix needs two centres in V_3")
            plans = [StarPlan((), twin=True)]
        for plan in plans:
            forest = select_star_forest(G, k, plan)
            if forest is not None:
                return forest
        raise _StageFailure("star_selection", f"no disjoint star system for plan {plans[0]}")

    try:
        col = _run_forest_and_factors(G, k, plan_fn, seed, trace, split_retries, split_candidates, pairing_rounds)
    except _StageFailure as exc:
        exc.trace = trace
        raise
    return col, trace


def _even_odd(G: Graph, k: int, seed: int, split_retries: int, split_candidates: int, pairing_rounds: int) -> Tuple[EdgeColoring, ConstructionTrace]:
    trace = ConstructionTrace("even_odd")
    inner_failure = None
    for u in range(G.n):
        if G.degree(u) == 0:
            continue
        H, old_ids = remove_vertex(G, u)
        if len(H.non_isolated()) % 2:
            continue
        v1 = _active_classes(H, k)[1]
        nb_v1 = sorted(old_ids[x] for x in v1 if old_ids[x] in G.neighbors(u))
        if len(nb_v1) < k - 1:
            continue
        trace.removed_vertex = u
        trace.log("precondition_u", f"u={u} with {len(nb_v1)} neighbours in V_1(H)")
        try:
            inner_col, inner_trace = _even_even(H, k, derive_seed(seed, "inner", u), split_retries, split_candidates, pairing_rounds)
        except _StageFailure as exc:
            trace.inner = getattr(exc, "trace", None)
            exc.trace = trace
            raise
        trace.inner = inner_trace
        assignment = {normalize_edge(old_ids[a], old_ids[b]): c for (a, b), c in inner_col.assignment.items()}
        d = residue_class(G.degree(u), k)
        for color, x in zip(range(2, d + 1), nb_v1):
            assignment[normalize_edge(u, x)] = color
        for x in G.neighbors(u):
            assignment.setdefault(normalize_edge(u, x), k + 1)
        trace.log("color_u", f"d={d}: colors 2..{d} once, rest color {k + 1}")
        return EdgeColoring(k, max(assignment.values()), assignment), trace
    exc = _StageFailure("precondition_u", f"no vertex with >= {k - 1} neighbours in V_1(G-u) and even G-u")
    exc.trace = trace
    raise exc


def construct_coloring(
    G: Graph,
    k: int,
    seed: int = 0,
    split_retries: int = 100,
    split_candidates: int = 10,
    pairing_rounds: int = 4,
    check: bool = True,
) -> ColoringResult:
    """Color ``G`` with at most ``k`` colors (``k + 1`` for even k, odd order).

    Never raises on construction dead ends: the result carries a
    :class:`Failure` naming the stage instead.  Colors in the returned
    coloring are compacted to ``1..colors_used`` with color 1 kept as the
    background color.
    """
    if k < 2:
        raise InputError(f"modulus k must be at least 2, got {k}")
    n_active = len(G.non_isolated())
    if k % 2:
        runner = _odd
    elif n_active % 2 == 0:
        runner = _even_even
    else:
        runner = _even_odd
    try:
        col, trace = runner(G, k, seed, split_retries, split_candidates, pairing_rounds)
    except _StageFailure as exc:
        trace = getattr(exc, "trace", None) or ConstructionTrace(runner.__name__.lstrip("_"))
        return ColoringResult(None, trace, Failure(exc.stage, exc.reason))
    col = col.compact()
    if check:
        report = verify_coloring(G, col)
        if not report.valid:
            trace.log("verify", f"{len(report.violations)} violations")
            return ColoringResult(None, trace, Failure("verify", f"violations: {report.violations[:5]}"))
    trace.log("verify", "ok" if check else "skipped")
    return ColoringResult(col, trace)


def case_even_even(G: Graph, k: int, seed: int = 0, **kw) -> ColoringResult:
    if k % 2 or len(G.non_isolated()) % 2:
        raise InputError("even_even case needs k even and an even number of non-isolated vertices")
    return construct_coloring(G, k, seed, **kw)


def case_even_odd(G: Graph, k: int, seed: int = 0, **kw) -> ColoringResult:
    if k % 2 or len(G.non_isolated()) % 2 == 0:
        raise InputError("even_odd case needs k even and an odd number of non-isolated vertices")
    return construct_coloring(G, k, seed, **kw)


def case_odd(G: Graph, k: int, seed: int = 0, **kw) -> ColoringResult:
    if k % 2 == 0:
        raise InputError("odd case needs k odd")
    return construct_coloring(G, k, seed, **kw)


# ---------------------------------------------------------------------------
# Closed forms
# ---------------------------------------------------------------------------


def forest_chi_value(G: Graph, k: int) -> int:
    """Mod-k chromatic index of a forest: the largest class index present.

    Only non-isolated vertices count; an edgeless forest gets 1.
    """
    if k < 2:
        raise InputError(f"modulus k must be at least 2, got {k}")
    if not is_forest(G):
        raise InputError("graph contains a cycle")
    return max((residue_class(d, k) for d in G.degrees() if d > 0), default=1)


def k1kk_graph(k: int) -> Graph:
    """``K_{1,k,k}``: apex 0, side A = ``1..k``, side B = ``k+1..2k``."""
    if k < 2:
        raise InputError(f"k must be at least 2, got {k}")
    return complete_multipartite(1, k, k)


def k1kk_coloring(k: int) -> EdgeColoring:
    """``k + 2`` colors on ``K_{1,k,k}`` from a cyclic coloring of ``K_{k+1,k+1}``."""
    G = k1kk_graph(k)
    a = lambda i: i  # noqa: E731
    b = lambda j: k + j  # noqa: E731
    color = lambda i, j: (i + j) % (k + 1) + 1  # noqa: E731
    assignment: Dict[Edge, int] = {}
    for i in range(1, k + 1):
        for j in range(1, k + 1):
            assignment[normalize_edge(a(i), b(j))] = color(i, j)
    for i in range(1, k + 1):
        assignment[(0, a(i))] = k + 2
    assignment[(0, b(1))] = k + 2
    for j in range(2, k + 1):
        # colour that b_j lost with the deleted vertex a_{k+1}
        assignment[(0, b(j))] = color(k + 1, j)
    col = EdgeColoring(k, k + 2, assignment)
    assert set(col.assignment) == set(G.edges)
    return col
