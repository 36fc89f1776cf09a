"""Seeded G(n, p) sampling and numerical checks of its typical structure.

Covers the binomial-mod-k distribution (an exact dynamic program, the
roots-of-unity closed form, and the exponential deviation bound), weak
bijumbledness, degree-class balance, class minimum degree and class
connectivity.
"""

from __future__ import annotations

import cmath
import hashlib
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .graph import Graph, InputError, components, degree_classes

#: Constant A in the slack A*sqrt(pn) expected of G(n, p).
JUMBLED_A = math.e**2 * math.sqrt(6)

IMAG_TOLERANCE = 1e-9
EXHAUSTIVE_MAX_N = 16


class NumericalInstabilityError(ArithmeticError):
    """The roots-of-unity sum kept an imaginary part it should not have."""


def derive_seed(master: int, *tags) -> int:
    """64-bit seed for the stream identified by ``(master, *tags)``."""
    h = hashlib.blake2b(digest_size=8)
    h.update(str(int(master)).encode())
    for tag in tags:
        h.update(b"\x1f")
        h.update(str(tag).encode())
    return int.from_bytes(h.digest(), "little")


def rng_for(master: int, *tags) -> np.random.Generator:
    return np.random.default_rng(derive_seed(master, *tags))


@dataclass(frozen=True)
class GnpParams:
    n: int
    p: float
    seed: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise InputError(f"n must be non-negative, got {self.n}")
        if not 0.0 <= self.p <= 1.0:
            raise InputError(f"p must lie in [0, 1], got {self.p}")


def sample_gnp(params: GnpParams) -> Graph:
    """Draw G(n, p); the graph is a pure function of ``(n, p, seed)``."""
    n, p = params.n, params.p
    if n < 2:
        return Graph(n)
    rng = rng_for(params.seed, "gnp")
    rows, cols = np.triu_indices(n, 1)
    keep = rng.random(rows.size) < p
    return Graph(n, zip(rows[keep].tolist(), cols[keep].tolist()))


def gnp(n: int, p: float, seed: int = 0) -> Graph:
    return sample_gnp(GnpParams(n, p, seed))


def adjacency_matrix(G: Graph, dtype=np.int8) -> np.ndarray:
    A = np.zeros((G.n, G.n), dtype=dtype)
    if G.m:
        e = np.array(G.sorted_edges())
        A[e[:, 0], e[:, 1]] = 1
        A[e[:, 1], e[:, 0]] = 1
    return A


# ---------------------------------------------------------------------------
# Binomial distribution modulo k
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BinModKQuery:
    n: int
    p: float
    k: int
    t: int

    def __post_init__(self):
        if self.n < 0:
            raise InputError("n must be non-negative")
        if not 0 <= self.p <= 1:
            raise InputError("p must lie in [0, 1]")
        if self.k < 2:
            raise InputError("k must be at least 2")
        if not 0 <= self.t < self.k:
            raise InputError(f"target residue must satisfy 0 <= t < k, got t={self.t}")


def _as_small_fraction(p, max_denominator: int = 10**6) -> Optional[Fraction]:
    if isinstance(p, Fraction):
        return p
    if isinstance(p, int):
        return Fraction(p)
    frac = Fraction(p).limit_denominator(max_denominator)
    return frac if float(frac) == float(p) else None


def _residue_counts(n: int, a: int, b: int, k: int) -> List[int]:
    """``b**n * P(Bin(n, a/b) = r mod k)`` for every residue, as integers."""
    counts = [0] * k
    counts[0] = 1
    fail = b - a
    for _ in range(n):
        counts = [fail * counts[r] + a * counts[r - 1] for r in range(k)]
    return counts


def binom_mod_k_distribution(n: int, p, k: int, exact: Optional[bool] = None) -> List[float]:
    """``P(Bin(n, p) = t mod k)`` for ``t = 0..k-1`` by dynamic programming.

    Rational ``p`` with a small denominator is handled in exact integer
    arithmetic; otherwise (or with ``exact=False``) a float recurrence is used.
    """
    frac = _as_small_fraction(p) if exact is not False else None
    if exact and frac is None:
        raise InputError(f"p={p!r} is not a small-denominator rational")
    if frac is not None:
        counts = _residue_counts(n, frac.numerator, frac.denominator, k)
        total = frac.denominator**n
        return [float(Fraction(c, total)) for c in counts]
    p = float(p)
    dist = np.zeros(k)
    dist[0] = 1.0
    for _ in range(n):
        dist = (1 - p) * dist + p * np.roll(dist, 1)
    return dist.tolist()


def binom_mod_k_exact(q: BinModKQuery) -> float:
    return binom_mod_k_distribution(q.n, q.p, q.k)[q.t]


def binom_mod_k_roots(q: BinModKQuery) -> float:
    """Roots-of-unity filter: ``(1/k) sum_j w^{-jt} (1 + (w^j - 1) p)^n``."""
    total = 0j
    for j in range(q.k):
        w = cmath.exp(2j * math.pi * j / q.k)
        total += w ** (-q.t) * (1 + (w - 1) * q.p) ** q.n
    value = total / q.k
    if abs(value.imag) > IMAG_TOLERANCE:
        raise NumericalInstabilityError(
            f"imaginary residue {value.imag:.3e} for n={q.n}, p={q.p}, k={q.k}, t={q.t}"
        )
    return value.real


def a_k(k: int) -> float:
    """Decay constant ``1 - cos(2 pi / k)`` of the worst nontrivial root."""
    return 1.0 - math.cos(2 * math.pi / k)


def binom_mod_k_bound(q: BinModKQuery) -> float:
    return math.exp(-a_k(q.k) * q.n * q.p * (1 - q.p))


@dataclass
class BinomSweepReport:
    max_roots_vs_dp: float
    worst_roots_case: Tuple[int, float, int, int]
    max_bound_excess: float
    worst_bound_case: Tuple[int, float, int, int]
    max_normalization_error: float
    cases: int

    @property
    def oracle_ok(self) -> bool:
        return self.max_roots_vs_dp <= 1e-10

    @property
    def bound_ok(self) -> bool:
        return self.max_bound_excess <= 0.0


def binom_mod_k_sweep(
    n_max: int = 500,
    ps: Sequence[float] = tuple(i / 10 for i in range(1, 10)),
    ks: Sequence[int] = range(2, 8),
) -> BinomSweepReport:
    """Compare DP, closed form and bound for every ``n <= n_max``, ``p``, ``k``, ``t``.

    The DP is run incrementally in exact integers, so every ``n`` costs one
    update step.  The closed form is evaluated independently per ``n``.
    """
    worst_roots, worst_roots_case = 0.0, (0, 0.0, 0, 0)
    worst_excess, worst_bound_case = -math.inf, (0, 0.0, 0, 0)
    worst_norm = 0.0
    cases = 0
    ns = np.arange(1, n_max + 1)
    for p in ps:
        frac = _as_small_fraction(p)
        a, b = frac.numerator, frac.denominator
        for k in ks:
            roots = np.exp(2j * np.pi * np.arange(k) / k)
            # bases[j]**n for all n at once
            powers = (1 + (roots - 1) * p)[None, :] ** ns[:, None]
            counts = [1] + [0] * (k - 1)
            total = 1
            bound = np.exp(-a_k(k) * ns * p * (1 - p))
            for n in ns:
                counts = [(b - a) * counts[r] + a * counts[r - 1] for r in range(k)]
                total *= b
                dp = [c / total for c in counts]
                worst_norm = max(worst_norm, abs(math.fsum(dp) - 1.0))
                for t in range(k):
                    closed = (powers[n - 1] * roots ** (-t)).sum() / k
                    if abs(closed.imag) > IMAG_TOLERANCE:
                        raise NumericalInstabilityError(f"n={n}, p={p}, k={k}, t={t}")
                    diff = abs(closed.real - dp[t])
                    if diff > worst_roots:
                        worst_roots, worst_roots_case = diff, (int(n), p, k, t)
                    excess = abs(dp[t] - 1 / k) - bound[n - 1]
                    if excess > worst_excess:
                        worst_excess, worst_bound_case = excess, (int(n), p, k, t)
                    cases += 1
    return BinomSweepReport(
        worst_roots, worst_roots_case, worst_excess, worst_bound_case, worst_norm, cases
    )


# ---------------------------------------------------------------------------
# Bijumbledness
# ---------------------------------------------------------------------------


@dataclass
class BijumbledReport:
    p: float
    alpha: float
    mode: str
    weak: bool
    passed: bool
    definitive: bool
    worst_pair: Optional[Tuple[Tuple[int, ...], Tuple[int, ...], float]]
    samples_checked: int
    single_set_passed: bool
    worst_single_set: Optional[Tuple[Tuple[int, ...], float]]
    edge_existence_threshold: Optional[int] = None
    empty_large_pairs: int = 0
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict:
        d = dict(self.__dict__)
        if self.worst_pair is not None:
            U, W, dev = self.worst_pair
            d["worst_pair"] = {"U": list(U), "W": list(W), "deviation": dev}
        if self.worst_single_set is not None:
            S, dev = self.worst_single_set
            d["worst_single_set"] = {"U": list(S), "deviation": dev}
        return d


def _mask_to_tuple(mask: int) -> Tuple[int, ...]:
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


def _internal_edge_counts(G: Graph) -> np.ndarray:
    """``e(G[S])`` for every subset mask ``S`` of the vertex set."""
    n = G.n
    adj_mask = np.array([sum(1 << w for w in G.neighbors(v)) for v in range(n)], dtype=np.int64)
    e = np.zeros(1, dtype=np.int32)
    for v in range(n):
        lower = np.arange(1 << v, dtype=np.int64)
        added = np.bitwise_count(lower & adj_mask[v]).astype(np.int32)
        e = np.concatenate([e, e + added])
    return e


def _check_bijumbled_exhaustive(G: Graph, p: float, alpha: float, weak: bool):
    n = G.n
    full = (1 << n) - 1
    e_in = _internal_edge_counts(G)
    size = np.bitwise_count(np.arange(1 << n, dtype=np.int64)).astype(np.int64)
    worst_dev, worst = -math.inf, None
    checked = 0
    for U in range(1, 1 << n):
        su = int(size[U])
        comp = full & ~U
        bits = [b for b in range(n) if comp >> b & 1]
        m = len(bits)
        if m == 0:
            continue
        # every submask W of comp, built by depositing the bits of 0..2^m-1
        x = np.arange(1 << m, dtype=np.int64)
        W = np.zeros(1 << m, dtype=np.int64)
        for i, b in enumerate(bits):
            W |= ((x >> i) & 1) << b
        W = W[1:]
        sw = size[W]
        if weak:
            ok = (sw >= su) & (sw <= p * n * su)
            W, sw = W[ok], sw[ok]
            if W.size == 0:
                continue
        else:
            # symmetric condition: each unordered pair once
            W = W[W > U]
            sw = size[W]
            if W.size == 0:
                continue
        checked += W.size
        e_uw = e_in[U | W] - e_in[U] - e_in[W]
        prod = su * sw
        dev = np.abs(e_uw - p * prod) - alpha * np.sqrt(prod)
        j = int(np.argmax(dev))
        if dev[j] > worst_dev:
            worst_dev, worst = float(dev[j]), (U, int(W[j]))
    single_dev = np.abs(e_in - p * size * (size - 1) / 2) - alpha * size
    j = int(np.argmax(single_dev))
    worst_single = (_mask_to_tuple(j), float(single_dev[j]))
    pair = None if worst is None else (_mask_to_tuple(worst[0]), _mask_to_tuple(worst[1]), worst_dev)
    return pair, worst_single, checked


def _check_bijumbled_sampled(G: Graph, p: float, alpha: float, weak: bool, samples: int, seed: int, t_edge):
    n = G.n
    rng = rng_for(seed, "bijumbled")
    A = adjacency_matrix(G, dtype=np.float32)
    worst_dev, worst_pair = -math.inf, None
    single_worst = (-math.inf, None)
    empty_large = 0
    checked = 0

    def consider(XU: np.ndarray, XW: np.ndarray):
        nonlocal worst_dev, worst_pair, empty_large, checked
        su = XU.sum(axis=1)
        sw = XW.sum(axis=1)
        e_uw = np.einsum("ij,ij->i", XU @ A, XW)
        prod = su * sw
        dev = np.abs(e_uw - p * prod) - alpha * np.sqrt(prod)
        j = int(np.argmax(dev))
        if dev[j] > worst_dev:
            worst_dev = float(dev[j])
            worst_pair = (tuple(np.flatnonzero(XU[j]).tolist()), tuple(np.flatnonzero(XW[j]).tolist()))
        if t_edge is not None:
            empty_large += int(np.sum((np.minimum(su, sw) >= t_edge) & (e_uw == 0)))
        checked += XU.shape[0]

    # singleton vs neighbourhood pairs
    rows_u, rows_w = [], []
    for v in range(n):
        nb = G.neighbors(v)
        if not nb or (weak and len(nb) > p * n):
            continue
        xu = np.zeros(n, dtype=np.float32)
        xu[v] = 1
        xw = np.zeros(n, dtype=np.float32)
        xw[list(nb)] = 1
        rows_u.append(xu)
        rows_w.append(xw)
    if rows_u:
        consider(np.array(rows_u), np.array(rows_w))

    batch = 4096
    remaining = samples
    while remaining > 0 and n >= 2:
        b = min(batch, remaining)
        remaining -= b
        su = rng.integers(1, n // 2 + 1, size=b)
        if weak:
            hi = np.minimum(n - su, np.floor(p * n * su).astype(np.int64))
            lo = su
            valid = hi >= lo
            su, lo, hi = su[valid], lo[valid], hi[valid]
        else:
            lo, hi = np.ones_like(su), n - su
        sw = lo + (rng.random(su.size) * (hi - lo + 1)).astype(np.int64)
        ranks = np.argsort(rng.random((su.size, n)), axis=1).argsort(axis=1)
        XU = (ranks < su[:, None]).astype(np.float32)
        XW = ((ranks >= su[:, None]) & (ranks < (su + sw)[:, None])).astype(np.float32)
        if XU.shape[0]:
            consider(XU, XW)

        S = XU + XW
        s = S.sum(axis=1)
        e_in = np.einsum("ij,ij->i", S @ A, S) / 2
        sdev = np.abs(e_in - p * s * (s - 1) / 2) - alpha * s
        if sdev.size:
            j = int(np.argmax(sdev))
            if sdev[j] > single_worst[0]:
                single_worst = (float(sdev[j]), tuple(np.flatnonzero(S[j]).tolist()))
    pair = None if worst_pair is None else (worst_pair[0], worst_pair[1], worst_dev)
    single = None if single_worst[1] is None else (single_worst[1], single_worst[0])
    return pair, single, checked, empty_large


def edge_existence_threshold(n: int, p: float, A: float = JUMBLED_A) -> Optional[int]:
    """Smallest ``t`` with ``t**2 > A**2 n / p`` (``None`` when ``p == 0``)."""
    if p <= 0:
        return None
    return math.floor(math.sqrt(A * A * n / p)) + 1


def check_bijumbled(
    G: Graph,
    p: float,
    alpha: float,
    mode: str = "auto",
    sample_count: int = 10_000,
    seed: int = 0,
    weak: bool = True,
) -> BijumbledReport:
    """Test ``|e(U,W) - p|U||W|| <= alpha sqrt(|U||W|)`` over disjoint pairs.

    ``mode="exhaustive"`` scans every disjoint pair and is refused above 16
    vertices.  ``mode="sampled"`` checks ``sample_count`` seeded random pairs
    plus every (vertex, neighbourhood) pair; its verdict is evidence only and
    ``definitive`` stays ``False``.  The single-set form
    ``|e(G[U]) - p C(|U|,2)| <= alpha |U|`` is checked alongside.
    """
    if mode == "auto":
        mode = "exhaustive" if G.n <= EXHAUSTIVE_MAX_N else "sampled"
    if mode == "exhaustive":
        if G.n > EXHAUSTIVE_MAX_N:
            raise InputError(f"exhaustive bijumbledness is limited to n <= {EXHAUSTIVE_MAX_N}, got n={G.n}")
        pair, single, checked = _check_bijumbled_exhaustive(G, p, alpha, weak)
        empty = 0
        t_edge = None
    elif mode == "sampled":
        t_edge = edge_existence_threshold(G.n, p)
        pair, single, checked, empty = _check_bijumbled_sampled(G, p, alpha, weak, sample_count, seed, t_edge)
    else:
        raise InputError(f"unknown mode {mode!r}")
    passed = pair is None or pair[2] <= 1e-9
    single_ok = single is None or single[1] <= 1e-9
    notes = []
    if mode == "sampled":
        notes.append("sampled evidence only; not a proof of bijumbledness")
        if t_edge is not None and t_edge > G.n // 2:
            notes.append(f"edge-existence threshold t={t_edge} exceeds n/2; corollary vacuous at this n")
    return BijumbledReport(
        p=p,
        alpha=alpha,
        mode=mode,
        weak=weak,
        passed=passed,
        definitive=mode == "exhaustive",
        worst_pair=pair,
        samples_checked=checked,
        single_set_passed=single_ok,
        worst_single_set=single,
        edge_existence_threshold=t_edge,
        empty_large_pairs=empty,
        notes=notes,
    )


# ---------------------------------------------------------------------------
# Degree-class properties
# ---------------------------------------------------------------------------


def check_degree_class_balance(G: Graph, k: int) -> Dict[int, bool]:
    """Per class ``i``: does ``n/2k <= n_i <= 3n/2k`` hold?"""
    P = degree_classes(G, k)
    n = G.n
    return {i: n / (2 * k) <= P.size(i) <= 3 * n / (2 * k) for i in range(1, k + 1)}


@dataclass(frozen=True)
class MinDegreeReport:
    ok: bool
    threshold: float
    worst: Optional[Tuple[int, int, int]]  # (vertex, class, count)

    def __bool__(self) -> bool:
        return self.ok


def check_class_min_degree(G: Graph, k: int, p: float) -> MinDegreeReport:
    """Every vertex needs at least ``pn/3k`` neighbours inside every class."""
    if not 0 < p <= 1:
        raise InputError(f"p must lie in (0, 1], got {p}")
    P = degree_classes(G, k)
    threshold = p * G.n / (3 * k)
    worst = None
    for v in range(G.n):
        nb = G.neighbors(v)
        for i in range(1, k + 1):
            count = len(nb & P[i])
            if worst is None or count < worst[2]:
                worst = (v, i, count)
    ok = worst is not None and worst[2] >= threshold
    return MinDegreeReport(ok, threshold, worst)


def check_class_connectivity(G: Graph, k: int) -> Dict[int, bool]:
    """Per class ``i``: is ``G[V_i]`` connected?  Empty classes report ``False``."""
    P = degree_classes(G, k)
    return {i: bool(P[i]) and len(components(G, P[i])) == 1 for i in range(1, k + 1)}
