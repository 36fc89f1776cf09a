"""scikit-learn style wrappers around the coloring engine and exact solver.

Both estimators follow the usual contract: hyper-parameters are stored
unchanged in ``__init__`` (so ``get_params``/``set_params``/``clone`` work),
``fit`` takes a graph-like ``X`` and learned state ends in an underscore.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .engine import construct_coloring
from .exact import SearchBudget, chi_k_exact
from .graph import verify_coloring
from .validation import check_graph, check_modulus


class ColoringFailedError(RuntimeError):
    """The construction hit a dead end; ``stage`` says where."""

    def __init__(self, stage: str, reason: str):
        super().__init__(f"construction failed at {stage}: {reason}")
        self.stage = stage
        self.reason = reason


class ModKEdgeColorer(BaseEstimator):
    """Constructive mod-k edge coloring.

    Parameters
    ----------
    k : int
        Modulus; every color class must have all nonzero degrees congruent to
        1 mod ``k``.
    random_state : int
        Seed for the randomized balanced splits.
    split_retries, split_candidates, pairing_rounds : int
        Search effort of the split/factor phase.

    Attributes
    ----------
    edges_ : ndarray of shape (m, 2)
        Edges of the fitted graph in sorted order.
    colors_ : ndarray of shape (m,) or None
        Color of each edge in ``edges_``; ``None`` when the construction failed.
    n_colors_ : int or None
    case_ : str
        Which parity case ran (``even_even``, ``even_odd`` or ``odd``).
    failure_ : tuple (stage, reason) or None
    result_ : ColoringResult
    """

    def __init__(self, k=2, random_state=0, split_retries=100, split_candidates=10, pairing_rounds=4):
        self.k = k
        self.random_state = random_state
        self.split_retries = split_retries
        self.split_candidates = split_candidates
        self.pairing_rounds = pairing_rounds

    def fit(self, X, y=None):
        G = check_graph(X)
        k = check_modulus(self.k)
        res = construct_coloring(
            G,
            k,
            seed=int(self.random_state or 0),
            split_retries=self.split_retries,
            split_candidates=self.split_candidates,
            pairing_rounds=self.pairing_rounds,
        )
        self.graph_ = G
        self.result_ = res
        self.case_ = res.case_tag
        self.edges_ = np.array(G.sorted_edges(), dtype=np.int64).reshape(-1, 2)
        if res.success:
            self.colors_ = np.array([res.coloring[e] for e in G.sorted_edges()], dtype=np.int64)
            self.n_colors_ = res.colors_used
            self.failure_ = None
        else:
            self.colors_ = None
            self.n_colors_ = None
            self.failure_ = (res.failure.stage, res.failure.reason)
        return self

    def predict(self, X=None):
        """Edge colors aligned with ``edges_``; raises if the construction failed."""
        check_is_fitted(self, "result_")
        if X is not None and check_graph(X) != self.graph_:
            raise ValueError("predict only labels the graph seen in fit")
        if self.colors_ is None:
            raise ColoringFailedError(*self.failure_)
        return self.colors_

    def fit_predict(self, X, y=None):
        return self.fit(X).predict()

    def score(self, X=None, y=None):
        """1.0 for a valid coloring of the fitted graph, else 0.0."""
        check_is_fitted(self, "result_")
        if not self.result_.success:
            return 0.0
        return float(verify_coloring(self.graph_, self.result_.coloring).valid)


class ExactModKChromaticIndex(BaseEstimator):
    """Exact mod-k chromatic index of a small graph by pruned backtracking.

    Attributes
    ----------
    chi_ : int or None
        The exact value, or ``None`` if the budget ran out.
    interval_ : tuple (lower, upper)
    witness_ : EdgeColoring or None
    certificates_ : list of LowerBoundCertificate
    status_ : {"solved", "unresolved"}
    """

    def __init__(self, k=2, max_colors=None, node_limit=10**8, time_limit=None, max_cycle_length=8):
        self.k = k
        self.max_colors = max_colors
        self.node_limit = node_limit
        self.time_limit = time_limit
        self.max_cycle_length = max_cycle_length

    def fit(self, X, y=None):
        G = check_graph(X)
        budget = SearchBudget(self.max_colors, self.node_limit, self.time_limit)
        res = chi_k_exact(G, check_modulus(self.k), budget, self.max_cycle_length)
        self.result_ = res
        self.chi_ = res.chi
        self.interval_ = res.interval
        self.witness_ = res.witness
        self.certificates_ = res.certificates
        self.status_ = res.status
        self.n_nodes_ = res.nodes
        return self
