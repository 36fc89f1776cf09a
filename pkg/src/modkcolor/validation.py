"""Input validation helpers: coerce graph-like inputs into :class:`Graph`."""

from __future__ import annotations

import numbers

import numpy as np

from .graph import Graph, InputError


def check_modulus(k) -> int:
    if isinstance(k, bool) or not isinstance(k, numbers.Integral):
        raise InputError(f"k must be an integer, got {k!r}")
    if k < 2:
        raise InputError(f"k must be at least 2, got {k}")
    return int(k)


def check_graph(X) -> Graph:
    """Accept a :class:`Graph`, an ``(n, edges)`` pair, a square 0/1 adjacency
    matrix (dense or scipy sparse) or a networkx graph.

    networkx nodes are relabelled ``0..n-1`` in sorted order.
    """
    if isinstance(X, Graph):
        return X
    if isinstance(X, tuple) and len(X) == 2 and isinstance(X[0], numbers.Integral):
        return Graph(int(X[0]), X[1])
    if hasattr(X, "nodes") and hasattr(X, "edges") and hasattr(X, "is_directed"):
        if X.is_directed() or X.is_multigraph():
            raise InputError("only simple undirected graphs are supported")
        nodes = sorted(X.nodes())
        index = {v: i for i, v in enumerate(nodes)}
        return Graph(len(nodes), [(index[u], index[v]) for u, v in X.edges()])
    if hasattr(X, "tocoo"):
        A = X.tocoo()
        if A.shape[0] != A.shape[1]:
            raise InputError(f"adjacency matrix must be square, got shape {A.shape}")
        pairs = [(int(i), int(j)) for i, j, w in zip(A.row, A.col, A.data) if w]
        _check_symmetric(pairs)
        return Graph(A.shape[0], [(i, j) for i, j in pairs if i < j] + [(i, i) for i, j in pairs if i == j])
    A = np.asarray(X)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InputError(f"expected a graph or a square adjacency matrix, got array of shape {A.shape}")
    if not np.isin(A, (0, 1)).all():
        raise InputError("adjacency matrix entries must be 0 or 1")
    if not (A == A.T).all():
        raise InputError("adjacency matrix must be symmetric")
    if np.diag(A).any():
        raise InputError("adjacency matrix has self-loops on the diagonal")
    rows, cols = np.nonzero(np.triu(A, 1))
    return Graph(A.shape[0], zip(rows.tolist(), cols.tolist()))


def _check_symmetric(pairs) -> None:
    s = set(pairs)
    if any((j, i) not in s for i, j in s):
        raise InputError("adjacency matrix must be symmetric")
