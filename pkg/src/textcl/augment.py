"""Contrastive view generation by edge dropping, plus symmetric
degree normalization of the adjacency.

Dropping is undirected: one Bernoulli draw per upper-triangle edge, applied
to both directions, so views stay symmetric. Self-loops are never dropped
(they carry each node's own signal and keep row sums strictly positive).
The input adjacency already has a unit diagonal, so normalization does not
add another identity on top of it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import ConfigError, DataError
from .graph import TextGraph


@dataclass
class AugmentedView:
    """One edge-dropped copy of the text graph adjacency."""

    adjacency: sp.csr_array
    drop_probability: float
    rng_seed: int


def _as_adjacency(graph) -> sp.csr_array:
    if isinstance(graph, TextGraph):
        return graph.adjacency
    if sp.issparse(graph):
        return sp.csr_array(graph)
    raise DataError(f"expected a TextGraph or sparse adjacency, got {type(graph)!r}")


def drop_edges(graph, p: float, seed: int) -> AugmentedView:
    """Remove each undirected off-diagonal edge independently with
    probability p. Surviving edges keep their original weights; the
    diagonal is intact. Deterministic for a fixed seed."""
    if not 0.0 <= p <= 1.0:
        raise ConfigError(f"drop probability must be in [0, 1], got {p}")
    adj = _as_adjacency(graph)
    n = adj.shape[0]
    upper = sp.triu(adj, k=1).tocoo()
    # Fixed edge order (row-major) so the Bernoulli draws are reproducible
    # regardless of how the input matrix was assembled.
    order = np.lexsort((upper.col, upper.row))
    rows, cols, data = upper.row[order], upper.col[order], upper.data[order]
    rng = np.random.default_rng(seed)
    keep = rng.random(len(data)) >= p

    kr, kc, kd = rows[keep], cols[keep], data[keep]
    diag = adj.diagonal()
    out = sp.csr_array(
        (
            np.concatenate([kd, kd, diag]),
            (
                np.concatenate([kr, kc, np.arange(n)]),
                np.concatenate([kc, kr, np.arange(n)]),
            ),
        ),
        shape=(n, n),
    )
    return AugmentedView(adjacency=out, drop_probability=p, rng_seed=seed)


def normalize_adjacency(adjacency) -> sp.csr_array:
    """Symmetric normalization A_ij / sqrt(deg_i * deg_j) with deg = row sum.

    Requires a symmetric, non-negative input with strictly positive
    diagonal; a zero row sum is an error (impossible with self-loops)."""
    adj = sp.csr_array(adjacency) if not isinstance(adjacency, sp.csr_array) else adjacency
    deg = np.asarray(adj.sum(axis=1)).ravel()
    if np.any(deg <= 0):
        bad = int(np.argmax(deg <= 0))
        raise DataError(f"node {bad} has non-positive degree {deg[bad]}")
    inv_sqrt = 1.0 / np.sqrt(deg)
    scale = sp.dia_array((inv_sqrt[np.newaxis, :], [0]), shape=adj.shape)
    return sp.csr_array(scale @ adj @ scale)
