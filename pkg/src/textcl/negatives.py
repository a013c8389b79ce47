"""Cluster-refined negative sampling with distance-based self-correction.

For each anchor document the negative set is the union of (a) every
document outside the anchor's cluster and (b) the farthest d% of its
in-cluster companions by Euclidean distance. (b) re-admits likely true
negatives that clustering errors pulled into the anchor's cluster; d = 0
disables it, d = 100 together with a single cluster reproduces the vanilla
all-others negative set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cluster import ClusterAssignment
from .errors import ConfigError


@dataclass
class NegativeIndex:
    """Per-anchor sorted arrays of negative document ids."""

    negatives: dict[int, np.ndarray]
    d_pct: float
    n_docs: int

    def pair_count(self) -> int:
        return sum(len(v) for v in self.negatives.values())


def in_cluster_distances(z: np.ndarray, assignment: ClusterAssignment):
    """Euclidean distances from each anchor to the other members of its
    cluster. Returns {anchor: (companion_ids, distances)}; singleton
    clusters produce empty arrays."""
    x = np.asarray(z, dtype=np.float64)
    labels = np.asarray(assignment.labels)
    out: dict[int, tuple[np.ndarray, np.ndarray]] = {}
    for c in np.unique(labels):
        member_ids = np.flatnonzero(labels == c)
        pts = x[member_ids]
        d = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2))
        for pos, anchor in enumerate(member_ids):
            companions = np.delete(member_ids, pos)
            out[int(anchor)] = (companions, np.delete(d[pos], pos))
    return out


def distant_set(companion_ids: np.ndarray, distances: np.ndarray, d_pct: float) -> np.ndarray:
    """Farthest ceil(d% * n) companions of one anchor, as a sorted id array.

    Distance ties are resolved toward the larger node id, then the set is
    capped at exactly ceil(d% * n) members, so the result is deterministic.
    """
    if not 0.0 <= d_pct <= 100.0:
        raise ConfigError(f"self-correction percentage must be in [0, 100], got {d_pct}")
    n = len(companion_ids)
    m = math.ceil(d_pct * n / 100.0)
    if m == 0:
        return np.empty(0, dtype=np.int64)
    order = np.lexsort((-np.asarray(companion_ids), -np.asarray(distances)))
    return np.sort(np.asarray(companion_ids)[order[:m]]).astype(np.int64)


def build_negative_index(
    z: np.ndarray, assignment: ClusterAssignment, d_pct: float
) -> NegativeIndex:
    """Union of all out-of-cluster documents with the distant in-cluster
    set, per anchor. The anchor itself is never a member."""
    labels = np.asarray(assignment.labels)
    n = len(labels)
    all_ids = np.arange(n)
    per_anchor = in_cluster_distances(z, assignment)
    negatives: dict[int, np.ndarray] = {}
    for anchor in range(n):
        outside = all_ids[labels != labels[anchor]]
        companions, dists = per_anchor[anchor]
        distant = distant_set(companions, dists, d_pct)
        negatives[anchor] = np.sort(np.concatenate([outside, distant])).astype(np.int64)
    return NegativeIndex(negatives=negatives, d_pct=d_pct, n_docs=n)


def vanilla_negative_index(n_docs: int) -> NegativeIndex:
    """The unrefined baseline: every other document is a negative."""
    all_ids = np.arange(n_docs)
    negatives = {
        i: np.delete(all_ids, i).astype(np.int64) for i in range(n_docs)
    }
    return NegativeIndex(negatives=negatives, d_pct=100.0, n_docs=n_docs)


def restrict_index(index: NegativeIndex, keep: np.ndarray) -> NegativeIndex:
    """Drop anchors and negative members outside the keep mask (used when
    the contrastive loss is restricted to training documents)."""
    keep = np.asarray(keep, dtype=bool)
    negatives = {
        a: negs[keep[negs]]
        for a, negs in index.negatives.items()
        if keep[a]
    }
    return NegativeIndex(negatives=negatives, d_pct=index.d_pct, n_docs=index.n_docs)


def false_negative_rate(index: NegativeIndex, true_labels: np.ndarray) -> float:
    """Fraction of (anchor, negative) pairs whose true labels agree.

    Pairs involving a document without a known label (-1) are excluded.
    Returns 0.0 when no scorable pair exists.
    """
    y = np.asarray(true_labels)
    total = 0
    same = 0
    for anchor, negs in index.negatives.items():
        if y[anchor] < 0 or len(negs) == 0:
            continue
        known = negs[y[negs] >= 0]
        total += len(known)
        same += int((y[known] == y[anchor]).sum())
    return same / total if total else 0.0


def dump_negatives(path, index: NegativeIndex) -> None:
    """Debug dump: ``<anchor>\\t<comma-separated negative ids>`` lines."""
    with open(path, "w", encoding="utf-8") as fh:
        for anchor in range(index.n_docs):
            ids = index.negatives.get(anchor, np.empty(0, dtype=np.int64))
            fh.write(f"{anchor}\t{','.join(str(int(i)) for i in ids)}\n")
