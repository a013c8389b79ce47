"""Pseudo-labeling of document representations by unsupervised clustering.

Both methods are deterministic: k-means uses a seeded generator with
k-means++ seeding, the Ward agglomerative merger breaks cost ties by the
lower pair index. Cluster ids carry no semantics; downstream consumers are
required to be invariant under relabeling.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError


@dataclass
class ClusterAssignment:
    """Pseudo-label per document plus method-specific extras.

    centroids is populated by k-means only. inertia is the sum of squared
    distances to each point's cluster center; inertia_history records it
    after every k-means assignment pass (non-increasing by construction).
    """

    labels: np.ndarray
    centroids: np.ndarray | None
    inertia: float
    method: str
    n_clusters: int
    inertia_history: list[float] = field(default_factory=list)


def _assign(x: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    # argmin returns the first minimum, so distance ties go to the lowest id.
    d2 = ((x[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
    return np.argmin(d2, axis=1)


def _inertia(x: np.ndarray, centroids: np.ndarray, labels: np.ndarray) -> float:
    return float(((x - centroids[labels]) ** 2).sum())


def _kmeans_pp(x: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """Standard k-means++ seeding: squared-distance-proportional draws."""
    n = x.shape[0]
    centroids = np.empty((k, x.shape[1]), dtype=np.float64)
    centroids[0] = x[rng.integers(n)]
    d2 = ((x - centroids[0]) ** 2).sum(axis=1)
    for c in range(1, k):
        total = d2.sum()
        if total <= 0:
            idx = rng.integers(n)  # all points coincide with a centroid
        else:
            idx = rng.choice(n, p=d2 / total)
        centroids[c] = x[idx]
        d2 = np.minimum(d2, ((x - centroids[c]) ** 2).sum(axis=1))
    return centroids


def kmeans(
    z: np.ndarray,
    k: int,
    seed: int = 0,
    max_iter: int = 300,
    tol: float = 1e-6,
    init_centroids: np.ndarray | None = None,
) -> ClusterAssignment:
    """Lloyd's algorithm with k-means++ seeding.

    Stops when the largest centroid shift drops below tol or after max_iter
    iterations. An empty cluster is re-seeded at the point farthest from its
    assigned centroid. The returned labels are a fixed point: one more
    assignment pass would change nothing.
    """
    x = np.asarray(z, dtype=np.float64)
    n = x.shape[0]
    if k < 1:
        raise ConfigError(f"k must be >= 1, got {k}")
    if k > n:
        raise ConfigError(f"k={k} exceeds the number of points ({n})")

    rng = np.random.default_rng(seed)
    if init_centroids is not None:
        centroids = np.asarray(init_centroids, dtype=np.float64).copy()
        if centroids.shape != (k, x.shape[1]):
            raise ConfigError(
                f"init_centroids must have shape ({k}, {x.shape[1]}), "
                f"got {centroids.shape}"
            )
    else:
        centroids = _kmeans_pp(x, k, rng)

    labels = _assign(x, centroids)
    history = [_inertia(x, centroids, labels)]

    for _ in range(max_iter):
        new_centroids = centroids.copy()
        for c in range(k):
            members = labels == c
            if members.any():
                new_centroids[c] = x[members].mean(axis=0)
        # Empty-cluster repair: move the centroid to the point currently
        # farthest from its own center, one point per empty cluster.
        empties = [c for c in range(k) if not np.any(labels == c)]
        if empties:
            d2 = ((x - new_centroids[labels]) ** 2).sum(axis=1)
            taken: set[int] = set()
            for c in empties:
                order = np.argsort(-d2, kind="stable")
                pick = next(int(i) for i in order if int(i) not in taken)
                taken.add(pick)
                new_centroids[c] = x[pick]

        new_labels = _assign(x, new_centroids)
        history.append(_inertia(x, new_centroids, new_labels))
        shift = np.sqrt(((new_centroids - centroids) ** 2).sum(axis=1)).max()
        centroids, labels = new_centroids, new_labels
        if shift < tol:
            break

    return ClusterAssignment(
        labels=labels,
        centroids=centroids,
        inertia=history[-1],
        method="kmeans",
        n_clusters=k,
        inertia_history=history,
    )


def agglomerative(z: np.ndarray, k: int) -> ClusterAssignment:
    """Bottom-up Ward-linkage merging until k clusters remain.

    The merge cost between clusters A, B is |A||B|/(|A|+|B|) * ||mean_A -
    mean_B||^2 (the increase in total within-cluster variance). Cost ties
    are broken by the lexicographically lower pair index, which makes the
    whole merge sequence deterministic.
    """
    x = np.asarray(z, dtype=np.float64)
    n = x.shape[0]
    if k < 1:
        raise ConfigError(f"k must be >= 1, got {k}")
    if k > n:
        raise ConfigError(f"k={k} exceeds the number of points ({n})")

    centroids = x.copy()
    sizes = np.ones(n, dtype=np.float64)
    members: list[list[int]] = [[i] for i in range(n)]

    while len(members) > k:
        m = len(members)
        diff = centroids[:, None, :] - centroids[None, :, :]
        cost = (sizes[:, None] * sizes[None, :] / (sizes[:, None] + sizes[None, :])) * (
            diff * diff
        ).sum(axis=2)
        cost[np.tril_indices(m)] = np.inf
        flat = int(np.argmin(cost))  # first minimum = lowest (i, j) pair
        i, j = divmod(flat, m)

        merged_size = sizes[i] + sizes[j]
        centroids[i] = (sizes[i] * centroids[i] + sizes[j] * centroids[j]) / merged_size
        sizes[i] = merged_size
        members[i] = members[i] + members[j]
        centroids = np.delete(centroids, j, axis=0)
        sizes = np.delete(sizes, j)
        members.pop(j)

    labels = np.empty(n, dtype=np.int64)
    for cid, docs in enumerate(members):
        labels[docs] = cid
    inertia = float(((x - centroids[labels]) ** 2).sum())
    return ClusterAssignment(
        labels=labels,
        centroids=None,
        inertia=inertia,
        method="agglomerative",
        n_clusters=k,
    )


def cluster(z: np.ndarray, k: int, method: str = "kmeans", seed: int = 0) -> ClusterAssignment:
    """Dispatch on the configured clustering method."""
    if method == "kmeans":
        return kmeans(z, k, seed=seed)
    if method == "agglomerative":
        return agglomerative(z, k)
    raise ConfigError(f"unknown clustering method {method!r}")


def dump_assignment(path, assignment: ClusterAssignment) -> None:
    """Debug dump: ``<doc_index>\\t<cluster_id>`` lines."""
    with open(path, "w", encoding="utf-8") as fh:
        for i, c in enumerate(assignment.labels):
            fh.write(f"{i}\t{int(c)}\n")
