"""Lloyd-style K-means over any DistanceSpec.

The assignment step uses the configured metric; the update step and the
reported objective are always the squared-Euclidean SSE against cluster
means. For metrics that are not strictly increasing functions of the squared
Euclidean distance (cityblock, chebyshev, general minkowski) the iteration
is a heuristic without a monotonicity guarantee, so termination relies on
the unchanged-assignment check and the iteration cap.

Everything is seeded and single-threaded, so a given (dataset, config)
always produces a bitwise-identical model.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .metrics import DistanceSpec, pairwise_distances, validate_spec

INIT_RANDOM = "random-points"
INIT_KMEANS_PP = "kmeans-plus-plus"
INIT_EXPLICIT = "explicit"

DEFAULT_SEED = 42

# converged-reason tags
STABLE_ASSIGNMENTS = "stable-assignments"
CENTROID_SHIFT = "centroid-shift"
MAX_ITER = "max-iter"


@dataclass(frozen=True)
class ClusteringConfig:
    k: int
    metric: DistanceSpec = DistanceSpec("euclidean")
    init: str = INIT_KMEANS_PP
    seed: int = DEFAULT_SEED
    max_iter: int = 100
    shift_tol: float = 1e-9
    initial_centroids: np.ndarray | None = None


@dataclass(frozen=True)
class ClusterModel:
    centroids: np.ndarray
    assignments: np.ndarray
    iterations_run: int
    converged: bool
    converged_reason: str
    final_sse: float
    metric: DistanceSpec
    seed: int
    sse_per_iter: tuple[float, ...] = field(default=(), repr=False)

    def to_json(self) -> str:
        return json.dumps(
            {
                "centroids": [[float(c) for c in row] for row in self.centroids],
                "assignments": [int(a) for a in self.assignments],
                "iterations": self.iterations_run,
                "converged": self.converged,
                "sse": self.final_sse,
                "seed": self.seed,
                "metric": self.metric.kind,
                "p": self.metric.p,
            }
        )


def _check_config(data: np.ndarray, config: ClusteringConfig) -> None:
    if config.k < 1:
        raise ValueError(f"k must be >= 1, got {config.k}")
    if config.k > data.shape[0]:
        raise ValueError(
            f"k ({config.k}) exceeds dataset size ({data.shape[0]})"
        )
    if config.max_iter < 1:
        raise ValueError(f"max_iter must be >= 1, got {config.max_iter}")
    if config.shift_tol < 0:
        raise ValueError(f"shift_tol must be >= 0, got {config.shift_tol}")
    validate_spec(config.metric)


def init_centroids(dataset, config: ClusteringConfig) -> np.ndarray:
    """Choose the k initial centroids according to config.init."""
    data = np.asarray(dataset, dtype=np.float64)
    _check_config(data, config)
    rng = np.random.default_rng(config.seed)

    if config.init == INIT_EXPLICIT:
        if config.initial_centroids is None:
            raise ValueError("explicit init requires initial_centroids")
        ctr = np.asarray(config.initial_centroids, dtype=np.float64)
        if ctr.shape != (config.k, data.shape[1]):
            raise ValueError(
                f"explicit centroids have shape {ctr.shape}, "
                f"expected {(config.k, data.shape[1])}"
            )
        return ctr.copy()

    if config.init == INIT_RANDOM:
        idx = rng.choice(data.shape[0], size=config.k, replace=False)
        return data[idx].copy()

    if config.init == INIT_KMEANS_PP:
        n = data.shape[0]
        chosen = np.empty(config.k, dtype=np.intp)
        chosen[0] = rng.integers(0, n)
        for i in range(1, config.k):
            d = pairwise_distances(config.metric, data, data[chosen[:i]])
            # D^2 weighting under the configured metric
            weights = np.min(d, axis=1) ** 2
            total = weights.sum()
            if total > 0:
                chosen[i] = rng.choice(n, p=weights / total)
            else:
                chosen[i] = rng.integers(0, n)
        return data[chosen].copy()

    raise ValueError(f"unknown init mode {config.init!r}")


def assign(dataset, centroids, metric: DistanceSpec) -> np.ndarray:
    """Map each point to its nearest centroid; ties go to the lowest index."""
    ctr = np.asarray(centroids, dtype=np.float64)
    if ctr.ndim != 2 or ctr.shape[0] == 0:
        raise ValueError("at least one centroid is required")
    d = pairwise_distances(metric, dataset, ctr)
    return np.argmin(d, axis=1)


def update_centroids(
    dataset,
    assignments,
    k: int,
    prev_centroids=None,
    metric: DistanceSpec | None = None,
) -> np.ndarray:
    """Recompute each centroid as the mean of its assigned points.

    Points are accumulated in ascending point-index order so the result is
    independent of any caller-side partitioning. An empty cluster is
    re-seeded with the point farthest (under the fit metric) from its former
    centroid, which requires prev_centroids and metric.
    """
    data = np.asarray(dataset, dtype=np.float64)
    labels = np.asarray(assignments)
    if labels.shape[0] != data.shape[0]:
        raise ValueError("one assignment per point is required")
    if labels.size and (labels.min() < 0 or labels.max() >= k):
        raise ValueError(f"assignments must lie in [0, {k})")

    sums = np.zeros((k, data.shape[1]))
    np.add.at(sums, labels, data)
    counts = np.bincount(labels, minlength=k)

    centroids = np.empty_like(sums)
    for j in range(k):
        if counts[j] > 0:
            centroids[j] = sums[j] / counts[j]
        else:
            if prev_centroids is None or metric is None:
                raise ValueError(
                    f"cluster {j} is empty and no previous centroid is available"
                )
            d = pairwise_distances(metric, data, np.asarray(prev_centroids)[j : j + 1])
            centroids[j] = data[int(np.argmax(d[:, 0]))]
    return centroids


def sse(dataset, centroids, assignments) -> float:
    """Sum of squared Euclidean errors between points and their centroids.

    Always squared Euclidean, regardless of the metric used to fit.
    """
    data = np.asarray(dataset, dtype=np.float64)
    resid = data - np.asarray(centroids, dtype=np.float64)[np.asarray(assignments)]
    return float(np.sum(resid * resid))


def fit(dataset, config: ClusteringConfig) -> ClusterModel:
    """Run Lloyd iterations until assignments stabilize, the maximum
    componentwise centroid shift drops to shift_tol, or max_iter is hit."""
    data = np.asarray(dataset, dtype=np.float64)
    if data.ndim != 2 or data.shape[0] == 0:
        raise ValueError("dataset must be a non-empty 2-D array")
    _check_config(data, config)

    centroids = init_centroids(data, config)
    labels = None
    reason = MAX_ITER
    iterations = 0
    history: list[float] = []

    for _ in range(config.max_iter):
        iterations += 1
        new_labels = assign(data, centroids, config.metric)
        new_centroids = update_centroids(
            data, new_labels, config.k, prev_centroids=centroids, metric=config.metric
        )
        history.append(sse(data, new_centroids, new_labels))
        shift = float(np.max(np.abs(new_centroids - centroids)))
        stable = labels is not None and np.array_equal(new_labels, labels)
        labels, centroids = new_labels, new_centroids
        if stable:
            reason = STABLE_ASSIGNMENTS
            break
        if shift <= config.shift_tol:
            reason = CENTROID_SHIFT
            break

    return ClusterModel(
        centroids=centroids,
        assignments=labels,
        iterations_run=iterations,
        converged=reason != MAX_ITER,
        converged_reason=reason,
        final_sse=sse(data, centroids, labels),
        metric=config.metric,
        seed=config.seed,
        sse_per_iter=tuple(history),
    )
