"""Outlier profiling and the accuracy / outlier percentage pair.

A fitted K-means model assigns every point, so some exclusion rule is needed
before any point can be counted as an outlier. The rule is configurable:

* ``none`` — nothing is flagged.
* ``sigma`` — a point is flagged when its distance (under the fit metric) to
  its assigned centroid exceeds mean + c * std of that cluster's
  member-to-centroid distances (population std; clusters can be tiny and the
  sample form divides by zero at N=1).
* ``quantile`` — flag points strictly above the per-cluster q-quantile
  distance.

Cluster accuracy % and outlier % are exact complements: accuracy is
100 * clustered / total and the outlier share is the remainder.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass

import numpy as np

from .kmeans import ClusterModel
from .metrics import pairwise_distances

POLICY_NONE = "none"
POLICY_SIGMA = "sigma"
POLICY_QUANTILE = "quantile"


@dataclass(frozen=True)
class OutlierPolicy:
    kind: str = POLICY_SIGMA
    c: float = 3.0
    q: float = 0.99

    def validate(self) -> "OutlierPolicy":
        if self.kind not in (POLICY_NONE, POLICY_SIGMA, POLICY_QUANTILE):
            raise ValueError(f"unknown outlier policy {self.kind!r}")
        if self.kind == POLICY_SIGMA and not self.c > 0:
            raise ValueError(f"sigma policy requires c > 0, got {self.c}")
        if self.kind == POLICY_QUANTILE and not 0 < self.q <= 1:
            raise ValueError(f"quantile policy requires q in (0, 1], got {self.q}")
        return self


@dataclass(frozen=True)
class EvaluationReport:
    per_cluster_counts: tuple[int, ...]
    total: int
    clustered: int
    cluster_accuracy_pct: float
    outlier_pct: float
    policy: OutlierPolicy
    metric: str
    p: float | None
    seed: int

    def to_json(self) -> str:
        return json.dumps(
            {
                "per_cluster_counts": list(self.per_cluster_counts),
                "total": self.total,
                "clustered": self.clustered,
                "accuracy_pct": self.cluster_accuracy_pct,
                "outlier_pct": self.outlier_pct,
                "policy": self.policy.kind,
                "metric": self.metric,
                "p": self.p,
                "seed": self.seed,
            }
        )

    def to_csv(self) -> str:
        """One-row CSV in the sweep table layout."""
        k = len(self.per_cluster_counts)
        header = ["metric", "p", "instance_size"]
        header += [f"c{j + 1}" for j in range(k)]
        header += ["accuracy_pct", "outlier_pct", "seed"]
        row = [self.metric, "" if self.p is None else repr(float(self.p)), str(self.total)]
        row += [str(c) for c in self.per_cluster_counts]
        row += [repr(self.cluster_accuracy_pct), repr(self.outlier_pct), str(self.seed)]
        buf = io.StringIO()
        buf.write(",".join(header) + "\n")
        buf.write(",".join(row) + "\n")
        return buf.getvalue()


def _member_distances(dataset, model: ClusterModel) -> np.ndarray:
    data = np.asarray(dataset, dtype=np.float64)
    d = pairwise_distances(model.metric, data, model.centroids)
    return d[np.arange(data.shape[0]), model.assignments]


def flag_outliers(dataset, model: ClusterModel, policy: OutlierPolicy) -> np.ndarray:
    """Boolean flag per point; True marks a point excluded as an outlier."""
    policy.validate()
    n = np.asarray(dataset).shape[0]
    flags = np.zeros(n, dtype=bool)
    if policy.kind == POLICY_NONE:
        return flags

    dists = _member_distances(dataset, model)
    labels = np.asarray(model.assignments)
    for j in range(model.centroids.shape[0]):
        members = labels == j
        if not members.any():
            continue
        dj = dists[members]
        if policy.kind == POLICY_SIGMA:
            cutoff = dj.mean() + policy.c * dj.std()
        else:
            cutoff = np.quantile(dj, policy.q)
        flags[members] = dj > cutoff
    return flags


def cluster_accuracy_pct(clustered: int, total: int) -> float:
    """100 * clustered / total."""
    if total <= 0:
        raise ValueError("total must be positive")
    if not 0 <= clustered <= total:
        raise ValueError(f"clustered ({clustered}) must lie in [0, total={total}]")
    return 100.0 * clustered / total


def outlier_pct(clustered: int, total: int) -> float:
    """100 * (total - clustered) / total."""
    if total <= 0:
        raise ValueError("total must be positive")
    if not 0 <= clustered <= total:
        raise ValueError(f"clustered ({clustered}) must lie in [0, total={total}]")
    return 100.0 * (total - clustered) / total


def evaluate(dataset, model: ClusterModel, policy: OutlierPolicy) -> EvaluationReport:
    """Count clustered points per cluster (excluding flagged outliers) and
    compute the accuracy / outlier percentage pair."""
    flags = flag_outliers(dataset, model, policy)
    labels = np.asarray(model.assignments)
    k = model.centroids.shape[0]
    counts = np.bincount(labels[~flags], minlength=k)
    total = labels.shape[0]
    clustered = int(counts.sum())
    acc = cluster_accuracy_pct(clustered, total)
    return EvaluationReport(
        per_cluster_counts=tuple(int(c) for c in counts),
        total=total,
        clustered=clustered,
        cluster_accuracy_pct=acc,
        outlier_pct=100.0 - acc,
        policy=policy,
        metric=model.metric.kind,
        p=model.metric.p,
        seed=model.seed,
    )
