"""Cluster-count selection and cluster quality measures."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np
import pandas as pd

from sklearn.metrics import silhouette_samples

from ..errors import ClusteringError
from .dendrogram import CLUSTER_COL, Dendrogram, cut

SILHOUETTE_COL = "silhouette"
DEFAULT_THETA = 0.05
DEFAULT_K_MAX = 10


def _aligned(labels: pd.Series, features: pd.Series) -> pd.Series:
    if not labels.index.sort_values().equals(features.index.sort_values()):
        raise ClusteringError("labels and features cover different patterns")
    return labels.reindex(features.index)


def wcss(labels: pd.Series, features: pd.Series) -> float:
    """Within-cluster sum of squares of a labelled feature set.

    Parameters
    ----------
    labels : pandas.Series
        Cluster number per pattern id
    features : pandas.Series
        Feature value per pattern id

    Returns
    -------
    float
        Sum over all patterns of the squared distance to their cluster mean

    Raises
    ------
    ClusteringError
        If labels and features cover different patterns

    """
    labels = _aligned(labels, features)
    centroids = features.groupby(labels).transform("mean")
    return float(((features - centroids) ** 2).sum())


def wcss_curve(dendrogram: Dendrogram, k_max: int) -> list[float]:
    """WCSS of the cuts ``k = 1..min(k_max, N)`` of a dendrogram."""
    if k_max < 1:
        raise ClusteringError(f"k_max must be at least 1, got {k_max}")
    return [
        wcss(cut(dendrogram, k), dendrogram.features)
        for k in range(1, min(k_max, len(dendrogram)) + 1)
    ]


def select_k_from_curve(curve: Sequence[float], theta: float) -> int:
    """Pick the cluster count at the elbow of a WCSS curve.

    ``curve[k - 1]`` is the WCSS with ``k`` clusters. The chosen count is the
    smallest ``k`` whose step to ``k + 1`` clusters removes less than
    ``theta`` of the one-cluster WCSS. Without such a step the last count on
    the curve is returned; a zero one-cluster WCSS gives 1.

    Examples
    --------
    >>> select_k_from_curve([100, 20, 5, 4.5, 4.4], 0.05)
    3

    """
    if not 0 < theta < 1:
        raise ClusteringError(f"theta must lie in (0, 1), got {theta}")
    if not curve:
        raise ClusteringError("empty WCSS curve")
    total = curve[0]
    if total == 0:
        return 1
    for k in range(1, len(curve)):
        if (curve[k - 1] - curve[k]) / total < theta:
            return k
    return len(curve)


def select_k(
        dendrogram: Dendrogram,
        theta: float = DEFAULT_THETA,
        k_max: int = DEFAULT_K_MAX
    ) -> int:
    """Choose the number of clusters by the relative WCSS decrease.

    Parameters
    ----------
    dendrogram : Dendrogram
        A complete merge history
    theta : float
        Relative decrease below which adding a cluster is not worth it
    k_max : int
        Largest admissible count; clipped to the number of patterns

    Returns
    -------
    int
        The selected number of clusters

    """
    return select_k_from_curve(wcss_curve(dendrogram, k_max), theta)


def silhouette(labels: pd.Series, features: pd.Series) -> pd.Series:
    """Silhouette index of every pattern.

    Members of singleton clusters get 0, as does any member whose mean
    intra- and nearest inter-cluster distances are both 0.

    Parameters
    ----------
    labels : pandas.Series
        Cluster number per pattern id
    features : pandas.Series
        Feature value per pattern id

    Returns
    -------
    pandas.Series
        Values in ``[-1, 1]`` indexed like ``features``

    Raises
    ------
    ClusteringError
        If there are fewer than two clusters

    """
    labels = _aligned(labels, features)
    n_clusters = labels.nunique()
    if n_clusters < 2:  # noqa: PLR2004
        raise ClusteringError(
            f"silhouette needs at least 2 clusters, got {n_clusters}"
        )
    if n_clusters == len(labels):
        values = np.zeros(len(labels))
    else:
        # On scalars the Manhattan distance is |x - y|, computed exactly.
        values = silhouette_samples(
            features.to_numpy(dtype=np.float64).reshape(-1, 1),
            labels.to_numpy(),
            metric="manhattan",
        )
    return pd.Series(
        np.clip(values, -1.0, 1.0), index=features.index, name=SILHOUETTE_COL
    )


def negative_silhouette_counts(
        dendrogram: Dendrogram,
        k_max: int = DEFAULT_K_MAX
    ) -> dict[int, int]:
    """Count members with a negative silhouette for ``k = 2..k_max``."""
    return {
        k: int((silhouette(cut(dendrogram, k), dendrogram.features) < 0).sum())
        for k in range(2, min(k_max, len(dendrogram)) + 1)
    }


def mean_silhouette_per_cluster(
        labels: pd.Series,
        silhouettes: pd.Series
    ) -> pd.Series:
    """Average silhouette of the members of each cluster."""
    labels = _aligned(labels, silhouettes)
    return silhouettes.groupby(labels.rename(CLUSTER_COL)).mean()
