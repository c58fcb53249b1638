"""Full clustering runs and their serialised results."""

from __future__ import annotations

import json
import logging

from dataclasses import dataclass
from typing import Any, TextIO

import numpy as np
import numpy.typing as npt
import pandas as pd

from .. import output
from ..errors import ClusteringError
from ..features import ID_COL, MMK_CLASS_COL, OMEGA_COL
from .dendrogram import CLUSTER_COL, Dendrogram, agglomerate, cut
from .validation import (
    DEFAULT_K_MAX,
    DEFAULT_THETA,
    SILHOUETTE_COL,
    mean_silhouette_per_cluster,
    negative_silhouette_counts,
    select_k_from_curve,
    silhouette,
    wcss_curve,
)
from .ward import Linkage

logger = logging.getLogger(__name__)

STAT_COLUMNS = ["cluster", "count", "min", "q1", "median", "q3", "max"]


@dataclass(frozen=True)
class ClusterSettings:
    """Parameters of a clustering run.

    ``k`` forces the number of clusters; ``None`` selects it from the WCSS
    curve.
    """

    linkage: Linkage = Linkage.PAPER
    theta: float = DEFAULT_THETA
    k_max: int = DEFAULT_K_MAX
    k: int | None = None
    feature: str = OMEGA_COL

    def __post_init__(self) -> None:
        if not 0 < self.theta < 1:
            raise ValueError(f"theta must lie in (0, 1), got {self.theta}")
        if self.k_max < 1:
            raise ValueError(f"k_max must be at least 1, got {self.k_max}")
        if self.k is not None and self.k < 1:
            raise ValueError(f"k must be at least 1, got {self.k}")


@dataclass(frozen=True, eq=False)
class ClusteringResult:
    """Everything a clustering run produced.

    Attributes
    ----------
    dendrogram : Dendrogram
        The merge history, with the clustered features
    k : int
        The chosen or forced number of clusters
    theta : float
        The WCSS threshold in force
    wcss : list of float
        WCSS per candidate ``k = 1..min(k_max, N)``
    labels : pandas.Series
        Cluster number per pattern id, clusters by ascending mean
    silhouettes : pandas.Series or None
        Silhouette per pattern id; ``None`` with a single cluster
    cluster_stats : pandas.DataFrame
        Five-number summary and count per cluster
    feature : str
        Name of the clustered feature

    """

    dendrogram: Dendrogram
    k: int
    theta: float
    wcss: list[float]
    labels: pd.Series
    silhouettes: pd.Series | None
    cluster_stats: pd.DataFrame
    feature: str = OMEGA_COL

    @property
    def linkage(self) -> Linkage:
        """The merge criterion of the run."""
        return self.dendrogram.linkage

    def to_dict(self) -> dict[str, Any]:
        """Convert the result to its clusters-file JSON object."""
        silhouettes = (
            {} if self.silhouettes is None else self.silhouettes.to_dict()
        )
        return {
            "linkage": str(self.linkage),
            "feature": self.feature,
            "k": self.k,
            "theta": self.theta,
            "wcss": self.wcss,
            "labels": self.labels.to_dict(),
            "merges": [list(merge) for merge in self.dendrogram.merges],
            "silhouette": silhouettes,
            "cluster_stats": self.cluster_stats.to_dict(orient="records"),
        }


def quartiles(values: npt.ArrayLike) -> tuple[float, float, float]:
    """Lower hinge, median and upper hinge of a sample.

    The hinges are the medians of the lower and upper halves of the sorted
    sample, both halves including the median for odd sizes.

    Examples
    --------
    >>> quartiles([1, 2, 3, 4, 5])
    (2.0, 3.0, 4.0)

    """
    ordered = np.sort(np.asarray(values, dtype=np.float64))
    if ordered.size == 0:
        raise ClusteringError("quartiles of an empty sample")
    half = (ordered.size + 1) // 2
    return (
        float(np.median(ordered[:half])),
        float(np.median(ordered)),
        float(np.median(ordered[ordered.size - half:])),
    )


def cluster_stats(labels: pd.Series, features: pd.Series) -> pd.DataFrame:
    """Summarise the feature distribution of every cluster.

    Returns
    -------
    pandas.DataFrame
        One row per cluster, columns ``STAT_COLUMNS``, by cluster number

    """
    rows = []
    for cluster, members in features.groupby(
            labels.reindex(features.index), sort=True):
        q1, median, q3 = quartiles(members.to_numpy())
        rows.append((
            int(cluster),
            len(members),
            float(members.min()),
            q1,
            median,
            q3,
            float(members.max()),
        ))
    return pd.DataFrame(rows, columns=STAT_COLUMNS)


def _complete(
        dendrogram: Dendrogram,
        settings: ClusterSettings
    ) -> ClusteringResult:
    features = dendrogram.features
    curve = wcss_curve(dendrogram, settings.k_max)
    if settings.k is None:
        k = select_k_from_curve(curve, settings.theta)
    elif settings.k > len(dendrogram):
        raise ClusteringError(
            f"k = {settings.k} exceeds the {len(dendrogram)} patterns"
        )
    else:
        k = settings.k

    labels = cut(dendrogram, k)
    silhouettes = None if k == 1 else silhouette(labels, features)
    return ClusteringResult(
        dendrogram,
        k,
        settings.theta,
        curve,
        labels,
        silhouettes,
        cluster_stats(labels, features),
        settings.feature,
    )


def cluster_report(
        table: pd.DataFrame,
        settings: ClusterSettings | None = None
    ) -> ClusteringResult:
    """Cluster the patterns of a features table.

    Runs the agglomeration, picks ``k`` from the WCSS curve unless it is
    forced, cuts the dendrogram and validates the clusters.

    Parameters
    ----------
    table : pandas.DataFrame
        A features table with a ``pattern_id`` column
    settings : ClusterSettings, optional
        Linkage, threshold and cluster count options

    Returns
    -------
    ClusteringResult
        The complete result of the run

    Raises
    ------
    ClusteringError
        If the table is empty, the feature unknown or ``k`` out of range

    """
    settings = settings or ClusterSettings()
    if settings.feature not in table:
        raise ClusteringError(f"no feature column {settings.feature!r}")
    features = table.set_index(ID_COL)[settings.feature]
    result = _complete(agglomerate(features, settings.linkage), settings)
    logger.info(
        "Clustered %d patterns into %d clusters with %s linkage",
        len(features),
        result.k,
        result.linkage,
    )
    return result


def write_clusters(result: ClusteringResult, stream: TextIO) -> None:
    """Write a result as a clusters JSON document."""
    stream.write(output.dumps(result.to_dict()))


def read_clusters(stream: TextIO, table: pd.DataFrame) -> ClusteringResult:
    """Rebuild a result from a clusters document and its features table.

    The labels and merges come from the document; the feature values from
    the table.

    Raises
    ------
    ClusteringError
        If the document is malformed or does not match the table

    """
    try:
        document = json.load(stream)
        if not isinstance(document, dict):
            raise ClusteringError("clusters file must hold a JSON object")
        if not isinstance(document["labels"], dict):
            raise ClusteringError("clusters labels must be a JSON object")
        feature = str(document.get("feature", OMEGA_COL))
        features = table.set_index(ID_COL)[feature]
        dendrogram = Dendrogram.from_merges(
            features, document["merges"], Linkage(document["linkage"])
        )
        labels = pd.Series(document["labels"], name=CLUSTER_COL)
        k = int(document["k"])
        theta = float(document["theta"])
        curve = [float(value) for value in document["wcss"]]
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ClusteringError):
            raise
        raise ClusteringError(f"malformed clusters file ({exc})") from exc

    labels = labels.reindex(dendrogram.features.index)
    if labels.isna().any() or labels.nunique() != k:
        raise ClusteringError("clusters file does not match the features")
    labels = labels.astype(np.int64)
    silhouettes = (
        None if k == 1 else silhouette(labels, dendrogram.features)
    )
    return ClusteringResult(
        dendrogram,
        k,
        theta,
        curve,
        labels,
        silhouettes,
        cluster_stats(labels, dendrogram.features),
        feature,
    )


def silhouette_table(result: ClusteringResult) -> pd.DataFrame:
    """Per-pattern silhouette with its cluster, by cluster then pattern id.

    Raises
    ------
    ClusteringError
        If the result has a single cluster

    """
    if result.silhouettes is None:
        raise ClusteringError("a single cluster has no silhouettes")
    return (
        pd.DataFrame({
            ID_COL: result.labels.index,
            CLUSTER_COL: result.labels.to_numpy(),
            SILHOUETTE_COL: result.silhouettes.to_numpy(),
        })
        .sort_values([CLUSTER_COL, ID_COL], kind="stable")
        .reset_index(drop=True)
    )


def report_document(
        result: ClusteringResult,
        table: pd.DataFrame,
        elbow_index: int,
        k_max: int = DEFAULT_K_MAX
    ) -> dict[str, Any]:
    """Assemble the report JSON object of a clustering result.

    Parameters
    ----------
    result : ClusteringResult
        A clustering run
    table : pandas.DataFrame
        The features table the run was made on
    elbow_index : int
        Points below the largest gap of the sorted clustered feature
    k_max : int
        Largest cluster count for the negative-silhouette comparison

    Returns
    -------
    dict
        Cluster statistics, the elbow, MMK class counts, negative
        silhouette counts per ``k`` and mean silhouette per cluster

    """
    mean_silhouettes: dict[int, float] = {}
    if result.silhouettes is not None:
        mean_silhouettes = {
            int(cluster): float(value)
            for cluster, value in mean_silhouette_per_cluster(
                result.labels, result.silhouettes
            ).items()
        }
    return {
        "feature": result.feature,
        "linkage": str(result.linkage),
        "k": result.k,
        "patterns": len(result.labels),
        "cluster_stats": result.cluster_stats.to_dict(orient="records"),
        "elbow_index": elbow_index,
        "mmk_class_counts": (
            table[MMK_CLASS_COL].value_counts().sort_index().to_dict()
        ),
        "negative_silhouettes": negative_silhouette_counts(
            result.dendrogram, k_max
        ),
        "mean_silhouette": mean_silhouettes,
    }
