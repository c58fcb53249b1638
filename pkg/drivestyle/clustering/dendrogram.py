"""Agglomerative hierarchical clustering of scalar features."""

from __future__ import annotations

import logging

from collections.abc import Sequence
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import numpy.typing as npt
import pandas as pd

from scipy.cluster.hierarchy import DisjointSet

from ..errors import ClusteringError
from .ward import Linkage, criterion_matrix, merged_moments

logger = logging.getLogger(__name__)

CLUSTER_COL = "cluster"


class Merge(NamedTuple):
    """One agglomeration step.

    Leaves are nodes ``0..N-1``; the merge at step ``s`` creates node
    ``N + s``. ``left`` is always the smaller of the two merged node ids.
    """

    left: int
    right: int
    criterion: float
    size: int


def _ordered_features(features: pd.Series) -> pd.Series:
    if features.empty:
        raise ClusteringError("cannot cluster an empty feature set")
    if not features.index.is_unique:
        raise ClusteringError("pattern ids must be unique")
    values = features.astype(np.float64)
    if not np.all(np.isfinite(values.to_numpy())):
        raise ClusteringError("feature values must be finite")
    return values.sort_index(kind="stable")


@dataclass(frozen=True, eq=False)
class Dendrogram:
    """The full merge history of an agglomeration.

    Attributes
    ----------
    features : pandas.Series
        Leaf values indexed by pattern id, sorted by pattern id; leaf ``i``
        is row ``i``
    merges : tuple of Merge
        The ``N - 1`` merges in the order they happened
    linkage : Linkage
        The criterion the merges were chosen by

    """

    features: pd.Series
    merges: tuple[Merge, ...]
    linkage: Linkage = Linkage.PAPER

    def __post_init__(self) -> None:
        n_leaves = len(self.features)
        if len(self.merges) != n_leaves - 1:
            raise ClusteringError(
                f"{n_leaves} leaves need {n_leaves - 1} merges, "
                f"got {len(self.merges)}"
            )
        sizes = [1] * n_leaves
        consumed = [False] * (2 * n_leaves - 1)
        for step, merge in enumerate(self.merges):
            node = n_leaves + step
            for child in (merge.left, merge.right):
                if not 0 <= child < node or consumed[child]:
                    raise ClusteringError(
                        f"merge {step} uses unavailable node {child}"
                    )
                consumed[child] = True
            if merge.left >= merge.right:
                raise ClusteringError(f"merge {step} is not ordered")
            sizes.append(sizes[merge.left] + sizes[merge.right])
            if sizes[node] != merge.size:
                raise ClusteringError(
                    f"merge {step} claims size {merge.size}, "
                    f"expected {sizes[node]}"
                )

    def __len__(self) -> int:
        return len(self.features)

    @classmethod
    def from_merges(
            cls,
            features: pd.Series,
            merges: Sequence[Sequence[float]],
            linkage: Linkage = Linkage.PAPER
        ) -> Dendrogram:
        """Rebuild a dendrogram from stored ``[left, right, crit, size]``.

        Raises
        ------
        ClusteringError
            If the merges do not form a valid history over the features

        """
        try:
            rows = tuple(
                Merge(int(left), int(right), float(crit), int(size))
                for left, right, crit, size in merges
            )
        except (TypeError, ValueError) as exc:
            raise ClusteringError(f"malformed merge list ({exc})") from exc
        return cls(_ordered_features(features), rows, Linkage(linkage))

    def linkage_matrix(self) -> npt.NDArray[np.float64]:
        """Return the merges as a scipy linkage matrix.

        The matrix can be handed to ``scipy.cluster.hierarchy.dendrogram``
        for plotting. The distance column holds the merge criterion; with a
        non-monotonic criterion scipy may draw crossing links.
        """
        return np.array(
            [
                [merge.left, merge.right, merge.criterion, merge.size]
                for merge in self.merges
            ],
            dtype=np.float64,
        ).reshape(-1, 4)


def agglomerate(
        features: pd.Series,
        linkage: Linkage = Linkage.PAPER
    ) -> Dendrogram:
    """Cluster scalar features bottom-up, one cheapest merge at a time.

    Starting from singletons, every step merges the pair of clusters with
    the smallest criterion. Among pairs sharing the exact minimum, the one
    with the smallest lower node id wins, then the smallest higher node id.

    Parameters
    ----------
    features : pandas.Series
        Feature values indexed by unique pattern ids
    linkage : Linkage
        The merge criterion

    Returns
    -------
    Dendrogram
        The merge history over the features sorted by pattern id

    Raises
    ------
    ClusteringError
        If the features are empty, non-finite or have duplicate ids

    """
    ordered = _ordered_features(features)
    n_leaves = len(ordered)

    sizes = np.ones(n_leaves, dtype=np.float64)
    means = ordered.to_numpy(dtype=np.float64, copy=True)
    scatters = np.zeros(n_leaves, dtype=np.float64)
    nodes = np.arange(n_leaves)
    merges = []

    for step in range(n_leaves - 1):
        criteria = criterion_matrix(sizes, means, scatters, linkage)
        criteria[np.tril_indices(len(nodes))] = np.inf

        rows, cols = np.nonzero(criteria == criteria.min())
        low = np.minimum(nodes[rows], nodes[cols])
        high = np.maximum(nodes[rows], nodes[cols])
        pick = np.lexsort((high, low))[0]
        i, j = rows[pick], cols[pick]

        size, mean, scatter = merged_moments(
            sizes[i], means[i], scatters[i], sizes[j], means[j], scatters[j]
        )
        merges.append(Merge(
            int(low[pick]),
            int(high[pick]),
            max(float(criteria[i, j]), 0.0),
            int(size),
        ))

        # Slot i holds the new node; slot j is removed.
        sizes[i], means[i], scatters[i] = size, mean, scatter
        nodes[i] = n_leaves + step
        sizes = np.delete(sizes, j)
        means = np.delete(means, j)
        scatters = np.delete(scatters, j)
        nodes = np.delete(nodes, j)

    logger.debug(
        "Agglomerated %d features with %s linkage", n_leaves, linkage
    )
    return Dendrogram(ordered, tuple(merges), linkage)


def cut(dendrogram: Dendrogram, k: int) -> pd.Series:
    """Undo the last ``k - 1`` merges and label the resulting clusters.

    Clusters are numbered ``1..k`` by ascending mean feature value, ties
    broken by the position of their first leaf.

    Parameters
    ----------
    dendrogram : Dendrogram
        A complete merge history
    k : int
        Number of clusters, ``1 <= k <= N``

    Returns
    -------
    pandas.Series
        Cluster number of every pattern, indexed by pattern id

    Raises
    ------
    ClusteringError
        If ``k`` is out of range

    """
    n_leaves = len(dendrogram)
    if not 1 <= k <= n_leaves:
        raise ClusteringError(f"k = {k} outside [1, {n_leaves}]")

    leaves = DisjointSet(range(n_leaves))
    # Every node is represented by one of its leaves.
    representative = list(range(n_leaves))
    for merge in dendrogram.merges[:n_leaves - k]:
        leaves.merge(representative[merge.left], representative[merge.right])
        representative.append(representative[merge.left])

    frame = pd.DataFrame({
        "root": [leaves[leaf] for leaf in range(n_leaves)],
        "value": dendrogram.features.to_numpy(),
        "position": np.arange(n_leaves),
    })
    order = (
        frame
        .groupby("root")
        .agg(mean=("value", "mean"), first=("position", "min"))
        .sort_values(["mean", "first"], kind="stable")
    )
    numbering = pd.Series(np.arange(1, len(order) + 1), index=order.index)
    return pd.Series(
        frame["root"].map(numbering).to_numpy(dtype=np.int64),
        index=dendrogram.features.index,
        name=CLUSTER_COL,
    )
