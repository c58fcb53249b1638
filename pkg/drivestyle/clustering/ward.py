"""Ward-type merge criteria for clusters of scalar feature values."""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, field
from enum import StrEnum

import numpy as np
import numpy.typing as npt

FloatArray = npt.NDArray[np.float64]


class Linkage(StrEnum):
    """Possible merge criteria."""

    # Size-weighted sum of squared differences over every member pair.
    PAPER = "paper"
    # Classical Ward: increase of the within-cluster sum of squares.
    STANDARD = "standard"


@dataclass(frozen=True)
class ClusterState:
    """A cluster of feature values with cached moments.

    The moments are kept centred (mean and scatter about the mean) rather
    than as raw sums, so criteria stay accurate for values far from zero.

    Attributes
    ----------
    members : tuple of float
        The feature values of the cluster
    size : int
        Number of members
    mean : float
        Arithmetic mean of the members
    scatter : float
        Sum of squared deviations of the members from ``mean``

    """

    members: tuple[float, ...]
    size: int = field(init=False)
    mean: float = field(init=False)
    scatter: float = field(init=False)

    def __post_init__(self) -> None:
        if not self.members:
            raise ValueError("a cluster needs at least one member")
        values = np.asarray(self.members, dtype=np.float64)
        mean = float(values.mean())
        object.__setattr__(self, "size", len(values))
        object.__setattr__(self, "mean", mean)
        object.__setattr__(
            self, "scatter", float(np.sum((values - mean) ** 2))
        )

    @classmethod
    def of(cls, values: Iterable[float]) -> ClusterState:
        """Build a cluster from any iterable of values."""
        return cls(tuple(float(value) for value in values))

    @property
    def total(self) -> float:
        """Sum of the members."""
        return self.size * self.mean

    @property
    def square_total(self) -> float:
        """Sum of the squared members."""
        return self.scatter + self.size * self.mean**2

    def merge(self, other: ClusterState) -> ClusterState:
        """Return the union of two clusters."""
        return ClusterState(self.members + other.members)


def merged_moments(
        size_a: npt.ArrayLike,
        mean_a: npt.ArrayLike,
        scatter_a: npt.ArrayLike,
        size_b: npt.ArrayLike,
        mean_b: npt.ArrayLike,
        scatter_b: npt.ArrayLike
    ) -> tuple[FloatArray, FloatArray, FloatArray]:
    """Size, mean and scatter of merged clusters from their parts."""
    size_a, size_b = np.asarray(size_a), np.asarray(size_b)
    mean_a, mean_b = np.asarray(mean_a), np.asarray(mean_b)
    size = size_a + size_b
    delta = mean_b - mean_a
    mean = mean_a + delta * size_b / size
    scatter = (
        np.asarray(scatter_a)
        + np.asarray(scatter_b)
        + size_a * size_b / size * delta**2
    )
    return size, mean, scatter


def criterion_matrix(
        sizes: FloatArray,
        means: FloatArray,
        scatters: FloatArray,
        linkage: Linkage = Linkage.PAPER
    ) -> FloatArray:
    """Evaluate a merge criterion for every pair of clusters at once.

    Parameters
    ----------
    sizes : numpy.ndarray
        Cluster sizes
    means : numpy.ndarray
        Cluster means
    scatters : numpy.ndarray
        Sums of squared deviations about the cluster means
    linkage : Linkage
        The merge criterion

    Returns
    -------
    numpy.ndarray
        Symmetric matrix whose entry ``(a, b)`` is the criterion of merging
        cluster ``a`` with cluster ``b``

    """
    size_a = sizes[:, np.newaxis]
    size_b = sizes[np.newaxis, :]
    weight = size_a * size_b / (size_a + size_b)
    delta_squared = (means[:, np.newaxis] - means[np.newaxis, :]) ** 2

    if linkage == Linkage.STANDARD:
        return weight * delta_squared

    # Sum over all member pairs of (u - w)^2, expanded about the means.
    pair_sum = (
        size_b * scatters[:, np.newaxis]
        + size_a * scatters[np.newaxis, :]
        + size_a * size_b * delta_squared
    )
    return weight * pair_sum


def _criterion(
        a: ClusterState,
        b: ClusterState,
        linkage: Linkage
    ) -> float:
    matrix = criterion_matrix(
        np.array([a.size, b.size], dtype=np.float64),
        np.array([a.mean, b.mean]),
        np.array([a.scatter, b.scatter]),
        linkage,
    )
    return max(float(matrix[0, 1]), 0.0)


def ward_paper(a: ClusterState, b: ClusterState) -> float:
    """Size-weighted sum of squared differences over all member pairs.

    Computes ``|a||b| / (|a| + |b|) * sum_u sum_w (u - w)^2`` with ``u``
    ranging over the members of ``a`` and ``w`` over those of ``b``, in
    constant time from the cached moments.

    Examples
    --------
    >>> a, b = ClusterState.of([1, 2]), ClusterState.of([4])
    >>> round(ward_paper(a, b), 6)
    8.666667

    """
    return _criterion(a, b, Linkage.PAPER)


def ward_standard(a: ClusterState, b: ClusterState) -> float:
    """Increase of the within-cluster sum of squares caused by a merge.

    Examples
    --------
    >>> a, b = ClusterState.of([1, 2]), ClusterState.of([4])
    >>> round(ward_standard(a, b), 6)
    4.166667

    """
    return _criterion(a, b, Linkage.STANDARD)


def ward_criterion(
        a: ClusterState,
        b: ClusterState,
        linkage: Linkage = Linkage.PAPER
    ) -> float:
    """Evaluate the merge criterion selected by ``linkage``."""
    if linkage == Linkage.STANDARD:
        return ward_standard(a, b)
    return ward_paper(a, b)
