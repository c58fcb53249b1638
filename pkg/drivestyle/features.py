"""Scalar driving-style features of movement patterns."""

from __future__ import annotations

import logging
import math

from collections.abc import Iterable
from dataclasses import dataclass
from enum import StrEnum
from typing import TextIO

import numpy as np
import numpy.typing as npt
import pandas as pd

from . import output
from .errors import DrivestyleError, FeatureError
from .kinematics import (
    Geodesy,
    KinematicSeries,
    kinematics_frame,
    kinematics_of,
)
from .patterns import MovementPattern

logger = logging.getLogger(__name__)

ID_COL = "pattern_id"
OMEGA_COL = "omega"
JERK_MEAN_COL = "jerk_mean"
JERK_STD_COL = "jerk_std"
MMK_RATIO_COL = "mmk_ratio"
MMK_CLASS_COL = "mmk_class"
FEATURE_COLUMNS = [
    ID_COL,
    OMEGA_COL,
    JERK_MEAN_COL,
    JERK_STD_COL,
    MMK_RATIO_COL,
    MMK_CLASS_COL,
]
NUMERIC_FEATURES = [OMEGA_COL, JERK_MEAN_COL, JERK_STD_COL, MMK_RATIO_COL]

MMK_WINDOW = 10.0
MMK_NORM_THRESHOLD = 0.5
MMK_AGG_THRESHOLD = 1.0
INFINITE_RATIO = 1e12
# exp(-1 / sqrt(sigma)) rounds to 1.0 for sigma beyond about 1e32.
OMEGA_CEILING = math.nextafter(1.0, 0.0)


class MmkClass(StrEnum):
    """Labels of the windowed jerk-ratio classifier."""

    DEFENSIVE = "defensive"
    CALM = "calm"
    NORMAL = "normal"
    AGGRESSIVE = "aggressive"


@dataclass(frozen=True)
class FeatureSettings:
    """Parameters of the feature stage."""

    mmk_window: float = MMK_WINDOW
    norm_threshold: float = MMK_NORM_THRESHOLD
    agg_threshold: float = MMK_AGG_THRESHOLD
    three_way: bool = False
    jerk_abs: bool = False
    geodesy: Geodesy = Geodesy.HAVERSINE

    def __post_init__(self) -> None:
        if not self.mmk_window > 0:
            raise ValueError(
                f"mmk_window must be positive, got {self.mmk_window}"
            )
        if not 0 <= self.norm_threshold <= self.agg_threshold:
            raise ValueError(
                "need 0 <= norm_threshold <= agg_threshold, got "
                f"{self.norm_threshold}, {self.agg_threshold}"
            )


@dataclass(frozen=True)
class FeatureRecord:
    """The features of one movement pattern."""

    pattern_id: str
    omega: float
    jerk_mean: float
    jerk_std: float
    mmk_ratio: float
    mmk_class: MmkClass

    def __post_init__(self) -> None:
        if not 0 <= self.omega < 1:
            raise FeatureError(f"omega {self.omega} outside [0, 1)")
        if self.jerk_std < 0:
            raise FeatureError(f"negative jerk_std {self.jerk_std}")


def _checked(jerks: npt.ArrayLike) -> npt.NDArray[np.float64]:
    values = np.asarray(jerks, dtype=np.float64)
    if values.size == 0:
        raise FeatureError("empty jerk series")
    if not np.all(np.isfinite(values)):
        raise FeatureError("non-finite jerk value")
    return values


def jerk_stats(jerks: npt.ArrayLike) -> tuple[float, float]:
    """Return the mean and population standard deviation of a jerk series.

    Raises
    ------
    FeatureError
        If the series is empty or holds a non-finite value

    """
    values = _checked(jerks)
    return float(values.mean()), float(values.std())


def omega(jerks: npt.ArrayLike) -> float:
    """Compute the jerk-based driving-style feature of a pattern.

    The feature is ``exp(-1 / sqrt(sigma))`` with ``sigma`` the population
    standard deviation of the jerks. It grows from 0 for perfectly smooth
    driving towards 1 for erratic or noisy patterns.

    Parameters
    ----------
    jerks : array_like
        Jerk samples of one pattern, m/s^3

    Returns
    -------
    float
        A value in ``[0, 1)``; exactly 0 when ``sigma`` is 0, and capped
        at the largest float below 1 for astronomically large ``sigma``

    Raises
    ------
    FeatureError
        If the series is empty or holds a non-finite value

    Examples
    --------
    >>> round(omega([-1.0, 1.0, -1.0, 1.0]), 6)
    0.367879

    """
    _, sigma = jerk_stats(jerks)
    if sigma == 0:
        return 0.0
    return min(math.exp(-1 / math.sqrt(sigma)), OMEGA_CEILING)


def window_ratio(jerks: npt.NDArray[np.float64]) -> float:
    """Return the spread-to-level ratio of the jerks inside one window."""
    sigma = float(jerks.std())
    if sigma == 0:
        return 0.0
    level = abs(float(jerks.mean()))
    if level == 0:
        return INFINITE_RATIO
    return sigma / level


def mmk_classify(
        ratio: float,
        settings: FeatureSettings
    ) -> MmkClass:
    """Label a median window ratio."""
    if ratio >= settings.agg_threshold:
        return MmkClass.AGGRESSIVE
    if not settings.three_way:
        return MmkClass.DEFENSIVE
    if ratio >= settings.norm_threshold:
        return MmkClass.NORMAL
    return MmkClass.CALM


def mmk_feature(
        series: KinematicSeries,
        settings: FeatureSettings | None = None
    ) -> tuple[float, MmkClass]:
    """Classify a pattern by the windowed ratio of jerk spread to jerk level.

    The jerk samples are grouped into consecutive tumbling windows of
    ``mmk_window`` seconds by midpoint time, the first window opening at the
    first jerk. Each non-empty window contributes the ratio of its standard
    deviation to its absolute mean, and the median of these ratios is
    compared with the thresholds.

    Parameters
    ----------
    series : KinematicSeries
        Kinematics of the pattern
    settings : FeatureSettings, optional
        Window length, thresholds and two- or three-way mode

    Returns
    -------
    ratio : float
        Median window ratio
    label : MmkClass
        ``aggressive`` at or above ``agg_threshold``, otherwise
        ``defensive`` (or ``normal`` / ``calm`` in three-way mode)

    """
    settings = settings or FeatureSettings()
    jerks = series.jerks
    times = series.jerk_times
    windows = np.floor((times - times[0]) / settings.mmk_window)
    ratios = [
        window_ratio(jerks[windows == window])
        for window in np.unique(windows)
    ]
    ratio = float(np.median(ratios))
    return ratio, mmk_classify(ratio, settings)


def feature_record(
        pattern: MovementPattern,
        settings: FeatureSettings | None = None
    ) -> tuple[FeatureRecord, KinematicSeries]:
    """Compute every feature of one pattern.

    Raises
    ------
    PatternError
        If the pattern is too short for jerk
    FeatureError
        If the jerk series is unusable

    """
    settings = settings or FeatureSettings()
    series = kinematics_of(pattern, settings.geodesy)
    jerks = np.abs(series.jerks) if settings.jerk_abs else series.jerks
    jerk_mean, jerk_std = jerk_stats(jerks)
    ratio, label = mmk_feature(series, settings)
    record = FeatureRecord(
        pattern.pattern_id,
        omega(jerks),
        jerk_mean,
        jerk_std,
        ratio,
        label,
    )
    return record, series


def feature_table(
        patterns: Iterable[MovementPattern],
        settings: FeatureSettings | None = None,
        kinematics: list[pd.DataFrame] | None = None
    ) -> pd.DataFrame:
    """Compute the features table of a set of patterns.

    Patterns whose features cannot be computed are skipped with a warning.

    Parameters
    ----------
    patterns : Iterable[MovementPattern]
        Preprocessed patterns
    settings : FeatureSettings, optional
        Feature stage parameters
    kinematics : list of pandas.DataFrame, optional
        When given, receives the long-format kinematics of every pattern that
        produced features

    Returns
    -------
    pandas.DataFrame
        One row per pattern, columns ``FEATURE_COLUMNS``, sorted by
        ``pattern_id``

    """
    settings = settings or FeatureSettings()
    records = []
    skipped = 0
    for pattern in sorted(patterns, key=lambda pattern: pattern.pattern_id):
        try:
            record, series = feature_record(pattern, settings)
        except DrivestyleError as exc:
            skipped += 1
            logger.warning("Skipping pattern: %s", exc)
            continue
        records.append(record)
        if kinematics is not None:
            kinematics.append(kinematics_frame(pattern.pattern_id, series))

    logger.info(
        "Computed features of %d patterns, skipped %d", len(records), skipped
    )
    table = pd.DataFrame(
        [
            (
                record.pattern_id,
                record.omega,
                record.jerk_mean,
                record.jerk_std,
                record.mmk_ratio,
                str(record.mmk_class),
            )
            for record in records
        ],
        columns=FEATURE_COLUMNS,
    )
    return table.astype({column: np.float64 for column in NUMERIC_FEATURES})


def write_feature_table(table: pd.DataFrame, stream: TextIO) -> None:
    """Write a features table as CSV with pinned float rendering."""
    table[FEATURE_COLUMNS].to_csv(
        stream,
        index=False,
        float_format=output.FLOAT_FORMAT,
        lineterminator="\n",
    )


def read_feature_table(stream: TextIO | str) -> pd.DataFrame:
    """Read a features CSV back into a table.

    Raises
    ------
    FeatureError
        If a required column is missing

    """
    table = pd.read_csv(stream, dtype={ID_COL: str, MMK_CLASS_COL: str})
    missing = [column for column in FEATURE_COLUMNS if column not in table]
    if missing:
        raise FeatureError(f"features file lacks columns {missing}")
    return table[FEATURE_COLUMNS]


def sorted_feature_curve(
        table: pd.DataFrame,
        feature_name: str
    ) -> pd.DataFrame:
    """Sort the values of one feature ascending, with 1-based ranks.

    Parameters
    ----------
    table : pandas.DataFrame
        A features table
    feature_name : str
        One of ``NUMERIC_FEATURES``

    Returns
    -------
    pandas.DataFrame
        Columns ``rank`` and ``value``

    Raises
    ------
    FeatureError
        If the feature name is unknown or the table is empty

    """
    if feature_name not in NUMERIC_FEATURES:
        raise FeatureError(f"unknown feature {feature_name!r}")
    if table.empty:
        raise FeatureError("cannot sort the features of an empty table")
    values = np.sort(table[feature_name].to_numpy(dtype=np.float64))
    return pd.DataFrame({
        "rank": np.arange(1, len(values) + 1),
        "value": values,
    })


def largest_gap(curve: pd.DataFrame) -> int:
    """Return the number of curve points below its largest consecutive gap.

    For a curve ``v_1 <= ... <= v_n`` this is the ``i`` maximising
    ``v_{i+1} - v_i``, the first one on ties; 0 for a single point.
    """
    if len(curve) < 2:  # noqa: PLR2004
        return 0
    return int(np.argmax(np.diff(curve["value"].to_numpy()))) + 1
