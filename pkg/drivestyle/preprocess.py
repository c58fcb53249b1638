"""For the transformation of raw driver logs into movement patterns."""

from __future__ import annotations

import logging
import math

from collections.abc import Iterable
from dataclasses import dataclass, field, fields
from enum import StrEnum

import numpy as np
import pandas as pd

from .ingest import LOG_COLUMNS, T_COL, X_COL, Y_COL, DriverRecord
from .patterns import (
    MAX_PATTERN_LENGTH,
    MIN_PATTERN_LENGTH,
    MovementPattern,
)

logger = logging.getLogger(__name__)

DEFAULT_MAX_GAP = 60.0


class SplitPolicy(StrEnum):
    """How over-long segments are cut into patterns."""

    BALANCED = "balanced"
    GREEDY = "greedy"


@dataclass(frozen=True)
class PreprocessSettings:
    """Parameters of the preprocessing pipeline."""

    min_len: int = MIN_PATTERN_LENGTH
    max_len: int = MAX_PATTERN_LENGTH
    max_gap: float = DEFAULT_MAX_GAP
    split_policy: SplitPolicy = SplitPolicy.BALANCED

    def __post_init__(self) -> None:
        if not 1 <= self.min_len <= self.max_len:
            raise ValueError(
                f"need 1 <= min_len <= max_len, got {self.min_len}, "
                f"{self.max_len}"
            )
        if not self.max_gap > 0:
            raise ValueError(f"max_gap must be positive, got {self.max_gap}")


@dataclass
class PreprocessSummary:
    """Counts describing one preprocessing run."""

    logs_in: int = 0
    duplicates_removed: int = 0
    time_conflicts_removed: int = 0
    standstill_removed: int = 0
    gap_splits: int = 0
    chunks_dropped: int = 0
    patterns_out: int = 0
    samples_out: int = 0
    per_driver: dict[str, int] = field(default_factory=dict)

    def add(self, other: PreprocessSummary) -> None:
        """Accumulate the counts of another run into this one."""
        for count in fields(self):
            if count.name == "per_driver":
                self.per_driver.update(other.per_driver)
            else:
                setattr(
                    self,
                    count.name,
                    getattr(self, count.name) + getattr(other, count.name),
                )

    def as_dict(self) -> dict[str, int]:
        """Return the scalar counts, for the summary file."""
        return {
            count.name: getattr(self, count.name)
            for count in fields(self)
            if count.name != "per_driver"
        }


def _same_as_previous(logs: pd.DataFrame, columns: list[str]) -> pd.Series:
    # The first row compares against NaN and is never "the same".
    return logs[columns].eq(logs[columns].shift()).all(axis=1)


def dedup_exact(record: DriverRecord) -> DriverRecord:
    """Drop repeated logs left by a sensor sampling the same fix twice.

    Of each run of consecutive logs with identical time stamp and position,
    only the first survives. Order is preserved.
    """
    repeated = _same_as_previous(record.logs, LOG_COLUMNS)
    return record.with_logs(record.logs[~repeated])


def drop_time_conflicts(record: DriverRecord) -> DriverRecord:
    """Drop logs that repeat their predecessor's time at another position.

    Two fixes for one instant cannot both be right. The first one is kept so
    time stamps become strictly increasing.
    """
    conflicting = _same_as_previous(record.logs, [T_COL])
    return record.with_logs(record.logs[~conflicting])


def remove_standstill(record: DriverRecord) -> list[pd.DataFrame]:
    """Remove logs of a car standing still and split at every removal.

    A log whose position equals its predecessor's marks a standing car. The
    first log of a stationary run (the arrival) is kept and closes its
    segment; the rest of the run is dropped.

    Parameters
    ----------
    record : DriverRecord
        A record that went through ``dedup_exact``

    Returns
    -------
    list of pandas.DataFrame
        Contiguous runs in which consecutive positions always differ

    """
    logs = record.logs
    if logs.empty:
        return []
    standing = _same_as_previous(logs, [X_COL, Y_COL])

    # Every removed log starts a new segment for the logs that follow it.
    segment_ids = standing.cumsum()
    kept = logs[~standing]
    return [
        segment.reset_index(drop=True)
        for _, segment in kept.groupby(segment_ids[~standing], sort=True)
    ]


def split_on_gaps(
        segment: pd.DataFrame,
        max_gap: float
    ) -> list[pd.DataFrame]:
    """Split a segment wherever consecutive logs are too far apart in time.

    Parameters
    ----------
    segment : pandas.DataFrame
        Time-sorted logs
    max_gap : float
        Largest admissible time step in seconds

    Returns
    -------
    list of pandas.DataFrame
        Pieces in which no time step exceeds ``max_gap``

    """
    if segment.empty:
        return []
    holes = segment[T_COL].diff() > max_gap
    return [
        piece.reset_index(drop=True)
        for _, piece in segment.groupby(holes.cumsum(), sort=True)
    ]


def _chunk_sizes(
        length: int,
        max_len: int,
        policy: SplitPolicy
    ) -> list[int]:
    if policy == SplitPolicy.GREEDY:
        sizes = [max_len] * (length // max_len)
        if length % max_len:
            sizes.append(length % max_len)
        return sizes
    count = math.ceil(length / max_len)
    return [len(part) for part in np.array_split(np.arange(length), count)]


def enforce_length_bounds(
        segment: pd.DataFrame,
        min_len: int = MIN_PATTERN_LENGTH,
        max_len: int = MAX_PATTERN_LENGTH,
        policy: SplitPolicy = SplitPolicy.BALANCED
    ) -> list[pd.DataFrame]:
    """Cut a segment into chunks whose lengths respect the pattern bounds.

    Over-long segments are split into ``ceil(length / max_len)`` contiguous
    chunks of near equal size, larger chunks first (balanced policy), or
    into ``max_len`` prefixes and a remainder (greedy policy). Chunks shorter
    than ``min_len`` are discarded.

    Parameters
    ----------
    segment : pandas.DataFrame
        Time-sorted logs of one movement
    min_len : int
        Smallest admissible chunk
    max_len : int
        Largest admissible chunk
    policy : SplitPolicy
        Chunking rule for over-long segments

    Returns
    -------
    list of pandas.DataFrame
        The admissible chunks, in time order

    """
    if len(segment) < min_len:
        return []
    chunks = []
    start = 0
    for size in _chunk_sizes(len(segment), max_len, policy):
        if size >= min_len:
            chunks.append(
                segment.iloc[start:start + size].reset_index(drop=True)
            )
        start += size
    return chunks


def _as_pattern(
        pattern_id: str,
        chunk: pd.DataFrame,
        record: DriverRecord
    ) -> MovementPattern:
    return MovementPattern.from_sequences(
        pattern_id,
        chunk[T_COL].to_numpy(),
        chunk[X_COL].to_numpy(),
        chunk[Y_COL].to_numpy(),
        record.coord_mode,
    )


def preprocess_record(
        record: DriverRecord,
        settings: PreprocessSettings
    ) -> tuple[list[MovementPattern], PreprocessSummary]:
    """Turn one driver's logs into movement patterns.

    Returns
    -------
    patterns : list of MovementPattern
        Patterns numbered ``driver_id#k`` in chronological order
    summary : PreprocessSummary
        Counts for this driver

    """
    summary = PreprocessSummary(logs_in=len(record))

    deduplicated = dedup_exact(record)
    summary.duplicates_removed = len(record) - len(deduplicated)
    consistent = drop_time_conflicts(deduplicated)
    summary.time_conflicts_removed = len(deduplicated) - len(consistent)

    runs = remove_standstill(consistent)
    summary.standstill_removed = len(consistent) - sum(map(len, runs))

    patterns = []
    for run in runs:
        pieces = split_on_gaps(run, settings.max_gap)
        summary.gap_splits += len(pieces) - 1
        for piece in pieces:
            chunks = enforce_length_bounds(
                piece,
                settings.min_len,
                settings.max_len,
                settings.split_policy,
            )
            sizes = _chunk_sizes(
                len(piece), settings.max_len, settings.split_policy
            )
            summary.chunks_dropped += len(sizes) - len(chunks)
            for chunk in chunks:
                pattern_id = f"{record.driver_id}#{len(patterns)}"
                patterns.append(_as_pattern(pattern_id, chunk, record))

    summary.patterns_out = len(patterns)
    summary.samples_out = sum(map(len, patterns))
    summary.per_driver[record.driver_id] = len(patterns)
    return patterns, summary


def preprocess_pipeline(
        records: Iterable[DriverRecord],
        settings: PreprocessSettings | None = None
    ) -> tuple[list[MovementPattern], PreprocessSummary]:
    """Run the full preprocessing chain over every driver.

    Each record goes through ``dedup_exact``, ``drop_time_conflicts``,
    ``remove_standstill``, ``split_on_gaps`` and ``enforce_length_bounds``.

    Parameters
    ----------
    records : Iterable[DriverRecord]
        Time-sorted per-driver logs
    settings : PreprocessSettings, optional
        Length bounds, gap threshold and split policy

    Returns
    -------
    patterns : list of MovementPattern
        All patterns, drivers in input order
    summary : PreprocessSummary
        Counts over all drivers

    """
    settings = settings or PreprocessSettings()
    patterns: list[MovementPattern] = []
    summary = PreprocessSummary()
    for record in records:
        driver_patterns, driver_summary = preprocess_record(record, settings)
        patterns.extend(driver_patterns)
        summary.add(driver_summary)

    logger.info(
        "Preprocessed %d logs: %d duplicates, %d time conflicts and %d "
        "standstill logs removed, %d patterns out",
        summary.logs_in,
        summary.duplicates_removed,
        summary.time_conflicts_removed,
        summary.standstill_removed,
        summary.patterns_out,
    )
    return patterns, summary


def pattern_as_record(pattern: MovementPattern) -> DriverRecord:
    """Wrap a pattern as a driver record, to run it through the pipeline."""
    return DriverRecord(
        pattern.pattern_id,
        pd.DataFrame({T_COL: pattern.t, X_COL: pattern.x, Y_COL: pattern.y}),
        pattern.coord_mode,
    )
