"""Parsing raw GPS log files into per-driver, time-sorted tables."""

from __future__ import annotations

import json
import logging
import os

from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from typing import NamedTuple, TypedDict, cast

import numpy as np
import pandas as pd

from .errors import ConfigParseError, DatasetReadError, LineRejectedError
from .patterns import CoordMode

logger = logging.getLogger(__name__)

TDRIVE_TIME_FORMAT = "%Y-%m-%d %H:%M:%S"
TDRIVE_FIELDS = 4
DEFAULT_UTC_OFFSET_HOURS = 8.0  # Beijing
MAX_UTC_OFFSET_HOURS = 14.0
DEFAULT_LOG_SUFFIX = ".txt"
COORDINATE_DECIMALS = 6

DRIVER_COL = "driver_id"
T_COL = "t"
X_COL = "x"
Y_COL = "y"
LOG_COLUMNS = [T_COL, X_COL, Y_COL]


@dataclass(frozen=True)
class GpsLog:
    """One timestamped geographic sample of one driver."""

    driver_id: str
    timestamp: int
    longitude: float
    latitude: float

    def __post_init__(self) -> None:
        if self.timestamp < 0:
            raise ValueError(f"negative timestamp {self.timestamp}")
        if not -180.0 <= self.longitude <= 180.0:  # noqa: PLR2004
            raise ValueError(f"longitude {self.longitude} out of range")
        if not -90.0 <= self.latitude <= 90.0:  # noqa: PLR2004
            raise ValueError(f"latitude {self.latitude} out of range")


@dataclass(frozen=True)
class IngestSettings:
    """Parameters of log file loading."""

    utc_offset_hours: float = DEFAULT_UTC_OFFSET_HOURS
    suffix: str = DEFAULT_LOG_SUFFIX

    def __post_init__(self) -> None:
        if abs(self.utc_offset_hours) > MAX_UTC_OFFSET_HOURS:
            raise ValueError(
                f"UTC offset {self.utc_offset_hours} h is out of range"
            )


@dataclass(frozen=True)
class Region:
    """A closed longitude/latitude bounding box."""

    min_longitude: float
    max_longitude: float
    min_latitude: float
    max_latitude: float

    def __post_init__(self) -> None:
        if not (
            self.min_longitude < self.max_longitude
            and self.min_latitude < self.max_latitude
        ):
            raise ValueError(f"degenerate region {self}")

    def contains(
            self,
            longitude: pd.Series[float],
            latitude: pd.Series[float]
        ) -> pd.Series[bool]:
        """Return a mask of the points inside the closed box."""
        return (
            longitude.between(self.min_longitude, self.max_longitude)
            & latitude.between(self.min_latitude, self.max_latitude)
        )


@dataclass(frozen=True, eq=False)
class DriverRecord:
    """All logs of one driver, sorted by time stamp.

    ``logs`` has the columns ``t`` (epoch seconds), ``x`` and ``y``. In
    geodetic mode ``x`` is the longitude and ``y`` the latitude.
    """

    driver_id: str
    logs: pd.DataFrame
    coord_mode: CoordMode = CoordMode.GEODETIC

    def __len__(self) -> int:
        return len(self.logs)

    def with_logs(self, logs: pd.DataFrame) -> DriverRecord:
        """Return a record of the same driver holding other logs."""
        return DriverRecord(
            self.driver_id,
            logs.reset_index(drop=True),
            self.coord_mode,
        )


class Dataset(NamedTuple):
    """The result of loading a set of log files."""

    records: list[DriverRecord]
    lines_read: int
    lines_skipped: int


class CsvLayout(TypedDict):
    """Column mapping for the generic CSV adapter."""

    driver_col: int
    time_col: int
    time_format: str
    lon_col: int
    lat_col: int
    has_header: bool


def _timezone(utc_offset_hours: float) -> timezone:
    return timezone(timedelta(hours=utc_offset_hours))


def _build_log(
        line: str,
        driver_id: str,
        wall_time: str,
        time_format: str,
        longitude: str,
        latitude: str,
        utc_offset_hours: float
    ) -> GpsLog:
    try:
        stamp = datetime.strptime(wall_time.strip(), time_format)
    except ValueError as exc:
        raise LineRejectedError(
            line, f"unparsable time {wall_time!r}"
        ) from exc
    stamp = stamp.replace(tzinfo=_timezone(utc_offset_hours))
    try:
        return GpsLog(
            driver_id.strip(),
            int(stamp.timestamp()),
            float(longitude),
            float(latitude),
        )
    except ValueError as exc:
        raise LineRejectedError(line, str(exc)) from exc


def parse_tdrive_line(
        line: str,
        utc_offset_hours: float = DEFAULT_UTC_OFFSET_HOURS
    ) -> GpsLog:
    """Parse one line of the T-Drive taxi log format.

    The format is ``driver_id,YYYY-MM-DD HH:MM:SS,longitude,latitude`` with
    wall times in a fixed UTC offset.

    Parameters
    ----------
    line : str
        One line of a T-Drive file, with or without its line terminator
    utc_offset_hours : float
        Offset of the recorded wall times from UTC

    Returns
    -------
    GpsLog
        The parsed log

    Raises
    ------
    LineRejectedError
        On a wrong field count, an unparsable time stamp or an out of range
        coordinate

    """
    stripped = line.strip()
    fields = stripped.split(",")
    if len(fields) != TDRIVE_FIELDS:
        raise LineRejectedError(
            stripped, f"expected {TDRIVE_FIELDS} fields, got {len(fields)}"
        )
    driver_id, wall_time, longitude, latitude = fields
    return _build_log(
        stripped,
        driver_id,
        wall_time,
        TDRIVE_TIME_FORMAT,
        longitude,
        latitude,
        utc_offset_hours,
    )


def format_tdrive_line(
        log: GpsLog,
        utc_offset_hours: float = DEFAULT_UTC_OFFSET_HOURS
    ) -> str:
    """Render a log in the T-Drive line format, without terminator."""
    wall_time = datetime.fromtimestamp(
        log.timestamp, _timezone(utc_offset_hours)
    ).strftime(TDRIVE_TIME_FORMAT)
    return (
        f"{log.driver_id},{wall_time},"
        f"{log.longitude:.{COORDINATE_DECIMALS}f},"
        f"{log.latitude:.{COORDINATE_DECIMALS}f}"
    )


def load_csv_layout(path: str) -> CsvLayout:
    """Read a generic CSV column mapping from a JSON file.

    Raises
    ------
    ConfigParseError
        If a mapping key is missing or has the wrong type

    """
    with open(path, encoding="utf-8") as layout_file:
        try:
            raw = json.load(layout_file)
        except json.JSONDecodeError as exc:
            raise ConfigParseError("CSV layout", f"({exc})") from exc
    if not isinstance(raw, dict):
        raise ConfigParseError("CSV layout", f"(in {path})")
    expected: dict[str, type] = {
        "driver_col": int,
        "time_col": int,
        "time_format": str,
        "lon_col": int,
        "lat_col": int,
        "has_header": bool,
    }
    for key, kind in expected.items():
        if not isinstance(raw.get(key), kind):
            raise ConfigParseError(f"CSV layout {key}", f"(in {path})")
    return cast(CsvLayout, {key: raw[key] for key in expected})


def parse_csv_line(
        line: str,
        layout: CsvLayout,
        utc_offset_hours: float = DEFAULT_UTC_OFFSET_HOURS
    ) -> GpsLog:
    """Parse one line of a generic CSV file described by a layout.

    Raises
    ------
    LineRejectedError
        On a short line, an unparsable time stamp or an out of range
        coordinate

    """
    stripped = line.strip()
    fields = stripped.split(",")
    needed = 1 + max(
        layout["driver_col"],
        layout["time_col"],
        layout["lon_col"],
        layout["lat_col"],
    )
    if len(fields) < needed:
        raise LineRejectedError(
            stripped, f"expected at least {needed} fields, got {len(fields)}"
        )
    return _build_log(
        stripped,
        fields[layout["driver_col"]],
        fields[layout["time_col"]],
        layout["time_format"],
        fields[layout["lon_col"]],
        fields[layout["lat_col"]],
        utc_offset_hours,
    )


def _decode(raw: bytes) -> str:
    try:
        return raw.decode("ascii")
    except UnicodeDecodeError as exc:
        raise LineRejectedError(
            raw.decode("ascii", errors="replace").strip(), "non-ASCII byte"
        ) from exc


def _read_file(
        path: str,
        parse: Callable[[str], GpsLog],
        skip_header: bool
    ) -> tuple[list[GpsLog], int, int]:
    logs: list[GpsLog] = []
    lines_read = 0
    skipped = 0
    try:
        # Decoded per line: a bad byte rejects only its own line.
        with open(path, "rb") as log_file:
            if skip_header:
                next(log_file, None)
            for raw in log_file:
                if not raw.strip():
                    continue
                lines_read += 1
                try:
                    logs.append(parse(_decode(raw)))
                except LineRejectedError as exc:
                    skipped += 1
                    logger.debug("%s: %s", path, exc)
    except OSError as exc:
        raise DatasetReadError(path) from exc
    logger.debug(
        "%s: %d lines, %d rejected", path, lines_read, skipped
    )
    return logs, lines_read, skipped


def group_logs(logs: Iterable[GpsLog]) -> list[DriverRecord]:
    """Group logs by driver and sort each group by time stamp.

    The sort is stable, so logs with equal time stamps keep their input
    order. Drivers come out ordered by driver id.
    """
    table = pd.DataFrame(
        [
            (log.driver_id, log.timestamp, log.longitude, log.latitude)
            for log in logs
        ],
        columns=[DRIVER_COL, *LOG_COLUMNS],
    ).astype({T_COL: np.int64, X_COL: np.float64, Y_COL: np.float64})

    return [
        DriverRecord(
            str(driver_id),
            group
            .sort_values(T_COL, kind="stable")
            [LOG_COLUMNS]
            .reset_index(drop=True),
        )
        for driver_id, group in table.groupby(DRIVER_COL, sort=True)
    ]


def load_dataset(
        paths: Sequence[str],
        utc_offset_hours: float = DEFAULT_UTC_OFFSET_HOURS,
        layout: CsvLayout | None = None
    ) -> Dataset:
    """Load log files into per-driver records.

    Parameters
    ----------
    paths : Sequence[str]
        Files holding one or more drivers' lines each
    utc_offset_hours : float
        Offset of the recorded wall times from UTC
    layout : CsvLayout, optional
        Generic CSV column mapping; T-Drive lines are expected when omitted

    Returns
    -------
    Dataset
        Records grouped by driver and sorted by time, with line counts

    Raises
    ------
    DatasetReadError
        If any file cannot be read

    """
    parse: Callable[[str], GpsLog]
    if layout is None:
        def parse(line: str) -> GpsLog:
            return parse_tdrive_line(line, utc_offset_hours)
        skip_header = False
    else:
        def parse(line: str) -> GpsLog:
            return parse_csv_line(line, layout, utc_offset_hours)
        skip_header = layout["has_header"]

    all_logs: list[GpsLog] = []
    lines_read = 0
    skipped = 0
    for path in paths:
        logs, file_lines, file_skipped = _read_file(path, parse, skip_header)
        all_logs.extend(logs)
        lines_read += file_lines
        skipped += file_skipped

    records = group_logs(all_logs)
    logger.info(
        "Loaded %d logs of %d drivers from %d files, skipped %d lines",
        len(all_logs), len(records), len(paths), skipped,
    )
    return Dataset(records, lines_read, skipped)


def list_log_files(
        directory: str,
        suffix: str = DEFAULT_LOG_SUFFIX
    ) -> list[str]:
    """List the log files of a directory tree in a stable order."""
    found = []
    for root, _, filenames in os.walk(directory):
        found.extend(
            os.path.join(root, name)
            for name in filenames
            if name.endswith(suffix)
        )
    return sorted(found)


def filter_region(record: DriverRecord, region: Region) -> DriverRecord:
    """Keep only the logs inside a closed bounding box, in their order."""
    inside = region.contains(record.logs[X_COL], record.logs[Y_COL])
    return record.with_logs(record.logs[inside])
