"""Movement patterns and the pattern file format shared by all stages."""

from __future__ import annotations

import json
import logging
import sys

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from enum import StrEnum
from typing import Any, TextIO

import numpy as np
import numpy.typing as npt

from .errors import PatternError
from . import output

logger = logging.getLogger(__name__)

MIN_PATTERN_LENGTH = 10
MAX_PATTERN_LENGTH = 24


class CoordMode(StrEnum):
    """How the two position coordinates of a pattern are to be read."""

    GEODETIC = "geodetic"  # x = longitude, y = latitude, degrees
    PLANAR = "planar"  # x, y in metres


@dataclass(frozen=True, eq=False)
class MovementPattern:
    """A contiguous run of samples during which the car never stands still.

    Attributes
    ----------
    pattern_id : str
        ``driver_id#k`` for patterns cut from logs, free-form otherwise
    t : numpy.ndarray
        Epoch-second time stamps, strictly increasing
    x : numpy.ndarray
        Longitudes (geodetic) or metres east (planar)
    y : numpy.ndarray
        Latitudes (geodetic) or metres north (planar)
    coord_mode : CoordMode
        Interpretation of ``x`` and ``y``

    """

    pattern_id: str
    t: npt.NDArray[np.int64]
    x: npt.NDArray[np.float64]
    y: npt.NDArray[np.float64]
    coord_mode: CoordMode = CoordMode.GEODETIC

    def __post_init__(self) -> None:
        if not len(self.t) == len(self.x) == len(self.y):
            raise PatternError(
                self.pattern_id, "t, x and y differ in length"
            )

    def __len__(self) -> int:
        return len(self.t)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MovementPattern):
            return NotImplemented
        return (
            self.pattern_id == other.pattern_id
            and self.coord_mode == other.coord_mode
            and np.array_equal(self.t, other.t)
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.y, other.y)
        )

    __hash__ = None  # type: ignore[assignment]

    @classmethod
    def from_sequences(
            cls,
            pattern_id: str,
            t: Sequence[int] | npt.ArrayLike,
            x: Sequence[float] | npt.ArrayLike,
            y: Sequence[float] | npt.ArrayLike,
            coord_mode: CoordMode = CoordMode.GEODETIC
        ) -> MovementPattern:
        """Build a pattern from any array-like inputs."""
        return cls(
            pattern_id,
            np.asarray(t, dtype=np.int64),
            np.asarray(x, dtype=np.float64),
            np.asarray(y, dtype=np.float64),
            CoordMode(coord_mode),
        )


def validate_pattern(
        pattern: MovementPattern,
        min_len: int = MIN_PATTERN_LENGTH,
        max_len: int = MAX_PATTERN_LENGTH
    ) -> None:
    """Check every movement pattern invariant.

    Parameters
    ----------
    pattern : MovementPattern
        The pattern to check
    min_len : int
        Smallest admissible number of samples
    max_len : int
        Largest admissible number of samples

    Raises
    ------
    PatternError
        Naming the first invariant that does not hold

    """
    if not min_len <= len(pattern) <= max_len:
        raise PatternError(
            pattern.pattern_id,
            f"length {len(pattern)} outside [{min_len}, {max_len}]",
        )
    if np.any(np.diff(pattern.t) <= 0):
        raise PatternError(
            pattern.pattern_id, "time stamps are not strictly increasing"
        )
    standing = (np.diff(pattern.x) == 0) & (np.diff(pattern.y) == 0)
    if np.any(standing):
        raise PatternError(
            pattern.pattern_id, "two consecutive positions are identical"
        )
    if not (np.all(np.isfinite(pattern.x)) and np.all(np.isfinite(pattern.y))):
        raise PatternError(pattern.pattern_id, "non-finite position")


def pattern_to_dict(pattern: MovementPattern) -> dict[str, Any]:
    """Convert a pattern to its pattern-file JSON object."""
    return {
        "id": pattern.pattern_id,
        "coord_mode": str(pattern.coord_mode),
        "t": [int(stamp) for stamp in pattern.t],
        "x": [float(value) for value in pattern.x],
        "y": [float(value) for value in pattern.y],
    }


def pattern_from_dict(obj: dict[str, Any]) -> MovementPattern:
    """Convert a pattern-file JSON object back to a pattern.

    Raises
    ------
    PatternError
        If a required key is missing or the arrays disagree in length

    """
    if not isinstance(obj, dict):
        raise PatternError("?", "pattern entries must be JSON objects")
    try:
        return MovementPattern.from_sequences(
            str(obj["id"]),
            obj["t"],
            obj["x"],
            obj["y"],
            CoordMode(obj.get("coord_mode", CoordMode.GEODETIC)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, PatternError):
            raise
        raise PatternError(
            str(obj.get("id", "?")), f"malformed pattern object ({exc})"
        ) from exc


def write_patterns(
        patterns: Iterable[MovementPattern],
        stream: TextIO
    ) -> int:
    """Write patterns as a pattern-file JSON array.

    Coordinates are rendered with nine significant digits.

    Returns
    -------
    int
        Number of patterns written

    """
    objects = [pattern_to_dict(pattern) for pattern in patterns]
    stream.write(output.dumps(objects))
    return len(objects)


def read_patterns(
        stream: TextIO,
        min_len: int = 1,
        max_len: int = sys.maxsize
    ) -> list[MovementPattern]:
    """Read a pattern-file JSON array and check every pattern in it.

    Parameters
    ----------
    stream : TextIO
        The pattern file
    min_len : int
        Smallest admissible number of samples
    max_len : int
        Largest admissible number of samples

    Returns
    -------
    list of MovementPattern
        The patterns, in file order

    Raises
    ------
    PatternError
        If the document is not an array of pattern objects, a pattern breaks
        an invariant or two patterns share an id

    """
    try:
        document = json.load(stream)
    except json.JSONDecodeError as exc:
        raise PatternError("?", f"pattern file is not JSON ({exc})") from exc
    if not isinstance(document, list):
        raise PatternError("?", "pattern file must hold a JSON array")
    patterns = [pattern_from_dict(obj) for obj in document]
    seen: set[str] = set()
    for pattern in patterns:
        if pattern.pattern_id in seen:
            raise PatternError(pattern.pattern_id, "duplicate pattern id")
        seen.add(pattern.pattern_id)
        validate_pattern(pattern, min_len, max_len)
    logger.debug("Read %d patterns", len(patterns))
    return patterns
