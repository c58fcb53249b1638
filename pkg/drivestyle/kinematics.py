"""Velocity, acceleration and jerk of movement patterns."""

from __future__ import annotations

from dataclasses import dataclass
from enum import StrEnum

import numpy as np
import numpy.typing as npt
import pandas as pd
import pyproj

from .errors import PatternError
from .patterns import CoordMode, MovementPattern

EARTH_RADIUS_M = 6_371_000.0
MIN_JERK_LENGTH = 4
WGS84 = pyproj.Geod(ellps="WGS84")

FloatArray = npt.NDArray[np.float64]


class Geodesy(StrEnum):
    """Distance model for geodetic patterns."""

    HAVERSINE = "haversine"  # sphere of radius EARTH_RADIUS_M
    WGS84 = "wgs84"  # ellipsoid, through pyproj


@dataclass(frozen=True)
class KinematicSeries:
    """Divided-difference derivatives of one movement pattern.

    Each series carries the times its samples are anchored at: the midpoints
    of the two times that produced the difference.
    """

    speeds: FloatArray
    speed_times: FloatArray
    accelerations: FloatArray
    acceleration_times: FloatArray
    jerks: FloatArray
    jerk_times: FloatArray


def haversine_array(
        lon1: npt.ArrayLike,
        lat1: npt.ArrayLike,
        lon2: npt.ArrayLike,
        lat2: npt.ArrayLike
    ) -> FloatArray:
    """Great-circle distances between arrays of points, in metres.

    Parameters
    ----------
    lon1, lat1 : array_like
        Longitudes and latitudes of the first points, in degrees
    lon2, lat2 : array_like
        Longitudes and latitudes of the second points, in degrees

    Returns
    -------
    numpy.ndarray
        Distances on a sphere of radius ``EARTH_RADIUS_M``

    """
    phi1, lam1, phi2, lam2 = map(np.radians, (lat1, lon1, lat2, lon2))
    a = (
        np.sin((phi2 - phi1) / 2) ** 2
        + np.cos(phi1) * np.cos(phi2) * np.sin((lam2 - lam1) / 2) ** 2
    )
    # Clip guards arcsin against rounding just above one for antipodes.
    return np.asarray(
        2 * EARTH_RADIUS_M * np.arcsin(np.sqrt(np.clip(a, 0.0, 1.0))),
        dtype=np.float64,
    )


def haversine_m(
        p1: tuple[float, float],
        p2: tuple[float, float]
    ) -> float:
    """Great-circle distance between two (longitude, latitude) points.

    Examples
    --------
    >>> round(haversine_m((116.0, 40.0), (116.0, 41.0)), 2)
    111194.93

    """
    return float(haversine_array(p1[0], p1[1], p2[0], p2[1]))


def step_distances(
        pattern: MovementPattern,
        geodesy: Geodesy = Geodesy.HAVERSINE
    ) -> FloatArray:
    """Distances between consecutive positions of a pattern, in metres."""
    if pattern.coord_mode == CoordMode.PLANAR:
        return np.hypot(np.diff(pattern.x), np.diff(pattern.y))
    if geodesy == Geodesy.WGS84:
        _, _, distances = WGS84.inv(
            pattern.x[:-1], pattern.y[:-1], pattern.x[1:], pattern.y[1:]
        )
        return np.asarray(distances, dtype=np.float64)
    return haversine_array(
        pattern.x[:-1], pattern.y[:-1], pattern.x[1:], pattern.y[1:]
    )


def derivative_series(
        values: npt.ArrayLike,
        times: npt.ArrayLike
    ) -> tuple[FloatArray, FloatArray]:
    """First divided differences of a series on an irregular time grid.

    Parameters
    ----------
    values : array_like
        Samples of the series
    times : array_like
        Strictly increasing sample times, same length as ``values``

    Returns
    -------
    derivatives : numpy.ndarray
        ``(values[i+1] - values[i]) / (times[i+1] - times[i])``
    midpoint_times : numpy.ndarray
        ``(times[i] + times[i+1]) / 2``

    """
    values = np.asarray(values, dtype=np.float64)
    times = np.asarray(times, dtype=np.float64)
    return np.diff(values) / np.diff(times), (times[:-1] + times[1:]) / 2


def speed_series(
        pattern: MovementPattern,
        geodesy: Geodesy = Geodesy.HAVERSINE
    ) -> tuple[FloatArray, FloatArray]:
    """Path speeds between consecutive samples, with their midpoint times.

    Speeds are unsigned: distance covered over elapsed time.
    """
    times = pattern.t.astype(np.float64)
    return (
        step_distances(pattern, geodesy) / np.diff(times),
        (times[:-1] + times[1:]) / 2,
    )


def kinematics_of(
        pattern: MovementPattern,
        geodesy: Geodesy = Geodesy.HAVERSINE
    ) -> KinematicSeries:
    """Compute speed, acceleration and jerk of a pattern.

    Raises
    ------
    PatternError
        If the pattern has fewer than four samples

    """
    if len(pattern) < MIN_JERK_LENGTH:
        raise PatternError(pattern.pattern_id, "pattern too short for jerk")
    speeds, speed_times = speed_series(pattern, geodesy)
    accelerations, acceleration_times = derivative_series(
        speeds, speed_times
    )
    jerks, jerk_times = derivative_series(accelerations, acceleration_times)
    if not np.all(np.isfinite(jerks)):
        raise PatternError(pattern.pattern_id, "non-finite derivatives")
    return KinematicSeries(
        speeds,
        speed_times,
        accelerations,
        acceleration_times,
        jerks,
        jerk_times,
    )


def kinematics_frame(
        pattern_id: str,
        series: KinematicSeries
    ) -> pd.DataFrame:
    """Long-format table ``pattern_id, kind, t, value`` of a series."""
    return pd.concat(
        [
            pd.DataFrame({
                "pattern_id": pattern_id,
                "kind": kind,
                "t": times,
                "value": values,
            })
            for kind, values, times in (
                ("speed", series.speeds, series.speed_times),
                ("acceleration", series.accelerations,
                 series.acceleration_times),
                ("jerk", series.jerks, series.jerk_times),
            )
        ],
        ignore_index=True,
    )
