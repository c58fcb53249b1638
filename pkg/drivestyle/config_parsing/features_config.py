"""Utilities for parsing kinematics and features configuration."""

from typing import Optional

from ..errors import ConfigParseError
from ..features import FeatureSettings
from ..kinematics import Geodesy
from .config import Config, ensure_config


def geodesy(config: Optional[Config] = None) -> Geodesy:
    """Return the configured distance model for geodetic patterns."""
    config = ensure_config(config)
    try:
        return Geodesy(config["kinematics"]["geodesy"])
    except (KeyError, ValueError) as exc:
        raise ConfigParseError("kinematics geodesy", f"({exc})") from exc


def feature_settings(config: Optional[Config] = None) -> FeatureSettings:
    """Return the configured feature stage parameters.

    Parameters
    ----------
    config : Optional[dict]
        Optional configuration dictionary

    Returns
    -------
    FeatureSettings
        Window, thresholds, classifier mode, jerk sign handling and geodesy

    Raises
    ------
    ConfigParseError
        There is a mismatch between the keys expected and the config file,
        or a value is out of range

    """
    config = ensure_config(config)
    try:
        table = config["features"]

        # The geodesy choice lives in its own [kinematics] table.
        return FeatureSettings(
            float(table["mmk_window"]),
            float(table["norm_threshold"]),
            float(table["agg_threshold"]),
            bool(table["three_way"]),
            bool(table["jerk_abs"]),
            geodesy(config),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigParseError("features settings", f"({exc})") from exc
