"""Utilities for parsing ingest and region configuration."""

from typing import Optional

from ..errors import ConfigParseError
from ..ingest import IngestSettings, Region
from .config import Config, ensure_config


def ingest_settings(config: Optional[Config] = None) -> IngestSettings:
    """Return the configured log loading parameters.

    Parameters
    ----------
    config : Optional[dict]
        Optional configuration dictionary

    Returns
    -------
    IngestSettings
        UTC offset of the log wall times and the log file suffix

    Raises
    ------
    ConfigParseError
        There is a mismatch between the keys expected and the config file

    """
    config = ensure_config(config)
    try:
        table = config["ingest"]
        return IngestSettings(
            float(table["utc_offset_hours"]),
            str(table["suffix"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigParseError("ingest settings", f"({exc})") from exc


def region_names(config: Optional[Config] = None) -> list[str]:
    """Return the names of the configured regions, sorted."""
    config = ensure_config(config)
    return sorted(config.get("regions", {}))


def region(name: str, config: Optional[Config] = None) -> Region:
    """Return a named bounding box.

    Parameters
    ----------
    name : str
        Key of a ``[regions.<name>]`` table
    config : Optional[dict]
        Optional configuration dictionary

    Returns
    -------
    Region
        The configured box

    Raises
    ------
    ConfigParseError
        The region is not configured or its box is invalid

    """
    config = ensure_config(config)
    try:
        # The [regions] table is optional; an unknown name is a KeyError.
        box = config.get("regions", {})[name]

        # Region rejects boxes whose minimum is not below their maximum.
        return Region(
            float(box["min_longitude"]),
            float(box["max_longitude"]),
            float(box["min_latitude"]),
            float(box["max_latitude"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigParseError(f"region {name!r}", f"({exc})") from exc
