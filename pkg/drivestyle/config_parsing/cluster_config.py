"""Utilities for parsing cluster configuration."""

from typing import Optional

from ..clustering import ClusterSettings, Linkage
from ..errors import ConfigParseError
from ..features import NUMERIC_FEATURES
from .config import Config, ensure_config


def cluster_settings(config: Optional[Config] = None) -> ClusterSettings:
    """Return the configured clustering parameters.

    The configuration never forces ``k``; that is left to the command line.

    Parameters
    ----------
    config : Optional[dict]
        Optional configuration dictionary

    Returns
    -------
    ClusterSettings
        Linkage, WCSS threshold, largest cluster count and feature

    Raises
    ------
    ConfigParseError
        There is a mismatch between the keys expected and the config file,
        or a value is out of range

    """
    # Ensure there is a configuration dictionary.
    config = ensure_config(config)

    try:
        # A KeyError here means the [cluster] table or one of its keys is
        # missing from the file.
        table = config["cluster"]

        # The feature must be a column the features stage writes.
        feature = str(table["feature"])
        if feature not in NUMERIC_FEATURES:
            raise ValueError(f"unknown feature {feature!r}")

        # ClusterSettings checks theta and k_max itself and raises a
        # ValueError when they are out of range.
        return ClusterSettings(
            Linkage(table["linkage"]),
            float(table["theta"]),
            int(table["k_max"]),
            None,
            feature,
        )
    # Any of the failures above means the [cluster] table needs fixing.
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigParseError("cluster settings", f"({exc})") from exc
