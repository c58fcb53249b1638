"""Utilities for parsing preprocess configuration."""

from typing import Optional

from ..errors import ConfigParseError
from ..preprocess import PreprocessSettings, SplitPolicy
from .config import Config, ensure_config


def preprocess_settings(
        config: Optional[Config] = None
    ) -> PreprocessSettings:
    """Return the configured pattern extraction parameters.

    Parameters
    ----------
    config : Optional[dict]
        Optional configuration dictionary

    Returns
    -------
    PreprocessSettings
        Length bounds, gap threshold and split policy

    Raises
    ------
    ConfigParseError
        There is a mismatch between the keys expected and the config file,
        or a value is out of range

    """
    config = ensure_config(config)
    try:
        table = config["preprocess"]
        return PreprocessSettings(
            int(table["min_len"]),
            int(table["max_len"]),
            float(table["max_gap"]),
            SplitPolicy(table["split_policy"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigParseError("preprocess settings", f"({exc})") from exc
