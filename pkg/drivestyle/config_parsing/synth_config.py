"""Utilities for parsing synth configuration."""

from typing import Optional

from ..errors import ConfigParseError
from ..synth import Profile, SynthSettings
from .config import Config, ensure_config


def synth_settings(config: Optional[Config] = None) -> SynthSettings:
    """Return the configured benchmark generator parameters.

    Parameters
    ----------
    config : Optional[dict]
        Optional configuration dictionary

    Returns
    -------
    SynthSettings
        Seed, pattern length, sample interval and counts per profile

    Raises
    ------
    ConfigParseError
        There is a mismatch between the keys expected and the config file,
        or a value is out of range

    """
    config = ensure_config(config)
    try:
        table = config["synth"]
        counts = {
            Profile(name): int(count)
            for name, count in table["counts"].items()
        }
        if any(count < 0 for count in counts.values()):
            raise ValueError("negative profile count")
        settings = SynthSettings(
            int(table["seed"]),
            int(table["length"]),
            int(table["sample_interval"]),
            counts,
        )
        # Validates length and interval against the profile bounds.
        settings.specs()
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise ConfigParseError("synth settings", f"({exc})") from exc
    return settings
