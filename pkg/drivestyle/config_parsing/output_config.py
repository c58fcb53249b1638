"""Utilities for parsing output configuration."""

import os

from typing import Optional

from ..errors import ConfigParseError
from .config import Config, ensure_config


def output_directory(config: Optional[Config] = None) -> str:
    """Return the configured directory for pipeline artifacts.

    Parameters
    ----------
    config : Optional[dict]
        Optional configuration dictionary

    Returns
    -------
    str
        Configured directory for the artifacts

    Raises
    ------
    ConfigParseError
        There is a mismatch between the keys expected and the config file

    """
    # Ensure there is a configuration dictionary.
    config = ensure_config(config)

    try:
        # A KeyError may occur here if the [output] table is missing.
        directory = config["output"]["directory"]

        # TOML allows any value type here. Assert that it is a string.
        assert isinstance(directory, str)
    except (KeyError, AssertionError) as exc:
        raise ConfigParseError("output directory") from exc
    return directory


def output_filename(
        artifact: str,
        config: Optional[Config] = None,
        **fields: str
    ) -> str:
    """Return the configured filename of an artifact.

    Parameters
    ----------
    artifact : str
        Key of the ``[output.filenames]`` table
    config : Optional[dict]
        Optional configuration dictionary
    **fields : str
        Values for the placeholders of a filename template

    Returns
    -------
    str
        Configured filename for the artifact

    Raises
    ------
    ConfigParseError
        The artifact is not configured or its template does not fit

    """
    config = ensure_config(config)
    try:
        template = config["output"]["filenames"][artifact]

        # Templates may hold placeholders such as {feature}; an unknown
        # placeholder raises a KeyError or IndexError.
        filename = template.format(**fields)
        assert isinstance(filename, str)
    except (
        KeyError, IndexError, ValueError, AssertionError, AttributeError
    ) as exc:
        raise ConfigParseError(f"{artifact} filename") from exc
    return filename


def output_location(
        artifact: str,
        config: Optional[Config] = None,
        **fields: str
    ) -> str:
    """Return the configured path of an artifact."""
    config = ensure_config(config)
    return os.path.join(
        output_directory(config),
        output_filename(artifact, config, **fields),
    )
