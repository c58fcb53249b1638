"""Utilities to support reading the configuration file."""

import logging
import os
import tomllib

from importlib import resources
from typing import NotRequired, Optional, TypedDict, cast

from ..errors import ConfigParseError

logger = logging.getLogger(__name__)

CONFIG = "config.toml"


class IngestConfig(TypedDict):
    """A dictionary to represent the ingest configuration settings."""

    utc_offset_hours: float
    suffix: str


class PreprocessConfig(TypedDict):
    """A dictionary to represent the preprocess configuration settings."""

    min_len: int
    max_len: int
    max_gap: float
    split_policy: str


class KinematicsConfig(TypedDict):
    """A dictionary to represent the kinematics configuration settings."""

    geodesy: str


class FeaturesConfig(TypedDict):
    """A dictionary to represent the features configuration settings."""

    mmk_window: float
    norm_threshold: float
    agg_threshold: float
    three_way: bool
    jerk_abs: bool


class ClusterConfig(TypedDict):
    """A dictionary to represent the cluster configuration settings."""

    linkage: str
    theta: float
    k_max: int
    feature: str


class SynthConfig(TypedDict):
    """A dictionary to represent the synth configuration settings."""

    seed: int
    length: int
    sample_interval: int
    counts: dict[str, int]


class OutputConfig(TypedDict):
    """A dictionary to represent the output configuration settings."""

    directory: str
    filenames: dict[str, str]


class RegionConfig(TypedDict):
    """A dictionary to represent one named bounding box."""

    min_longitude: float
    max_longitude: float
    min_latitude: float
    max_latitude: float


class Config(TypedDict):
    """A dictionary to represent loaded data."""

    ingest: IngestConfig
    preprocess: PreprocessConfig
    kinematics: KinematicsConfig
    features: FeaturesConfig
    cluster: ClusterConfig
    synth: SynthConfig
    output: OutputConfig
    regions: NotRequired[dict[str, RegionConfig]]


def load_config(path: Optional[str] = None) -> Config:
    """Read a configuration file.

    Without an explicit path, ``config.toml`` in the working directory is
    used if it exists, and the default file shipped with the package
    otherwise.

    Parameters
    ----------
    path : Optional[str]
        Explicit configuration file

    Returns
    -------
    config: dict
        Configuration dictionary

    Raises
    ------
    ConfigParseError
        If the file cannot be read or is not valid TOML

    """
    try:
        if path is None and not os.path.exists(CONFIG):
            default = resources.files("drivestyle").joinpath(CONFIG)
            with default.open("rb") as config_file:
                raw = tomllib.load(config_file)
            logger.debug("Using the packaged configuration")
        else:
            path = path or CONFIG
            with open(path, "rb") as config_file:
                raw = tomllib.load(config_file)
            logger.debug("Using configuration %s", path)
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise ConfigParseError("configuration", f"({exc})") from exc

    # The cast only informs type checking. Missing or mistyped keys are
    # reported by the individual accessors.
    return cast(Config, raw)


def ensure_config(config: Optional[Config] = None) -> Config:
    """Ensure a config dictionary is defined.

    Check if config dictionary already defined. If so, return that dictionary.
    Otherwise, find the config file, read it, and return the new dictionary.

    Parameters
    ----------
    config : Optional[dict]
        Optional configuration dictionary

    Returns
    -------
    config: dict
        Configuration dictionary

    """
    if not config:
        config = load_config()
    return config
