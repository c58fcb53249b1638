"""All functions that handle configuration file parsing."""

from .cluster_config import cluster_settings


from .config import Config
from .config import ensure_config
from .config import load_config


from .features_config import feature_settings
from .features_config import geodesy


from .ingest_config import ingest_settings
from .ingest_config import region
from .ingest_config import region_names


from .output_config import output_directory
from .output_config import output_filename
from .output_config import output_location


from .preprocess_config import preprocess_settings


from .synth_config import synth_settings


__all__ = [
    "Config",
    "cluster_settings",
    "ensure_config",
    "feature_settings",
    "geodesy",
    "ingest_settings",
    "load_config",
    "output_directory",
    "output_filename",
    "output_location",
    "preprocess_settings",
    "region",
    "region_names",
    "synth_settings",
]
