"""Driving-style classification from GPS logs by a jerk-based feature."""

from .features import feature_table
from .features import omega
from .features import sorted_feature_curve


from .ingest import filter_region
from .ingest import load_dataset


from .kinematics import haversine_m
from .kinematics import kinematics_of


from .patterns import CoordMode
from .patterns import MovementPattern


from .preprocess import preprocess_pipeline


from .synth import generate_benchmark
from .synth import generate_pattern


__version__ = "0.1.0"

__all__ = [
    "CoordMode",
    "MovementPattern",
    "__version__",
    "feature_table",
    "filter_region",
    "generate_benchmark",
    "generate_pattern",
    "haversine_m",
    "kinematics_of",
    "load_dataset",
    "omega",
    "preprocess_pipeline",
    "sorted_feature_curve",
]
