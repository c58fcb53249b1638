"""Shared fixtures: the seeded benchmark and small pattern factories."""

from collections.abc import Callable
from importlib import resources

import numpy as np
import pandas as pd
import pytest

from drivestyle.clustering import ClusteringResult, cluster_report
from drivestyle.config_parsing import Config, load_config
from drivestyle.features import feature_table
from drivestyle.ingest import DriverRecord
from drivestyle.patterns import CoordMode, MovementPattern
from drivestyle.synth import Benchmark, generate_benchmark

BENCHMARK_SEED = 42

PatternFactory = Callable[..., MovementPattern]


@pytest.fixture(scope="session")
def packaged_config_path() -> str:
    return str(resources.files("drivestyle").joinpath("config.toml"))


@pytest.fixture
def config(packaged_config_path: str) -> Config:
    return load_config(packaged_config_path)


@pytest.fixture(scope="session")
def benchmark() -> Benchmark:
    return generate_benchmark(BENCHMARK_SEED)


@pytest.fixture(scope="session")
def benchmark_features(benchmark: Benchmark) -> pd.DataFrame:
    return feature_table(benchmark.patterns)


@pytest.fixture(scope="session")
def benchmark_result(benchmark_features: pd.DataFrame) -> ClusteringResult:
    return cluster_report(benchmark_features)


@pytest.fixture
def planar_pattern() -> PatternFactory:
    """Build planar patterns sampled once per second unless told otherwise."""

    def build(
            x: list[float],
            y: list[float] | None = None,
            t: list[int] | None = None,
            pattern_id: str = "p"
        ) -> MovementPattern:
        return MovementPattern.from_sequences(
            pattern_id,
            list(range(len(x))) if t is None else t,
            x,
            [0.0] * len(x) if y is None else y,
            CoordMode.PLANAR,
        )

    return build


def make_record(
        t: list[int],
        x: list[float],
        y: list[float] | None = None,
        driver_id: str = "d"
    ) -> DriverRecord:
    """A geodetic driver record from plain lists."""
    return DriverRecord(
        driver_id,
        pd.DataFrame({
            "t": np.asarray(t, dtype=np.int64),
            "x": np.asarray(x, dtype=np.float64),
            "y": np.asarray(
                [40.0] * len(x) if y is None else y, dtype=np.float64
            ),
        }),
    )


@pytest.fixture
def record() -> Callable[..., DriverRecord]:
    return make_record
