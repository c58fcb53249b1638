"""Seeded synthetic movement patterns with known driving profiles.

Every pattern is drawn from its own PCG64 stream seeded by the
``SeedSequence`` of ``(seed, index)``, so a pattern depends only on its
seed, its index and its profile parameters.
"""

from __future__ import annotations

import logging
import math

from dataclasses import dataclass, field
from enum import StrEnum
from typing import NamedTuple, TextIO

import numpy as np
import numpy.typing as npt

from . import output
from .patterns import (
    MAX_PATTERN_LENGTH,
    MIN_PATTERN_LENGTH,
    CoordMode,
    MovementPattern,
)

logger = logging.getLogger(__name__)

DEFAULT_SEED = 42
DEFAULT_SAMPLE_INTERVAL = 1
MAX_SEED = 2**64

MIN_BASE_SPEED = 8.0
MAX_BASE_SPEED = 15.0
MIN_SPEED = 1.0

LOG_JITTER = 0.16
MAGNITUDE_JITTER = 0.3
CALM_PERIOD = (30.0, 60.0)
CALM_NOISE = 0.1
SPIKE_HEIGHT = (50.0, 200.0)
SPIKE_MARGIN = 3
SPIKE_SPACING = 4
TWO_SPIKE_LENGTH = 20

FloatArray = npt.NDArray[np.float64]


class Profile(StrEnum):
    """Driving profiles the generator can produce."""

    CALM = "calm"
    AVERAGE = "average"
    RACY = "racy"
    NOISY = "noisy"


# Spread of the acceleration changes per sample, m/s^2.
ACCELERATION_STEP = {
    Profile.CALM: 0.05,
    Profile.AVERAGE: 0.5,
    Profile.RACY: 2.0,
}

BENCHMARK_COUNTS = {
    Profile.CALM: 100,
    Profile.AVERAGE: 100,
    Profile.RACY: 100,
    Profile.NOISY: 30,
}


@dataclass(frozen=True)
class ProfileSpec:
    """What to generate for one profile."""

    profile: Profile
    count: int = 1
    length: int = MAX_PATTERN_LENGTH
    sample_interval: int = DEFAULT_SAMPLE_INTERVAL
    seed: int = DEFAULT_SEED

    def __post_init__(self) -> None:
        if self.count < 0:
            raise ValueError(f"negative count {self.count}")
        if not MIN_PATTERN_LENGTH <= self.length <= MAX_PATTERN_LENGTH:
            raise ValueError(
                f"length {self.length} outside "
                f"[{MIN_PATTERN_LENGTH}, {MAX_PATTERN_LENGTH}]"
            )
        if self.sample_interval < 1:
            raise ValueError(
                "sample_interval must be positive, got "
                f"{self.sample_interval}"
            )
        if not 0 <= self.seed < MAX_SEED:
            raise ValueError(f"seed {self.seed} is not a 64-bit integer")


@dataclass(frozen=True)
class SynthSettings:
    """Parameters of the benchmark generator."""

    seed: int = DEFAULT_SEED
    length: int = MAX_PATTERN_LENGTH
    sample_interval: int = DEFAULT_SAMPLE_INTERVAL
    counts: dict[Profile, int] = field(
        default_factory=lambda: dict(BENCHMARK_COUNTS)
    )

    def specs(self) -> list[ProfileSpec]:
        """One spec per profile, in profile order."""
        return [
            ProfileSpec(
                profile,
                self.counts.get(profile, 0),
                self.length,
                self.sample_interval,
                self.seed,
            )
            for profile in Profile
        ]


class Benchmark(NamedTuple):
    """Generated patterns with their ground-truth profiles."""

    patterns: list[MovementPattern]
    ground_truth: dict[str, Profile]


def pattern_rng(seed: int, index: int) -> np.random.Generator:
    """Return the random stream of one synthetic pattern."""
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence([seed, index]))
    )


def _jerk_signal(
        profile: Profile,
        count: int,
        sample_interval: int,
        rng: np.random.Generator
    ) -> FloatArray:
    if profile == Profile.CALM:
        # A slow swell: the jerk keeps its sign for many seconds.
        period = rng.uniform(*CALM_PERIOD)
        phase = rng.uniform(0.0, 2 * math.pi)
        times = np.arange(count) * sample_interval
        return (
            np.sin(2 * math.pi * times / period + phase)
            + CALM_NOISE * rng.standard_normal(count)
        )
    # Average and racy drivers flip the jerk every sample.
    signs = rng.choice([-1.0, 1.0]) * (-1.0) ** np.arange(count)
    return signs * (
        1 + MAGNITUDE_JITTER * rng.uniform(-1.0, 1.0, count)
    )


def _lateral_spikes(
        length: int,
        rng: np.random.Generator
    ) -> FloatArray:
    y = np.zeros(length)
    candidates = np.arange(SPIKE_MARGIN, length - SPIKE_MARGIN)
    spikes = [int(rng.choice(candidates))]
    if length >= TWO_SPIKE_LENGTH:
        apart = candidates[np.abs(candidates - spikes[0]) >= SPIKE_SPACING]
        spikes.append(int(rng.choice(apart)))
    heights = rng.uniform(*SPIKE_HEIGHT, len(spikes))
    y[spikes] = heights * rng.choice([-1.0, 1.0], len(spikes))
    return y


def pattern_id_of(profile: Profile, index: int) -> str:
    """Identifier of the synthetic pattern with the given index."""
    return f"{profile}#{index:04d}"


def generate_pattern(spec: ProfileSpec, index: int) -> MovementPattern:
    """Generate one planar pattern of a driving profile.

    The car drives along the x axis. A jerk signal with the profile's
    spread is integrated twice into speeds that stay above ``MIN_SPEED``,
    so positions strictly increase. Noisy patterns are average ones with one
    or two lateral position spikes of 50 to 200 m.

    Parameters
    ----------
    spec : ProfileSpec
        Profile, length, sample interval and seed
    index : int
        Index of the pattern, selecting its random stream

    Returns
    -------
    MovementPattern
        A planar pattern of ``spec.length`` samples

    """
    rng = pattern_rng(spec.seed, index)
    dt = spec.sample_interval
    base = Profile.AVERAGE if spec.profile == Profile.NOISY else spec.profile
    spread = (
        ACCELERATION_STEP[base]
        * math.exp(rng.uniform(-LOG_JITTER, LOG_JITTER))
        / dt
    )
    start_speed = rng.uniform(MIN_BASE_SPEED, MAX_BASE_SPEED)

    signal = _jerk_signal(base, spec.length - 3, dt, rng)
    jerks = signal * (spread / signal.std())

    # Start half a step below zero so the acceleration swings around it.
    accelerations = np.concatenate(([-jerks[0] / 2], jerks * dt))
    accelerations = np.cumsum(accelerations)
    speeds = np.concatenate(([start_speed], accelerations * dt))
    speeds = np.cumsum(speeds)
    if speeds.min() < MIN_SPEED:
        speeds += MIN_SPEED - speeds.min()
    x = np.concatenate(([0.0], np.cumsum(speeds * dt)))

    if spec.profile == Profile.NOISY:
        y = _lateral_spikes(spec.length, rng)
    else:
        y = np.zeros(spec.length)

    return MovementPattern.from_sequences(
        pattern_id_of(spec.profile, index),
        np.arange(spec.length) * dt,
        x,
        y,
        CoordMode.PLANAR,
    )


def generate_benchmark(
        seed: int = DEFAULT_SEED,
        settings: SynthSettings | None = None
    ) -> Benchmark:
    """Generate the four-profile acceptance population.

    By default 100 calm, 100 average, 100 racy and 30 noisy patterns of 24
    one-second samples, numbered consecutively from 0 in that order.

    Parameters
    ----------
    seed : int
        Master seed; overrides ``settings.seed``
    settings : SynthSettings, optional
        Counts, length and sample interval

    Returns
    -------
    Benchmark
        The patterns and their ground-truth profiles

    """
    settings = settings or SynthSettings()
    patterns = []
    truth = {}
    index = 0
    for spec in SynthSettings(
        seed, settings.length, settings.sample_interval, settings.counts
    ).specs():
        for _ in range(spec.count):
            pattern = generate_pattern(spec, index)
            patterns.append(pattern)
            truth[pattern.pattern_id] = spec.profile
            index += 1

    logger.info("Generated %d synthetic patterns", len(patterns))
    return Benchmark(patterns, truth)


def write_ground_truth(truth: dict[str, Profile], stream: TextIO) -> None:
    """Write the ``{pattern_id: profile}`` sidecar document."""
    stream.write(
        output.dumps({
            pattern_id: str(profile)
            for pattern_id, profile in sorted(truth.items())
        })
    )
