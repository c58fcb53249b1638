import io
import math

import numpy as np
import pandas as pd
import pytest

from drivestyle.errors import FeatureError
from drivestyle.features import (
    FEATURE_COLUMNS,
    INFINITE_RATIO,
    FeatureRecord,
    FeatureSettings,
    MmkClass,
    feature_table,
    jerk_stats,
    largest_gap,
    mmk_feature,
    omega,
    read_feature_table,
    sorted_feature_curve,
    window_ratio,
    write_feature_table,
)
from drivestyle.kinematics import KinematicSeries
from drivestyle.patterns import CoordMode, MovementPattern
from drivestyle.synth import Profile, ProfileSpec, generate_pattern


def _series(jerks, jerk_times=None) -> KinematicSeries:
    jerks = np.asarray(jerks, dtype=np.float64)
    if jerk_times is None:
        jerk_times = 1.5 + np.arange(len(jerks), dtype=np.float64)
    unused = np.zeros(0)
    return KinematicSeries(
        unused, unused, unused, unused, jerks, np.asarray(jerk_times)
    )


@pytest.mark.parametrize(
    ("jerks", "expected"),
    [
        ([-1.0, 1.0, -1.0, 1.0], math.exp(-1.0)),
        ([2.5, 2.5, 2.5], 0.0),
        ([-4.0, 4.0, -4.0, 4.0], math.exp(-0.5)),
    ],
)
def test_omega(jerks, expected):
    assert omega(jerks) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("spread", [1e32, 1e40, 1e100])
def test_omega_stays_below_one(spread):
    value = omega([-spread, spread])

    assert 0.999 < value < 1.0
    record = FeatureRecord("p", value, 0.0, spread, 1.0, MmkClass.AGGRESSIVE)
    assert record.omega == value


@pytest.mark.parametrize(
    ("jerks", "expected"),
    [
        ([1.0, 1.0, 1.0], (1.0, 0.0)),
        ([0.0, 2.0], (1.0, 1.0)),
        ([-3.0, 1.0, 2.0], (0.0, math.sqrt(14 / 3))),
    ],
)
def test_jerk_stats(jerks, expected):
    assert jerk_stats(jerks) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("jerks", [[], [1.0, np.nan], [np.inf]])
def test_unusable_jerks(jerks):
    with pytest.raises(FeatureError):
        omega(jerks)


def test_omega_grows_with_spread():
    rng = np.random.default_rng(1)
    for _ in range(1000):
        first = rng.normal(0.0, rng.uniform(0.01, 10.0), size=20)
        second = rng.normal(0.0, rng.uniform(0.01, 10.0), size=20)
        sigma_first, sigma_second = first.std(), second.std()
        if math.isclose(sigma_first, sigma_second, rel_tol=1e-9):
            continue
        smoother, rougher = (
            (first, second) if sigma_first < sigma_second
            else (second, first)
        )
        assert 0 < omega(smoother) < omega(rougher) < 1


def test_omega_ignores_order_and_sign():
    rng = np.random.default_rng(2)
    jerks = rng.normal(0.0, 3.0, size=21)
    assert omega(rng.permutation(jerks)) == pytest.approx(omega(jerks))
    assert omega(-jerks) == pytest.approx(omega(jerks))


def test_mmk_constant_jerk_is_defensive():
    ratio, label = mmk_feature(_series([0.5] * 25))
    assert ratio == 0.0
    assert label == MmkClass.DEFENSIVE


def test_mmk_boundary_is_aggressive():
    ratio, label = mmk_feature(_series([0.0, 2.0]))
    assert ratio == 1.0
    assert label == MmkClass.AGGRESSIVE


def test_mmk_three_way():
    settings = FeatureSettings(three_way=True)
    # Windows of 10 s: ratios 1/3, then 0.6 and 0.6.
    jerks = [1.0, 2.0] + [1.0, 4.0] + [1.0, 4.0]
    times = [0.0, 1.0, 10.0, 11.0, 20.0, 21.0]

    ratio, label = mmk_feature(_series(jerks, times), settings)

    assert ratio == pytest.approx(0.6)
    assert label == MmkClass.NORMAL
    assert mmk_feature(_series([1.0, 2.0]), settings)[1] == MmkClass.CALM


def test_window_ratio_of_zero_mean():
    assert window_ratio(np.array([-1.0, 1.0])) == INFINITE_RATIO


def test_mmk_ratio_is_scale_invariant():
    rng = np.random.default_rng(3)
    jerks = rng.normal(0.5, 1.0, size=40)
    ratio, _ = mmk_feature(_series(jerks))
    assert mmk_feature(_series(7.5 * jerks))[0] == pytest.approx(ratio)


def test_feature_table_empty():
    table = feature_table([])
    assert table.empty
    assert list(table.columns) == FEATURE_COLUMNS


def test_feature_table_sorts_and_skips(planar_pattern):
    patterns = [
        planar_pattern([i**2 for i in range(1, 11)], pattern_id="b"),
        planar_pattern([0.0, 1.0, 3.0], pattern_id="short"),
        planar_pattern([i**3 for i in range(1, 11)], pattern_id="a"),
    ]
    kinematics: list[pd.DataFrame] = []

    table = feature_table(patterns, kinematics=kinematics)

    assert table["pattern_id"].tolist() == ["a", "b"]
    assert table.loc[1, "omega"] == 0.0
    assert len(kinematics) == 2


def _omega_of(pattern):
    return feature_table([pattern]).loc[0, "omega"]


def test_profiles_order_omega():
    calm, racy, noisy = (
        _omega_of(generate_pattern(ProfileSpec(profile), index=0))
        for profile in (Profile.CALM, Profile.RACY, Profile.NOISY)
    )
    assert calm < racy < noisy


def test_amplified_jerk_raises_omega():
    pattern = generate_pattern(ProfileSpec(Profile.NOISY), index=3)
    for factor in (1.5, 4.0, 30.0):
        amplified = MovementPattern.from_sequences(
            "amplified",
            pattern.t,
            factor * pattern.x,
            factor * pattern.y,
            CoordMode.PLANAR,
        )
        assert _omega_of(pattern) < _omega_of(amplified)


def test_jerk_abs_changes_only_the_statistics(planar_pattern):
    pattern = planar_pattern([i + 0.1 * (i % 2) for i in range(12)])
    signed = feature_table([pattern])
    magnitudes = feature_table([pattern], FeatureSettings(jerk_abs=True))

    assert magnitudes.loc[0, "jerk_mean"] > 0
    assert magnitudes.loc[0, "jerk_std"] < signed.loc[0, "jerk_std"]
    assert magnitudes.loc[0, "mmk_ratio"] == signed.loc[0, "mmk_ratio"]


def test_feature_table_survives_csv(benchmark):
    table = feature_table(benchmark.patterns[:5])
    stream = io.StringIO()
    write_feature_table(table, stream)

    restored = read_feature_table(io.StringIO(stream.getvalue()))

    assert restored["pattern_id"].tolist() == table["pattern_id"].tolist()
    np.testing.assert_allclose(restored["omega"], table["omega"], rtol=1e-8)


def test_read_feature_table_missing_column():
    with pytest.raises(FeatureError, match="omega"):
        read_feature_table(io.StringIO("pattern_id,jerk_mean\na,1.0\n"))


def test_sorted_feature_curve():
    table = pd.DataFrame({
        "pattern_id": ["a", "b", "c"], "omega": [0.3, 0.1, 0.2]
    })

    curve = sorted_feature_curve(table, "omega")

    assert curve["rank"].tolist() == [1, 2, 3]
    assert curve["value"].tolist() == [0.1, 0.2, 0.3]
    assert largest_gap(curve) == 1
    single = sorted_feature_curve(table.iloc[:1], "omega")
    assert single.values.tolist() == [[1, 0.3]]
    assert largest_gap(single) == 0


def test_sorted_feature_curve_unknown_feature():
    with pytest.raises(FeatureError, match="unknown feature"):
        sorted_feature_curve(pd.DataFrame({"omega": [0.1]}), "speed")


def test_settings_reject_thresholds():
    with pytest.raises(ValueError):
        FeatureSettings(norm_threshold=2.0, agg_threshold=1.0)
