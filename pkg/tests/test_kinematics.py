import math

import numpy as np
import pytest

from drivestyle.errors import PatternError
from drivestyle.kinematics import (
    EARTH_RADIUS_M,
    Geodesy,
    derivative_series,
    haversine_array,
    haversine_m,
    kinematics_frame,
    kinematics_of,
    speed_series,
)
from drivestyle.patterns import MovementPattern


def test_haversine_one_degree_of_latitude():
    assert haversine_m((116.0, 40.0), (116.0, 41.0)) == pytest.approx(
        111194.93, abs=0.01
    )


def test_haversine_identity_and_antipode():
    assert haversine_m((116.4, 39.9), (116.4, 39.9)) == 0.0
    assert haversine_m((0.0, 0.0), (180.0, 0.0)) == pytest.approx(
        math.pi * EARTH_RADIUS_M
    )


def _random_points(rng, count):
    return (
        rng.uniform(-180.0, 180.0, count), rng.uniform(-90.0, 90.0, count)
    )


def test_haversine_symmetry_and_triangle_inequality():
    rng = np.random.default_rng(23)
    (lon_a, lat_a), (lon_b, lat_b), (lon_c, lat_c) = (
        _random_points(rng, 1000) for _ in range(3)
    )

    ab = haversine_array(lon_a, lat_a, lon_b, lat_b)
    ba = haversine_array(lon_b, lat_b, lon_a, lat_a)
    bc = haversine_array(lon_b, lat_b, lon_c, lat_c)
    ac = haversine_array(lon_a, lat_a, lon_c, lat_c)

    np.testing.assert_allclose(ab, ba, rtol=1e-12, atol=1e-6)
    assert np.all(ac <= ab + bc + 1.0)
    assert np.all((ab >= 0) & (ab <= math.pi * EARTH_RADIUS_M + 1e-6))


def test_speed_series_uniform_motion(planar_pattern):
    speeds, times = speed_series(planar_pattern([0.0, 10.0, 20.0]))

    np.testing.assert_allclose(speeds, [10.0, 10.0])
    np.testing.assert_allclose(times, [0.5, 1.5])


def test_speed_series_irregular_grid(planar_pattern):
    speeds, times = speed_series(planar_pattern([0.0, 4.0, 10.0], t=[0, 2, 5]))

    np.testing.assert_allclose(speeds, [2.0, 2.0])
    np.testing.assert_allclose(times, [1.0, 3.5])


def _speeds_of_squares():
    pattern = MovementPattern.from_sequences(
        "squares", [0, 1, 2, 3], [0.0, 1.0, 4.0, 9.0], [0.0] * 4, "planar"
    )
    return speed_series(pattern)


def test_derivative_series():
    speeds, times = _speeds_of_squares()
    np.testing.assert_allclose(speeds, [1.0, 3.0, 5.0])

    accelerations, midpoints = derivative_series(speeds, times)

    np.testing.assert_allclose(accelerations, [2.0, 2.0])
    np.testing.assert_allclose(midpoints, [1.0, 2.0])
    np.testing.assert_array_equal(
        derivative_series([3.0, 3.0, 3.0], [0.0, 1.0, 3.0])[0], [0.0, 0.0]
    )


def test_jerk_of_cubic_motion(planar_pattern):
    t = np.arange(10)
    series = kinematics_of(planar_pattern(list(t.astype(float) ** 3)))

    np.testing.assert_allclose(series.jerks, 6.0, rtol=1e-6)


@pytest.mark.parametrize("dt", [1, 2, 3])
def test_jerk_of_general_cubic(planar_pattern, dt):
    rng = np.random.default_rng(dt)
    for _ in range(50):
        a = rng.uniform(0.1, 2.0)
        b = rng.uniform(-1.0, 1.0)
        c = rng.uniform(100.0, 200.0)
        d = rng.uniform(-1000.0, 1000.0)
        t = np.arange(12) * dt
        x = a * t**3 + b * t**2 + c * t + d

        series = kinematics_of(planar_pattern(list(x), t=list(t)))

        np.testing.assert_allclose(series.jerks, 6.0 * a, rtol=1e-6)


def test_planar_scaling(planar_pattern):
    rng = np.random.default_rng(17)
    for _ in range(100):
        t = np.cumsum(rng.integers(1, 6, size=15))
        x = np.cumsum(rng.uniform(1.0, 20.0, size=15))
        y = np.cumsum(rng.uniform(-5.0, 5.0, size=15))
        alpha = rng.uniform(0.01, 100.0)

        base = kinematics_of(planar_pattern(list(x), list(y), list(t)))
        scaled = kinematics_of(
            planar_pattern(list(alpha * x), list(alpha * y), list(t))
        )

        np.testing.assert_allclose(scaled.speeds, alpha * base.speeds)
        np.testing.assert_allclose(
            scaled.accelerations, alpha * base.accelerations, atol=1e-9
        )
        np.testing.assert_allclose(
            scaled.jerks, alpha * base.jerks, atol=1e-9
        )


def test_series_lengths_contract(planar_pattern):
    rng = np.random.default_rng(7)
    for length in range(4, 30):
        t = np.cumsum(rng.integers(1, 6, size=length))
        x = np.cumsum(rng.uniform(1.0, 20.0, size=length))
        series = kinematics_of(planar_pattern(list(x), t=list(t)))

        assert len(series.speeds) == length - 1
        assert len(series.accelerations) == length - 2
        assert len(series.jerks) == length - 3
        assert np.all(np.diff(series.jerk_times) > 0)


def test_uniform_speed_has_no_jerk(planar_pattern):
    series = kinematics_of(planar_pattern([3.0 * i for i in range(10)]))
    np.testing.assert_allclose(series.accelerations, 0.0, atol=1e-12)
    np.testing.assert_allclose(series.jerks, 0.0, atol=1e-12)


def test_drift_leaves_jerk_unchanged(planar_pattern):
    rng = np.random.default_rng(11)
    t = np.cumsum(rng.integers(1, 4, size=16))
    x = np.cumsum(rng.uniform(1.0, 5.0, size=16))

    base = kinematics_of(planar_pattern(list(x), t=list(t)))
    drifted = kinematics_of(planar_pattern(list(x + 25.0 * t), t=list(t)))

    np.testing.assert_allclose(
        drifted.accelerations, base.accelerations, atol=1e-9
    )
    np.testing.assert_allclose(drifted.jerks, base.jerks, atol=1e-9)


def test_outlier_produces_jerk_spike(planar_pattern):
    y = [0.0] * 12
    y[6] = 80.0
    x = [10.0 * i + 1e-3 * i**3 for i in range(12)]
    series = kinematics_of(planar_pattern(x, y))

    magnitudes = np.abs(series.jerks)
    assert magnitudes.max() > 1000 * np.median(magnitudes)


def test_short_pattern(planar_pattern):
    with pytest.raises(PatternError, match="too short for jerk"):
        kinematics_of(planar_pattern([0.0, 1.0, 2.0]))


def test_wgs84_is_close_to_haversine():
    pattern = MovementPattern.from_sequences(
        "beijing",
        list(range(10)),
        [116.40 + 1e-4 * i**1.5 for i in range(10)],
        [39.90 + 5e-5 * i for i in range(10)],
    )

    sphere = speed_series(pattern, Geodesy.HAVERSINE)[0]
    ellipsoid = speed_series(pattern, Geodesy.WGS84)[0]

    np.testing.assert_allclose(ellipsoid, sphere, rtol=5e-3)


def test_kinematics_frame(planar_pattern):
    series = kinematics_of(planar_pattern([i**2 for i in range(1, 11)]))

    frame = kinematics_frame("p", series)

    assert list(frame.columns) == ["pattern_id", "kind", "t", "value"]
    assert frame["kind"].value_counts().to_dict() == {
        "speed": 9, "acceleration": 8, "jerk": 7
    }
