import io
import json

import numpy as np
import pytest

from drivestyle.errors import PatternError
from drivestyle.patterns import (
    CoordMode,
    MovementPattern,
    read_patterns,
    validate_pattern,
    write_patterns,
)


def _pattern(**changes) -> MovementPattern:
    fields = {
        "t": list(range(12)),
        "x": [round(116.4 + 1e-4 * i, 4) for i in range(12)],
        "y": [39.9] * 12,
    }
    fields.update(changes)
    return MovementPattern.from_sequences(
        "7#0", fields["t"], fields["x"], fields["y"]
    )


def test_valid_pattern():
    pattern = _pattern()
    validate_pattern(pattern)
    assert len(pattern) == 12
    assert pattern.coord_mode == CoordMode.GEODETIC


@pytest.mark.parametrize(
    ("changes", "message"),
    [
        ({"t": list(range(9)), "x": list(range(9)), "y": [0.0] * 9},
         "length"),
        ({"t": [0, 1, 2, 3, 4, 5, 5, 7, 8, 9, 10, 11]}, "time stamps"),
        ({"x": [1.0, 2.0, 2.0] + list(range(3, 12))}, "identical"),
        ({"x": [np.nan] + list(range(1, 12))}, "non-finite"),
    ],
)
def test_invalid_patterns(changes, message):
    with pytest.raises(PatternError, match=message):
        validate_pattern(_pattern(**changes))


def test_ragged_pattern():
    with pytest.raises(PatternError, match="differ in length"):
        MovementPattern.from_sequences("p", [0, 1], [0.0], [0.0, 1.0])


def test_pattern_file():
    patterns = [
        _pattern(),
        MovementPattern.from_sequences(
            "calm#0000", [0, 2], [0.0, 10.5], [0.0, 0.0], CoordMode.PLANAR
        ),
    ]
    stream = io.StringIO()

    assert write_patterns(patterns, stream) == 2

    document = json.loads(stream.getvalue())
    assert list(document[1]) == ["id", "coord_mode", "t", "x", "y"]
    assert document[1]["coord_mode"] == "planar"
    assert read_patterns(io.StringIO(stream.getvalue())) == patterns


@pytest.mark.parametrize(
    "text",
    [
        "{}",
        "[{\"id\": \"a\", \"t\": [0]}]",
        "[{\"id\": \"a\", \"t\": [0], \"x\": [0], \"y\": [0], "
        "\"coord_mode\": \"polar\"}]",
        "[1",
        "[1, 2]",
    ],
    ids=["object", "missing", "mode", "syntax", "entries"],
)
def test_malformed_pattern_file(text):
    with pytest.raises(PatternError):
        read_patterns(io.StringIO(text))


def _file_of(*objects) -> io.StringIO:
    return io.StringIO(json.dumps(list(objects)))


def _planar(pattern_id, t, x, y=None):
    return {
        "id": pattern_id,
        "coord_mode": "planar",
        "t": t,
        "x": x,
        "y": y if y is not None else [0.0] * len(t),
    }


@pytest.mark.parametrize(
    ("obj", "message"),
    [
        (_planar("a", [0, 0, 0, 0, 0], [1.0] * 5), "time stamps"),
        (_planar("a", [0, 1, 2, 3, 4], [1.0] * 5), "identical"),
        (_planar("a", [], []), "length"),
    ],
    ids=["repeated-times", "standing", "empty"],
)
def test_pattern_file_breaking_invariants(obj, message):
    with pytest.raises(PatternError, match=message):
        read_patterns(_file_of(obj))


def test_pattern_file_with_duplicate_ids():
    moving = _planar("a", [0, 1, 2, 3], [0.0, 1.0, 2.0, 3.0])
    with pytest.raises(PatternError, match="duplicate"):
        read_patterns(_file_of(moving, moving))


def test_pattern_file_length_bounds():
    moving = _planar("a", [0, 1, 2, 3], [0.0, 1.0, 2.0, 3.0])

    assert len(read_patterns(_file_of(moving))) == 1
    with pytest.raises(PatternError, match="length"):
        read_patterns(_file_of(moving), min_len=10, max_len=24)
