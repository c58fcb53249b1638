"""Deterministic rendering and safe writing of pipeline artifacts."""

import contextlib
import json
import logging
import os
import sys
import tempfile

from collections.abc import Iterator
from typing import Any, TextIO

import numpy as np

logger = logging.getLogger(__name__)

SIGNIFICANT_DIGITS = 9
FLOAT_FORMAT = f"%.{SIGNIFICANT_DIGITS}g"
STDOUT = "-"
FILE_MODE = 0o666


def round_sig(value: float) -> float:
    """Round a float to the package's fixed number of significant digits.

    Parameters
    ----------
    value : float
        Any finite float

    Returns
    -------
    float
        The float whose shortest representation has at most nine
        significant digits

    """
    return float(FLOAT_FORMAT % value)


def rounded(obj: Any) -> Any:
    """Recursively round every float inside a JSON-like structure.

    Numpy scalars are converted to their Python counterparts on the way, so
    the result can be handed straight to ``json.dumps``.

    Parameters
    ----------
    obj : Any
        Nested dicts, lists, tuples and scalars

    Returns
    -------
    Any
        The same structure with floats rounded to nine significant digits

    """
    if isinstance(obj, dict):
        return {str(key): rounded(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [rounded(value) for value in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return round_sig(float(obj))
    return obj


def dumps(obj: Any) -> str:
    """Serialise a JSON-like structure with pinned formatting."""
    return json.dumps(rounded(obj), indent=2, allow_nan=False) + "\n"


def _umask() -> int:
    mask = os.umask(0)
    os.umask(mask)
    return mask


@contextlib.contextmanager
def atomic_output(path: str) -> Iterator[TextIO]:
    """Open an output for writing, committing it only on success.

    The content goes to a temporary file in the destination directory and is
    moved into place when the block exits cleanly. On failure the temporary
    file is removed so no partial artifact is left behind. A committed file
    gets the permissions the process umask gives any new file. The path
    ``-`` writes to standard output instead.

    Parameters
    ----------
    path : str
        Destination path, or ``-`` for standard output

    Yields
    ------
    TextIO
        A text stream to write the artifact to

    """
    if path == STDOUT:
        yield sys.stdout
        sys.stdout.flush()
        return

    directory = os.path.dirname(os.path.abspath(path))
    try:
        os.makedirs(directory)
    except OSError:
        pass
    else:
        logger.info("Created directory: %s", directory)

    handle, tmp_path = tempfile.mkstemp(
        dir=directory, prefix=".", suffix=".part"
    )
    try:
        with os.fdopen(handle, "w", encoding="ascii", newline="\n") as stream:
            yield stream
        os.chmod(tmp_path, FILE_MODE & ~_umask())
        os.replace(tmp_path, path)
    except BaseException:
        with contextlib.suppress(OSError):
            os.remove(tmp_path)
        raise
    logger.debug("Wrote %s", path)
