"""Exceptions raised throughout the drivestyle package."""


class DrivestyleError(Exception):
    """Base class for every error raised deliberately by this package."""


class ConfigParseError(DrivestyleError):
    """Error class to suggest that the config file is misformed."""

    def __init__(self, config_key: str, reason: str = "") -> None:
        message = f"Could not retrieve {config_key} from configuration file."
        if reason:
            message = f"{message} {reason}"
        super().__init__(message)


class LineRejectedError(DrivestyleError, ValueError):
    """A single input line could not be turned into a GPS log."""

    def __init__(self, line: str, reason: str) -> None:
        self.line = line
        self.reason = reason
        super().__init__(f"Rejected line {line!r}: {reason}")


class DatasetReadError(DrivestyleError):
    """An input file could not be read at all."""

    def __init__(self, path: str) -> None:
        self.path = path
        super().__init__(f"Could not read GPS log file {path}.")


class PatternError(DrivestyleError, ValueError):
    """A movement pattern violates one of its invariants."""

    def __init__(self, pattern_id: str, reason: str) -> None:
        self.pattern_id = pattern_id
        super().__init__(f"Pattern {pattern_id}: {reason}")


class FeatureError(DrivestyleError, ValueError):
    """A feature could not be computed from its input."""


class ClusteringError(DrivestyleError, ValueError):
    """A clustering request is inconsistent with its input."""
