"""Exception types shared across the toolkit."""


class SegcueError(Exception):
    """Base class for all data and domain errors raised by segcue."""


class CorpusError(SegcueError):
    """Invalid corpus content or corpus construction failure."""


class TraceError(SegcueError):
    """Malformed or inconsistent trace file content."""
