from typing import Iterable


class TraceError(Exception):
    """Base class of trace errors."""

    def __init__(self, message: str = '') -> None:
        self.message = message
        super().__init__(self.message)


class TraceIoError(TraceError):
    """Raised when a trace cannot be written or read; aborts a live run."""


class MissingStateEntries(TraceError):
    """Raised when replay is asked of a trace recorded without full state."""

    def __init__(self, path: str = '<trace>') -> None:
        self.path = path
        TraceError.__init__(
            self,
            f'{path} has no state entries; offline checking needs a trace recorded with --full-state',
        )


class CorruptTrace(TraceError):
    """Raised on a trace line that is not a valid entry."""

    def __init__(self, line: int, reason: str) -> None:
        self.line = line
        self.reason = reason
        TraceError.__init__(self, f'corrupt trace at line {line}: {reason}')


class SchemaMismatch(TraceError):
    """Raised when a spec reads attributes that the recorded states lack."""

    def __init__(self, attributes: Iterable[str]) -> None:
        self.attributes = sorted(attributes)
        TraceError.__init__(self, f'spec references attributes absent from the recorded states: {self.attributes}')
