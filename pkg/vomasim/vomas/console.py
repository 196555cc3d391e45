"""The console VO agent: human-readable run-time messages, mirrored into the trace."""

import sys
from typing import Optional, TextIO

from loguru import logger
from rich.console import Console

from ..data_structure.constants import EntryKind, Severity
from ..data_structure.models import LogEntry

__all__ = ['ConsoleAgent', 'console_emit', 'format_console_line']


def format_console_line(tick: int, severity: Severity, name: str, message: str) -> str:
    return f'[{tick}] {Severity.get(severity).value} {name}: {message}'


class ConsoleAgent:
    """Writes ``[tick] SEVERITY name: message`` lines to a stream (standard error by default).

    A failed write never stops the run; it is counted in :attr:`failures`.

    Args:
        stream (Optional[TextIO], optional): target stream. Defaults to ``sys.stderr``.
        quiet (bool, optional): build records without printing them. Defaults to False.
    """

    def __init__(self, stream: Optional[TextIO] = None, quiet: bool = False) -> None:
        self.stream = stream if stream is not None else sys.stderr
        self.quiet = quiet
        self.failures = 0
        self._console = Console(
            file=self.stream, markup=False, highlight=False, emoji=False, soft_wrap=True, color_system=None
        )

    def emit(self, run_id: str, tick: int, severity: Severity, name: str, message: str) -> LogEntry:
        """Print one record and return its trace entry."""
        severity = Severity.get(severity)
        if not self.quiet:
            try:
                self._console.print(format_console_line(tick, severity, name, message))
            except (OSError, ValueError) as e:
                self.failures += 1
                logger.warning(f'Console write failed at tick {tick}: {e}')
        return LogEntry(
            run_id=run_id,
            tick=tick,
            kind=EntryKind.console,
            name=name,
            severity=severity,
            message=message,
        )


def console_emit(
    console: ConsoleAgent, tick: int, severity: Severity, message: str, name: str = 'vomas', run_id: str = ''
) -> LogEntry:
    """Write a console record and return the entry mirroring it into the trace."""
    return console.emit(run_id, tick, severity, name, message)
