"""The logger agent: append-only trace writing."""

import io
import os
from pathlib import Path
from typing import Dict, List, Optional, TextIO, Tuple

from loguru import logger

from ..data_structure.constants import AgentId, EntryKind, PathLike
from ..data_structure.models import LogEntry
from ..engine.world import World
from .codec import serialize_entry
from .exceptions import TraceIoError

__all__ = [
    'TraceWriter',
    'append_entry',
    'write_frame',
    'frame_entry',
    'state_entry',
    'event_entries',
    'atomic_write_text',
]


class TraceWriter:
    """Writes entries one per line, in append order; flushed at the end of each tick.

    A writer opened on a path writes to ``<path>.tmp`` and renames it over
    ``path`` on :meth:`close`, so an existing trace is replaced atomically.

    Examples:

        .. code-block:: python

            with TraceWriter.open(out_dir / f'{run_id}.trace') as writer:
                append_entry(writer, entry)
                writer.end_tick()
    """

    def __init__(self, stream: TextIO, path: Optional[Path] = None) -> None:
        self._stream = stream
        self.path = path
        self.closed = False
        self.count = 0

    @classmethod
    def open(cls, path: PathLike) -> 'TraceWriter':
        path = Path(path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            stream = open(cls._tmp_path(path), 'w', encoding='utf-8', newline='\n')
        except OSError as e:
            raise TraceIoError(f'cannot open trace {path}: {e}') from None
        return cls(stream, path)

    @classmethod
    def in_memory(cls) -> 'TraceWriter':
        return cls(io.StringIO())

    @staticmethod
    def _tmp_path(path: Path) -> Path:
        return path.with_name(path.name + '.tmp')

    def append(self, entry: LogEntry) -> None:
        if self.closed:
            raise TraceIoError(f'trace {self.path or "<memory>"} is closed')
        try:
            self._stream.write(serialize_entry(entry) + '\n')
        except (OSError, ValueError) as e:
            raise TraceIoError(f'cannot write trace {self.path or "<memory>"}: {e}') from None
        self.count += 1

    def end_tick(self) -> None:
        if self.closed:
            raise TraceIoError(f'trace {self.path or "<memory>"} is closed')
        try:
            self._stream.flush()
        except (OSError, ValueError) as e:
            raise TraceIoError(f'cannot flush trace {self.path or "<memory>"}: {e}') from None

    def getvalue(self) -> str:
        """Text written so far; in-memory writers only."""
        if not isinstance(self._stream, io.StringIO):
            raise TypeError('getvalue() is only available on in-memory writers')
        return self._stream.getvalue()

    def lines(self) -> List[str]:
        return self.getvalue().splitlines()

    def close(self) -> None:
        if self.closed:
            return
        self.closed = True
        if self.path is None:
            return
        try:
            self._stream.close()
            os.replace(self._tmp_path(self.path), self.path)
        except OSError as e:
            raise TraceIoError(f'cannot finalize trace {self.path}: {e}') from None
        logger.debug(f'Wrote {self.count} entries to "{self.path.as_posix()}"')

    def __enter__(self) -> 'TraceWriter':
        return self

    def abandon(self) -> None:
        """Close without publishing; an existing trace at ``path`` is left as it was."""
        if self.closed:
            return
        self.closed = True
        if self.path is None:
            return
        try:
            self._stream.close()
        finally:
            self._tmp_path(self.path).unlink(missing_ok=True)

    def __exit__(self, exc_type, exc_val, exc_tb) -> None:
        if exc_type is None:
            self.close()
        else:
            self.abandon()


def append_entry(writer: TraceWriter, entry: LogEntry) -> None:
    """Append one entry.

    Raises:
        TraceIoError: if the writer is closed or the write fails.
    """
    writer.append(entry)


def frame_entry(view: World, tick: int, run_id: str = '') -> LogEntry:
    """Frame of ``view``: (id, kind, x, y, color) of every agent, ids ascending."""
    from ..engine.registry import ModelRegistry

    color_of = ModelRegistry.get(view.model).color_of
    agents = [
        {'id': agent.id, 'kind': agent.kind, 'x': agent.x, 'y': agent.y, 'color': color_of(agent)}
        for agent in view.agents
    ]
    return LogEntry(run_id=run_id, tick=tick, kind=EntryKind.frame, name=view.model, agents=agents)


def write_frame(writer: TraceWriter, view: World, tick: int, run_id: str = '') -> None:
    append_entry(writer, frame_entry(view, tick, run_id))


def state_entry(view: World, tick: int, run_id: str = '') -> LogEntry:
    """Full state of ``view``: every agent's attribute table, the links and the world size."""
    snapshot = view.snapshot()
    return LogEntry(
        run_id=run_id,
        tick=tick,
        kind=EntryKind.state,
        name=view.model,
        agents=snapshot['agents'],
        links=snapshot['links'],
        dims=snapshot['dims'],
    )


def event_entries(events: List[Tuple[str, AgentId, str]], tick: int, run_id: str = '') -> List[LogEntry]:
    """Group a tick's spawn/remove events into one entry per event name (spawn first)."""
    grouped: Dict[str, List[Dict]] = {}
    for name, agent_id, kind in events:
        grouped.setdefault(name, []).append({'id': agent_id, 'kind': kind})
    return [
        LogEntry(run_id=run_id, tick=tick, kind=EntryKind.event, name=name, agents=grouped[name])
        for name in ('spawn', 'remove')
        if name in grouped
    ]


def atomic_write_text(path: PathLike, text: str) -> None:
    """Write ``text`` to ``path`` through a temporary file and a rename."""
    path = Path(path)
    tmp = path.with_name(path.name + '.tmp')
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(tmp, 'w', encoding='utf-8', newline='\n') as f:
            f.write(text)
        os.replace(tmp, path)
    except OSError as e:
        raise TraceIoError(f'cannot write {path}: {e}') from None
