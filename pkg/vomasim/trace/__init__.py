from .codec import parse_entry, parse_report, serialize_entry, serialize_report
from .exceptions import CorruptTrace, MissingStateEntries, SchemaMismatch, TraceError, TraceIoError
from .replay import read_trace, replay_check
from .writer import (
    TraceWriter,
    append_entry,
    atomic_write_text,
    event_entries,
    frame_entry,
    state_entry,
    write_frame,
)
