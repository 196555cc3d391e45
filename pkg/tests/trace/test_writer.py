import pytest

from vomasim.data_structure.constants import EntryKind
from vomasim.data_structure.models import LogEntry
from vomasim.engine import init_world
from vomasim.trace import (
    TraceIoError,
    TraceWriter,
    append_entry,
    atomic_write_text,
    event_entries,
    frame_entry,
    state_entry,
    write_frame,
)


def _entry(tick: int, name: str = 'n') -> LogEntry:
    return LogEntry(run_id='r', tick=tick, kind=EntryKind.watch, name=name, value=tick)


def test_entries_are_written_in_append_order():
    writer = TraceWriter.in_memory()
    for tick in range(3):
        append_entry(writer, _entry(tick))
        writer.end_tick()
    assert writer.count == 3
    assert [line.count('"tick":') for line in writer.lines()] == [1, 1, 1]
    assert writer.getvalue().endswith('\n')


def test_closed_writer_refuses_entries():
    writer = TraceWriter.in_memory()
    writer.close()
    with pytest.raises(TraceIoError):
        append_entry(writer, _entry(0))
    with pytest.raises(TraceIoError):
        writer.end_tick()


def test_file_is_published_on_close(tmp_path):
    path = tmp_path / 'sub' / 'run.trace'
    with TraceWriter.open(path) as writer:
        append_entry(writer, _entry(0))
        assert not path.exists(), 'the trace appeared before the writer closed'
    assert path.read_text(encoding='utf-8').count('\n') == 1
    assert sorted(p.name for p in path.parent.iterdir()) == ['run.trace']


def test_failed_run_keeps_the_previous_trace(tmp_path):
    path = tmp_path / 'run.trace'
    path.write_text('old\n', encoding='utf-8')
    with pytest.raises(RuntimeError):
        with TraceWriter.open(path) as writer:
            append_entry(writer, _entry(0))
            raise RuntimeError('interrupted')
    assert path.read_text(encoding='utf-8') == 'old\n'
    assert sorted(p.name for p in tmp_path.iterdir()) == ['run.trace']


def test_frame_and_state_entries():
    world = init_world('researchers', {'n_researchers': 4}, seed=9)
    frame = frame_entry(world, 0, 'r')
    assert frame.name == 'researchers'
    assert [a['id'] for a in frame.agents] == [0, 1, 2, 3]
    assert [a['color'] for a in frame.agents] == ['lime', 'red', 'cyan', 'lime']
    state = state_entry(world, 0, 'r')
    assert state.dims == [50.0, 50.0] and state.links == []
    assert state.agents[1]['attributes'] == {'color': 'red', 'policy': 'journal', 'pubs': 0}

    writer = TraceWriter.in_memory()
    write_frame(writer, world, 0, 'r')
    assert writer.count == 1 and '"kind":"frame"' in writer.lines()[0]


def test_event_entries_group_spawns_before_removals():
    events = [('remove', 4, 'wolf'), ('spawn', 9, 'sheep'), ('spawn', 10, 'wolf'), ('remove', 2, 'sheep')]
    entries = event_entries(events, 5, 'r')
    assert [(e.name, e.agents) for e in entries] == [
        ('spawn', [{'id': 9, 'kind': 'sheep'}, {'id': 10, 'kind': 'wolf'}]),
        ('remove', [{'id': 4, 'kind': 'wolf'}, {'id': 2, 'kind': 'sheep'}]),
    ]
    assert event_entries([], 5) == []


def test_atomic_write_text(tmp_path):
    path = tmp_path / 'out' / 'summary.txt'
    atomic_write_text(path, 'a\n')
    atomic_write_text(path, 'b\n')
    assert path.read_text(encoding='utf-8') == 'b\n'
    assert sorted(p.name for p in path.parent.iterdir()) == ['summary.txt']
