import io

from vomasim.data_structure.constants import Severity
from vomasim.vomas import ConsoleAgent, console_emit
from vomasim.vomas.console import format_console_line


class _BrokenStream(io.StringIO):
    def write(self, text):
        raise OSError('disk full')


def test_console_line_format():
    assert format_console_line(12, Severity.violation, 'few', 'x evaluated false') == (
        '[12] VIOLATION few: x evaluated false'
    )
    assert format_console_line(0, 'ERROR', 'engine', 'boom') == '[0] ERROR engine: boom'


def test_emit_prints_and_returns_the_trace_entry(console, console_stream):
    entry = console_emit(console, 4, Severity.info, 'hello [world]', run_id='abc')
    assert console_stream.getvalue() == '[4] INFO vomas: hello [world]\n', 'markup must not be interpreted'
    assert (entry.run_id, entry.tick, entry.kind, entry.name, entry.severity, entry.message) == (
        'abc',
        4,
        'console',
        'vomas',
        'INFO',
        'hello [world]',
    )


def test_quiet_console_still_returns_entries():
    stream = io.StringIO()
    entry = ConsoleAgent(stream=stream, quiet=True).emit('r', 1, Severity.error, 'engine', 'boom')
    assert stream.getvalue() == ''
    assert entry.severity == 'ERROR'


def test_write_failures_are_counted():
    agent = ConsoleAgent(stream=_BrokenStream())
    entry = agent.emit('r', 2, Severity.violation, 'inv', 'evaluated false')
    agent.emit('r', 3, Severity.violation, 'inv', 'evaluated false')
    assert agent.failures == 2
    assert entry.message == 'evaluated false', 'the trace entry survives a failed write'
