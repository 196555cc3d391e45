"""Offline checking of recorded traces against a spec."""

from pathlib import Path
from typing import Iterable, List, Optional, Set, Union

from loguru import logger

from ..data_structure.constants import EntryKind, PathLike, RunStatus, Severity, intrinsic_attributes
from ..data_structure.models import LogEntry, ValidationReport
from ..engine.world import World
from ..vomas.console import ConsoleAgent
from ..vomas.expr import (
    AgentSet,
    Aggregate,
    Approx,
    AttrRef,
    Binary,
    Conditional,
    Expr,
    Proximity,
    Quantifier,
    Unary,
    VomasSpec,
)
from ..vomas.manager import VomasManager
from .codec import parse_entry
from .exceptions import MissingStateEntries, SchemaMismatch, TraceIoError

__all__ = ['read_trace', 'replay_check', 'referenced_attributes']


def read_trace(source: Union[PathLike, Iterable[str]]) -> List[LogEntry]:
    """Parse a trace file (or an iterable of lines) into entries.

    Raises:
        TraceIoError: if the file cannot be read.
        CorruptTrace: on the first malformed line, with its 1-based number.
    """
    if isinstance(source, (str, Path)):
        path = Path(source)
        try:
            lines = path.read_text(encoding='utf-8').splitlines()
        except OSError as e:
            raise TraceIoError(f'cannot read trace {path}: {e}') from None
    else:
        lines = list(source)
    return [parse_entry(line, number) for number, line in enumerate(lines, start=1) if line.strip()]


def _set_attributes(agent_set: AgentSet) -> Set[str]:
    return {flt.attr for flt in agent_set.filters}


def _expr_attributes(expr: Optional[Expr]) -> Set[str]:
    if expr is None:
        return set()
    if isinstance(expr, AttrRef):
        return {expr.attr}
    if isinstance(expr, Unary):
        return _expr_attributes(expr.operand)
    if isinstance(expr, (Binary, Approx)):
        return _expr_attributes(expr.left) | _expr_attributes(expr.right)
    if isinstance(expr, Conditional):
        return _expr_attributes(expr.cond) | _expr_attributes(expr.then) | _expr_attributes(expr.otherwise)
    if isinstance(expr, Aggregate):
        return _set_attributes(expr.set) | ({expr.attr} if expr.attr else set())
    if isinstance(expr, Quantifier):
        return _set_attributes(expr.set) | _expr_attributes(expr.body)
    if isinstance(expr, Proximity):
        return _expr_attributes(expr.body)
    return set()


def referenced_attributes(spec: VomasSpec) -> Set[str]:
    """Every attribute a spec reads, intrinsics included."""
    names: Set[str] = set()
    for watch in spec.watches:
        names |= _expr_attributes(watch.expr)
    for invariant in spec.invariants:
        names |= _expr_attributes(invariant.predicate)
    return names


def _recorded_attributes(states: List[LogEntry]) -> Set[str]:
    names = set(intrinsic_attributes)
    for state in states:
        for record in state.agents or []:
            names.update(record.get('attributes', {}))
    model = states[0].name
    from ..engine.registry import ModelRegistry

    if model in ModelRegistry.registered_models:
        names.update(ModelRegistry.get(model).attributes)
    return names


def _view(state: LogEntry) -> World:
    return World.from_snapshot(state.tick, tuple(state.dims or ()), state.agents or [], state.links or [], state.name)


def replay_check(entries: List[LogEntry], spec: VomasSpec, path: str = '<trace>') -> ValidationReport:
    """Re-run the overlay offline over the recorded states of a trace.

    On a trace recorded live with the same spec, the report equals the live one.

    Args:
        entries (List[LogEntry]): parsed trace.
        spec (VomasSpec): compiled spec to check.
        path (str, optional): trace name used in diagnostics. Defaults to '<trace>'.

    Raises:
        MissingStateEntries: if the trace holds no state entries.
        SchemaMismatch: if the spec reads attributes no recorded state has.
    """
    states = [entry for entry in entries if entry.kind == EntryKind.state.value]
    if not states:
        raise MissingStateEntries(path)
    missing = referenced_attributes(spec) - _recorded_attributes(states)
    if missing:
        raise SchemaMismatch(missing)

    run_id = states[0].run_id
    model = states[0].name
    abort_reason = next(
        (
            entry.message
            for entry in entries
            if entry.kind == EntryKind.console.value and entry.severity == Severity.error.value
        ),
        None,
    )
    manager = VomasManager(spec, run_id=run_id, model=model, console=ConsoleAgent(quiet=True))
    logger.debug(f'Replaying {len(states)} state(s) of run {run_id}')

    view = None
    for state in states:
        view = _view(state)
        if manager.evaluate_tick(view, state.tick).halt:
            break
    if abort_reason is not None:
        status = RunStatus.aborted
    elif manager.halted:
        status = RunStatus.halted
    else:
        status = RunStatus.completed
    manager.termination_outcome(view, view.tick, status)
    return manager.report(status, view.tick, abort_reason=abort_reason, console_failures=0)
