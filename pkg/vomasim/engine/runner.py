"""The run loop: model steps interleaved with VOMAS evaluation."""

import hashlib
from pathlib import Path
from typing import TYPE_CHECKING, List, Mapping, NamedTuple, Optional

from loguru import logger
from pydantic import BaseModel

from ..data_structure.constants import PathLike, RunStatus, Severity, report_suffix, trace_suffix
from ..data_structure.models import LogEntry, RunConfig, ValidationReport
from .exceptions import ModelPanic
from .registry import ModelDefinition, ModelRegistry
from .world import World, make_rng

if TYPE_CHECKING:
    from ..vomas.manager import TickOutcome

__all__ = ['init_world', 'step_model', 'make_run_id', 'config_run_id', 'run_simulation', 'run_to_directory']


def init_world(model_name: str, params: Mapping, seed: int) -> World:
    """Build the tick-0 world of a registered model.

    Args:
        model_name (str): registered model name.
        params (Mapping): parameter overrides, checked against the model's schema.
        seed (int): 64-bit unsigned seed of the run PRNG.

    Returns:
        World: world at tick 0 holding the initial population.

    Raises:
        UnknownModel: if ``model_name`` is not registered.
        ParameterError: if a parameter fails the schema.
        ModelPanic: if populating the world fails.
    """
    definition = ModelRegistry.get(model_name)
    validated = definition.validate_params(params)
    world = World(
        validated.width,
        validated.height,
        model=model_name,
        params=validated.model_dump(),
        rng=make_rng(seed),
    )
    try:
        definition.populate(world, validated)
    except Exception as e:
        raise ModelPanic(model_name, 0, e) from e
    return world


def step_model(world: World, definition: Optional[ModelDefinition] = None, params: Optional[BaseModel] = None) -> World:
    """Advance a world by one tick.

    The input world is left untouched; the step runs on a copy (PRNG included),
    so stepping the same world twice gives identical results.

    Raises:
        ModelPanic: if the model step raises.
    """
    definition = definition or ModelRegistry.get(world.model)
    params = params if params is not None else definition.params_schema.model_validate(world.params)
    stepped = world.copy()
    stepped.events = []
    try:
        definition.step(stepped, params)
    except Exception as e:
        raise ModelPanic(world.model, world.tick, e) from e
    stepped.apply_removals()
    stepped.tick = world.tick + 1
    return stepped


def make_run_id(model: str, params: Mapping, seed: int, max_ticks: int, spec_source: str) -> str:
    """Hex digest identifying a configuration; identical configurations share it."""
    from ..trace.codec import canonical_json

    payload = canonical_json(
        {'model': model, 'params': dict(params), 'seed': seed, 'max_ticks': max_ticks, 'spec': spec_source}
    )
    return hashlib.sha256(payload.encode('utf-8')).hexdigest()[:16]


def config_run_id(config: RunConfig) -> str:
    definition = ModelRegistry.get(config.model)
    params = definition.validate_params(config.params)
    return make_run_id(config.model, params.model_dump(mode='json'), config.seed, config.max_ticks, config.spec_source)


class _Pending(NamedTuple):
    world: World
    outcome: 'TickOutcome'


class _Run:
    """State of one run while it executes."""

    def __init__(self, config: RunConfig, console) -> None:
        from ..vomas import VomasManager, compile_spec

        self.config = config
        self.definition = ModelRegistry.get(config.model)
        self.params = self.definition.validate_params(config.params)
        self.spec = compile_spec(config.spec_source, attributes=ModelRegistry.attribute_types())
        self.run_id = make_run_id(
            config.model, self.params.model_dump(mode='json'), config.seed, config.max_ticks, config.spec_source
        )
        self.console = console
        self.manager = VomasManager(self.spec, run_id=self.run_id, model=config.model, console=console)
        self.manager.validate_placements((self.params.width, self.params.height))
        self.writer = None
        self.writer_failed = False

    def prelude(self, world: World, final: bool = False) -> List[LogEntry]:
        """Event, state and frame entries of a tick block."""
        from ..trace.writer import event_entries, frame_entry, state_entry

        tick = world.tick
        entries = event_entries(world.events, tick, self.run_id)
        if self.config.trace.full_state:
            entries.append(state_entry(world, tick, self.run_id))
        period = self.config.trace.frame_period
        if period and (tick % period == 0 or final):
            entries.append(frame_entry(world, tick, self.run_id))
        return entries

    def write(self, entries: List[LogEntry]) -> None:
        for entry in entries:
            self.writer.append(entry)
        self.writer.end_tick()

    def flush(self, pending: _Pending) -> None:
        self.write(self.prelude(pending.world) + pending.outcome.entries)

    def execute(self, writer) -> ValidationReport:
        from ..trace.exceptions import TraceIoError
        from ..vomas.console import console_emit

        self.writer = writer
        config = self.config
        logger.info(f'Run {self.run_id}: model={config.model} seed={config.seed} ticks={config.max_ticks}')
        status, abort_reason = RunStatus.completed, None
        world, pending = None, None
        try:
            world = init_world(config.model, config.params, config.seed)
            pending = _Pending(world, self.manager.evaluate_tick(world, 0))
            while not pending.outcome.halt and world.tick < config.max_ticks:
                stepped = step_model(world, self.definition, self.params)
                if config.debug:
                    problems = stepped.check_integrity()
                    if problems:
                        raise ModelPanic(config.model, world.tick, '; '.join(problems))
                self.flush(pending)
                world = stepped
                logger.debug(f'Run {self.run_id}: tick {world.tick}, {len(world)} agents')
                pending = _Pending(world, self.manager.evaluate_tick(world, world.tick))
            if pending.outcome.halt:
                status = RunStatus.halted
        except ModelPanic as e:
            status, abort_reason = RunStatus.aborted, e.message
        except TraceIoError as e:
            status, abort_reason = RunStatus.aborted, e.message
            self.writer_failed = True
        if abort_reason is not None:
            logger.error(f'Run {self.run_id} aborted: {abort_reason}')

        final_tick, block = 0, []
        if pending is not None:
            final_tick = world.tick
            termination = self.manager.termination_outcome(world, final_tick, status)
            outcome = pending.outcome
            block = (
                self.prelude(world, final=True)
                + outcome.watches
                + outcome.checks
                + termination.checks
                + outcome.console
                + termination.console
            )
        if abort_reason is not None:
            block.append(
                console_emit(self.console, final_tick, Severity.error, abort_reason, name='engine', run_id=self.run_id)
            )
        if not self.writer_failed:
            try:
                self.write(block)
            except TraceIoError as e:
                status, abort_reason = RunStatus.aborted, e.message
                logger.error(f'Run {self.run_id} aborted: {abort_reason}')

        report = self.manager.report(status, final_tick, abort_reason=abort_reason)
        logger.info(
            f'Run {self.run_id}: {report.status} at tick {report.final_tick}, {len(report.violations)} violation(s)'
        )
        return report


def run_simulation(config: RunConfig, writer, console=None) -> ValidationReport:
    """Run one experiment, writing its trace, and return the validation report.

    The overlay is evaluated on the tick-0 state and after every step until
    ``max_ticks`` is reached or a halt-policy invariant is violated; at-termination
    invariants are then evaluated once on the final state. A model failure or a
    trace write failure ends the run with status ``Aborted``.

    Args:
        config (RunConfig): the experiment.
        writer (TraceWriter): open trace writer.
        console (Optional[ConsoleAgent], optional): console agent. Defaults to standard error.

    Returns:
        ValidationReport: the run's report.

    Raises:
        UnknownModel, ParameterError: on an invalid configuration.
        SpecError: if the spec does not compile or a VO agent lies outside the world.
    """
    from ..vomas.console import ConsoleAgent

    return _Run(config, console if console is not None else ConsoleAgent()).execute(writer)


def run_to_directory(config: RunConfig, out_dir: PathLike, quiet: bool = False, console=None) -> ValidationReport:
    """Run one experiment into ``out_dir/<run_id>.trace`` and ``out_dir/<run_id>.report``.

    Both files are replaced atomically when the same configuration is run again.
    A trace that cannot be opened or published makes the run ``Aborted``.

    Raises:
        TraceIoError: if the report itself cannot be written.
    """
    from ..trace.codec import serialize_report
    from ..trace.exceptions import TraceIoError
    from ..trace.writer import TraceWriter, atomic_write_text
    from ..vomas.console import ConsoleAgent

    # a bad configuration fails here, before any file is created
    run = _Run(config, console if console is not None else ConsoleAgent(quiet=quiet))
    out_dir = Path(out_dir)
    report = None
    try:
        with TraceWriter.open(out_dir / f'{run.run_id}{trace_suffix}') as writer:
            report = run.execute(writer)
    except TraceIoError as e:
        logger.error(f'Run {run.run_id} aborted: {e.message}')
        if report is None:
            report = run.manager.report(RunStatus.aborted, 0, abort_reason=e.message)
        else:
            report = report.model_copy(update={'status': RunStatus.aborted.value, 'abort_reason': e.message})
    atomic_write_text(out_dir / f'{run.run_id}{report_suffix}', serialize_report(report) + '\n')
    return report
