"""The VO manager: evaluates a compiled spec against each tick's world view."""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from loguru import logger

from ..data_structure.constants import EntryKind, InvariantScope, RunStatus, Severity, ViolationPolicy
from ..data_structure.models import LogEntry, ValidationReport, ViolationRecord, WatchStats
from ..engine.world import World
from .console import ConsoleAgent, console_emit
from .evaluator import EvalContext, eval_expr
from .exceptions import EvalError, PlacementError, VomasHalted
from .expr import Invariant, Proximity, VomasSpec, Watch, format_expr

__all__ = ['TickOutcome', 'VomasManager']


@dataclass
class TickOutcome:
    """Entries produced by one evaluation point, in trace order."""

    watches: List[LogEntry] = field(default_factory=list)
    checks: List[LogEntry] = field(default_factory=list)
    console: List[LogEntry] = field(default_factory=list)
    halt: bool = False

    @property
    def entries(self) -> List[LogEntry]:
        return self.watches + self.checks + self.console

    def merge(self, other: 'TickOutcome') -> 'TickOutcome':
        return TickOutcome(
            watches=self.watches + other.watches,
            checks=self.checks + other.checks,
            console=self.console + other.console,
            halt=self.halt or other.halt,
        )


class VomasManager:
    """Owns one run's overlay state: watch statistics, violations and the halt flag.

    Evaluation only reads the world view it is given.

    Args:
        spec (VomasSpec): compiled spec.
        run_id (str, optional): run identifier stamped on every entry. Defaults to ''.
        model (str, optional): model name, for the report. Defaults to ''.
        console (Optional[ConsoleAgent], optional): console agent. Defaults to one on standard error.
    """

    def __init__(
        self, spec: VomasSpec, run_id: str = '', model: str = '', console: Optional[ConsoleAgent] = None
    ) -> None:
        self.spec = spec
        self.run_id = run_id
        self.model = model
        self.console = console if console is not None else ConsoleAgent()
        self.vo_agents = {vo.name: vo for vo in spec.vo_agents}
        self.stats: Dict[str, WatchStats] = {watch.name: WatchStats() for watch in spec.watches}
        self.violations: List[ViolationRecord] = []
        self.eval_failures = 0
        self.halted = False
        self.halted_at: Optional[int] = None

    def validate_placements(self, dims: Tuple[float, float]) -> None:
        """Check every spatial VO agent lies inside a ``dims`` world.

        Raises:
            PlacementError: naming the first misplaced VO agent.
        """
        width, height = dims
        for vo in self.spec.vo_agents:
            if not vo.is_spatial:
                continue
            p = vo.placement
            if not (0.0 <= p.x < width and 0.0 <= p.y < height):
                raise PlacementError(vo.name, f'at ({p.x}, {p.y}) lies outside the {width} x {height} world')

    # ------ evaluation ------ #
    def _failure(self, tick: int, name: str, error: EvalError) -> LogEntry:
        self.eval_failures += 1
        logger.warning(f'Tick {tick}: "{name}" could not be evaluated: {error.message}')
        return LogEntry(
            run_id=self.run_id,
            tick=tick,
            kind=EntryKind.eval_failure,
            name=name,
            reason=error.code,
            message=error.detail,
        )

    def _watch(self, watch: Watch, ctx: EvalContext) -> LogEntry:
        agents = None
        if isinstance(watch.expr, Proximity):
            from ..validators.proximity import proximity_report

            report = proximity_report(
                self.vo_agents[watch.expr.vo],
                ctx.world,
                ctx.tick,
                predicate=watch.expr.body,
                var=watch.expr.var,
                vo_agents=self.vo_agents,
            )
            value = len(report.members)
            if report.outcomes is None:
                agents = [{'id': agent_id} for agent_id in report.members]
            else:
                agents = [{'id': agent_id, 'ok': report.outcomes[agent_id]} for agent_id in report.members]
        else:
            value = eval_expr(watch.expr, ctx)
        self.stats[watch.name].update(value)
        return LogEntry(run_id=self.run_id, tick=ctx.tick, kind=EntryKind.watch, name=watch.name, value=value, agents=agents)

    def _check(self, invariant: Invariant, ctx: EvalContext, outcome: TickOutcome, reason: Optional[RunStatus]) -> None:
        try:
            holds = eval_expr(invariant.predicate, ctx) is True
        except EvalError as e:
            outcome.checks.append(self._failure(ctx.tick, invariant.name, e))
            return
        if holds:
            return
        predicate = format_expr(invariant.predicate)
        reason_value = RunStatus.get(reason).value if reason is not None else None
        self.violations.append(
            ViolationRecord(invariant=invariant.name, tick=ctx.tick, scope=invariant.scope, reason=reason_value)
        )
        outcome.checks.append(
            LogEntry(
                run_id=self.run_id,
                tick=ctx.tick,
                kind=EntryKind.violation,
                name=invariant.name,
                invariant=invariant.name,
                scope=invariant.scope,
                predicate=predicate,
                reason=reason_value,
            )
        )
        message = f'{predicate} evaluated false'
        if reason_value is not None:
            message += f' (reason={reason_value})'
        outcome.console.append(
            console_emit(self.console, ctx.tick, Severity.violation, message, name=invariant.name, run_id=self.run_id)
        )
        if invariant.on_violation == ViolationPolicy.halt and invariant.scope == InvariantScope.every_tick:
            outcome.halt = True

    def evaluate_tick(self, view: World, tick: int) -> TickOutcome:
        """Evaluate the watches due at ``tick`` and every per-tick invariant.

        Args:
            view (World): read-only world view.
            tick (int): tick of the view.

        Returns:
            TickOutcome: watch entries in spec order, then violations and evaluation
                failures in spec order, then console records; ``halt`` is True when a
                halt-policy invariant was violated.

        Raises:
            VomasHalted: if the manager already halted.
        """
        if self.halted:
            raise VomasHalted(f'evaluate_tick called at tick {tick} after halting at tick {self.halted_at}')
        ctx = EvalContext(view, tick, self.vo_agents)
        outcome = TickOutcome()
        for watch in self.spec.watches:
            if tick % watch.period != 0:
                continue
            try:
                outcome.watches.append(self._watch(watch, ctx))
            except EvalError as e:
                outcome.watches.append(self._failure(tick, watch.name, e))
        for invariant in self.spec.invariants:
            if invariant.scope == InvariantScope.every_tick:
                self._check(invariant, ctx, outcome, reason=None)
        if outcome.halt:
            self.halted = True
            self.halted_at = tick
            logger.info(f'Run {self.run_id} halted by a violated invariant at tick {tick}')
        return outcome

    def termination_outcome(self, view: World, tick: int, reason: RunStatus) -> TickOutcome:
        """Evaluate every at-termination invariant once on the final state; runs after a halt too."""
        ctx = EvalContext(view, tick, self.vo_agents)
        outcome = TickOutcome()
        for invariant in self.spec.invariants:
            if invariant.scope == InvariantScope.at_termination:
                self._check(invariant, ctx, outcome, reason=reason)
        return outcome

    def evaluate_termination(self, view: World, tick: int, reason: RunStatus) -> List[LogEntry]:
        return self.termination_outcome(view, tick, reason).entries

    def report(
        self,
        status: RunStatus,
        final_tick: int,
        abort_reason: Optional[str] = None,
        console_failures: Optional[int] = None,
    ) -> ValidationReport:
        return ValidationReport(
            run_id=self.run_id,
            model=self.model,
            status=status,
            final_tick=final_tick,
            halted_at=self.halted_at,
            violations=list(self.violations),
            watch_stats={name: stats.model_copy() for name, stats in self.stats.items()},
            eval_failures=self.eval_failures,
            console_failures=self.console.failures if console_failures is None else console_failures,
            abort_reason=abort_reason,
        )
