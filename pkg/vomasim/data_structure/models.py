from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, StrictBool, StrictFloat, StrictInt, StrictStr

from .constants import EntryKind, InvariantScope, RunStatus, Severity

__all__ = [
    'TraceOptions',
    'RunConfig',
    'LogEntry',
    'WatchStats',
    'ViolationRecord',
    'ValidationReport',
    'ComponentReport',
    'ProximityReport',
]

ScalarValue = Union[StrictBool, StrictInt, StrictFloat, StrictStr]


class TraceOptions(BaseModel):
    """What a run writes to its trace besides watches, violations and console records."""

    model_config = ConfigDict(frozen=True)

    full_state: bool = Field(default=False, description='Write a state entry (every agent, every link) each tick.')
    frame_period: int = Field(default=0, ge=0, description='Write a frame every N ticks; 0 disables frames.')


class RunConfig(BaseModel):
    """One simulation experiment.

    Examples:

        .. code-block:: python

            from vomasim import compile_spec
            from vomasim.data_structure.models import RunConfig

            config = RunConfig(
                model='wolfsheep',
                params={'n_wolves': 1, 'n_sheep': 0, 'initial_energy': 3},
                seed=42,
                max_ticks=10,
                spec_source='invariant wolves_alive: count(agents[kind == wolf]) > 0 on_violation halt',
            )
    """

    model_config = ConfigDict(frozen=True)

    model: str = Field(description='Registered model name, e.g. researchers or wolfsheep.')
    params: Dict[str, Any] = Field(default_factory=dict, description='Model parameter overrides.')
    seed: int = Field(default=0, ge=0, lt=2**64, description='Seed of the run PRNG (64-bit unsigned).')
    max_ticks: int = Field(ge=1, description='Number of model steps to run.')
    spec_source: str = Field(default='', description='VOMAS spec text, compiled at run start.')
    trace: TraceOptions = Field(default_factory=TraceOptions, description='Trace options.')
    debug: bool = Field(default=False, description='Check world integrity after every step.')


class LogEntry(BaseModel):
    """The base record of the trace: one self-contained line per entry.

    Only the fields meaningful for ``kind`` are set; the rest stay ``None`` and are
    left out of the serialized line.
    """

    model_config = ConfigDict(use_enum_values=True)

    run_id: str
    tick: int = Field(ge=0)
    kind: EntryKind
    name: str
    value: Optional[ScalarValue] = None
    agents: Optional[List[Dict[str, Any]]] = None
    links: Optional[List[List[int]]] = None
    dims: Optional[List[float]] = None
    invariant: Optional[str] = None
    scope: Optional[InvariantScope] = None
    predicate: Optional[str] = None
    reason: Optional[str] = None
    severity: Optional[Severity] = None
    message: Optional[str] = None


class WatchStats(BaseModel):
    """Running statistics of one watch."""

    count: int = 0
    min: Optional[ScalarValue] = None
    max: Optional[ScalarValue] = None
    last: Optional[ScalarValue] = None

    def update(self, value: Union[bool, int, float]) -> None:
        self.count += 1
        self.min = value if self.min is None else min(self.min, value)
        self.max = value if self.max is None else max(self.max, value)
        self.last = value


class ViolationRecord(BaseModel):
    model_config = ConfigDict(use_enum_values=True, frozen=True)

    invariant: str
    tick: int
    scope: InvariantScope
    reason: Optional[RunStatus] = None


class ValidationReport(BaseModel):
    """Outcome of a live run or of an offline replay of its trace."""

    model_config = ConfigDict(use_enum_values=True)

    run_id: str
    model: str
    status: RunStatus
    final_tick: int
    halted_at: Optional[int] = None
    violations: List[ViolationRecord] = Field(default_factory=list)
    watch_stats: Dict[str, WatchStats] = Field(default_factory=dict)
    eval_failures: int = 0
    console_failures: int = 0
    abort_reason: Optional[str] = None

    @property
    def has_violations(self) -> bool:
        return len(self.violations) > 0


class ComponentReport(BaseModel):
    """Connected components of the link graph restricted to a set of agents.

    ``largest_fraction`` is 1.0 on an empty set, so that
    ``largest_component_fraction(agents) == 1.0`` holds vacuously on empty worlds.
    """

    component_count: int = Field(ge=0)
    component_sizes: List[int] = Field(default_factory=list)
    largest_fraction: float = Field(ge=0.0, le=1.0)


class ProximityReport(BaseModel):
    """Agents inside a spatial VO agent's radius, with optional predicate outcomes."""

    vo_agent: str
    tick: int
    members: List[int] = Field(default_factory=list)
    outcomes: Optional[Dict[int, bool]] = None
