from enum import Enum
from pathlib import Path
from typing import Dict, Tuple, Union

##### Typing Constants #####

PathLike = Union[str, Path]
Point = Tuple[float, float]
Scalar = Union[bool, int, float, str]
AgentId = int
Link = Tuple[AgentId, AgentId]

##### Package Constants #####

package_name = 'vomasim'
default_width = 50.0
default_height = 50.0
trace_suffix = '.trace'
report_suffix = '.report'
check_suffix = '.check'
summary_file = 'summary.txt'
sweep_summary_file = 'sweep.summary'
intrinsic_attributes = ('id', 'kind', 'x', 'y')

specs_dir = Path(__file__).resolve().parents[1] / 'models' / 'specs'


class EnumBase(str, Enum):
    @classmethod
    def get(cls, name_or_value: str) -> 'EnumBase':
        """Get enum member by name or value.

        Args:
            name_or_value (str): Name or value of the enum member.

        Returns:
            EnumBase: Self
        """
        try:
            return cls[name_or_value]
        except KeyError:
            for member in cls:
                if member.value == name_or_value:
                    return member
            raise ValueError(f'{name_or_value} is not supported in {cls.__name__}')


class EntryKind(EnumBase):
    """Kinds of trace entries."""

    watch = 'watch'
    violation = 'violation'
    console = 'console'
    frame = 'frame'
    state = 'state'
    event = 'event'
    eval_failure = 'eval_failure'


class RunStatus(EnumBase):
    """Outcome of a run, also used as termination reason."""

    completed = 'Completed'
    halted = 'Halted'
    aborted = 'Aborted'


class InvariantScope(EnumBase):
    """When an invariant is checked."""

    every_tick = 'EveryTick'
    at_termination = 'AtTermination'


class ViolationPolicy(EnumBase):
    """What happens when an invariant is violated."""

    halt = 'halt'
    log = 'log'


class Severity(EnumBase):
    """Console severities."""

    info = 'INFO'
    violation = 'VIOLATION'
    error = 'ERROR'


class AttrType(EnumBase):
    """Static types of DSL values."""

    num = 'number'
    bool = 'boolean'
    sym = 'symbol'


class Policy(EnumBase):
    """Publication venue policies of the researchers model."""

    conference = 'conference'
    journal = 'journal'
    none = 'none'


# Lime = Conference preferring, Red = Journal preferring, Cyan = No preference
policy_colors: Dict[str, str] = {
    Policy.conference.value: 'lime',
    Policy.journal.value: 'red',
    Policy.none.value: 'cyan',
}
