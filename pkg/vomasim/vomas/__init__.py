from .console import ConsoleAgent, console_emit
from .evaluator import EvalContext, eval_expr, resolve_set
from .exceptions import (
    DuplicateName,
    EvalError,
    PlacementError,
    SpecError,
    SpecNameError,
    SpecSyntaxError,
    SpecTypeError,
    UnboundVariable,
    UnknownAttribute,
    UnknownVoAgent,
    VomasHalted,
)
from .expr import VomasSpec, format_expr, format_spec
from .manager import TickOutcome, VomasManager
from .parser import compile_spec
