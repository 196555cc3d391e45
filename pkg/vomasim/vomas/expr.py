"""Expression trees and compiled VOMAS specs, with a pretty-printer whose output
compiles back to a structurally identical spec."""

from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

from ..data_structure.constants import InvariantScope, Scalar, ViolationPolicy

__all__ = [
    'Literal',
    'TickRef',
    'AttrRef',
    'Unary',
    'Binary',
    'Approx',
    'Conditional',
    'Filter',
    'AgentSet',
    'Aggregate',
    'Quantifier',
    'Proximity',
    'Expr',
    'SpatialPlacement',
    'GlobalPlacement',
    'VOAgentDef',
    'Watch',
    'Invariant',
    'VomasSpec',
    'format_expr',
    'format_set',
    'format_spec',
]

ARITHMETIC_OPS = ('+', '-', '*', '/')
COMPARISON_OPS = ('==', '!=', '<', '<=', '>', '>=')
BOOLEAN_OPS = ('and', 'or')
AGGREGATES = ('count', 'sum', 'min', 'max', 'avg', 'components', 'largest_component_fraction')
QUANTIFIERS = ('forall', 'exists')


@dataclass(frozen=True)
class Literal:
    value: Scalar


@dataclass(frozen=True)
class TickRef:
    pass


@dataclass(frozen=True)
class AttrRef:
    """``var.attr``; ``var`` is None for the implicit element of a quantifier."""

    var: Optional[str]
    attr: str


@dataclass(frozen=True)
class Unary:
    op: str  # '-' | 'not'
    operand: 'Expr'


@dataclass(frozen=True)
class Binary:
    op: str
    left: 'Expr'
    right: 'Expr'


@dataclass(frozen=True)
class Approx:
    left: 'Expr'
    right: 'Expr'
    eps: float


@dataclass(frozen=True)
class Conditional:
    cond: 'Expr'
    then: 'Expr'
    otherwise: 'Expr'


@dataclass(frozen=True)
class Filter:
    attr: str
    op: str
    value: Scalar


@dataclass(frozen=True)
class AgentSet:
    """``agents[...]`` when ``vo`` is None, otherwise ``within(vo)[...]``."""

    vo: Optional[str] = None
    filters: Tuple[Filter, ...] = ()


@dataclass(frozen=True)
class Aggregate:
    func: str
    set: AgentSet
    attr: Optional[str] = None


@dataclass(frozen=True)
class Quantifier:
    func: str  # 'forall' | 'exists'
    set: AgentSet
    var: Optional[str]
    body: 'Expr'


@dataclass(frozen=True)
class Proximity:
    vo: str
    var: Optional[str] = None
    body: Optional['Expr'] = None


Expr = Union[Literal, TickRef, AttrRef, Unary, Binary, Approx, Conditional, Aggregate, Quantifier, Proximity]


@dataclass(frozen=True)
class SpatialPlacement:
    x: float
    y: float
    radius: float


@dataclass(frozen=True)
class GlobalPlacement:
    pass


@dataclass(frozen=True)
class VOAgentDef:
    name: str
    placement: Union[SpatialPlacement, GlobalPlacement]
    kind_filter: Optional[str] = None

    @property
    def is_spatial(self) -> bool:
        return isinstance(self.placement, SpatialPlacement)


@dataclass(frozen=True)
class Watch:
    name: str
    expr: Expr
    period: int = 1


@dataclass(frozen=True)
class Invariant:
    name: str
    predicate: Expr
    scope: InvariantScope = InvariantScope.every_tick
    on_violation: ViolationPolicy = ViolationPolicy.log


@dataclass(frozen=True)
class VomasSpec:
    vo_agents: Tuple[VOAgentDef, ...] = ()
    watches: Tuple[Watch, ...] = ()
    invariants: Tuple[Invariant, ...] = ()
    source: str = field(default='', compare=False, repr=False)

    @property
    def is_empty(self) -> bool:
        return not (self.vo_agents or self.watches or self.invariants)

    def vo_agent(self, name: str) -> VOAgentDef:
        for vo in self.vo_agents:
            if vo.name == name:
                return vo
        raise KeyError(name)


# ------ pretty printing ------ #
PREC_OR, PREC_AND, PREC_NOT, PREC_CMP, PREC_ADD, PREC_MUL, PREC_UNARY, PREC_ATOM = range(1, 9)
_BINARY_PREC = {'or': PREC_OR, 'and': PREC_AND, '+': PREC_ADD, '-': PREC_ADD, '*': PREC_MUL, '/': PREC_MUL}
_BINARY_PREC.update({op: PREC_CMP for op in COMPARISON_OPS})


def _precedence(expr: Expr) -> int:
    if isinstance(expr, Binary):
        return _BINARY_PREC[expr.op]
    if isinstance(expr, Unary):
        return PREC_NOT if expr.op == 'not' else PREC_UNARY
    return PREC_ATOM


def format_scalar(value: Scalar) -> str:
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return repr(value)
    return str(value)


def format_set(agent_set: AgentSet) -> str:
    base = 'agents' if agent_set.vo is None else f'within({agent_set.vo})'
    filters = ''.join(f'[{f.attr} {f.op} {format_scalar(f.value)}]' for f in agent_set.filters)
    return base + filters


def _binder(var: Optional[str]) -> str:
    return f'{var} -> ' if var is not None else ''


def format_expr(expr: Expr) -> str:
    """Render an expression in DSL syntax, parenthesizing only where precedence requires."""
    if isinstance(expr, Literal):
        return format_scalar(expr.value)
    if isinstance(expr, TickRef):
        return 'tick'
    if isinstance(expr, AttrRef):
        return expr.attr if expr.var is None else f'{expr.var}.{expr.attr}'
    if isinstance(expr, Unary):
        operand = format_expr(expr.operand)
        # -(3) must not print as the literal -3
        numeric = isinstance(expr.operand, Literal) and not isinstance(expr.operand.value, (bool, str))
        if _precedence(expr.operand) < _precedence(expr) or (expr.op == '-' and numeric):
            operand = f'({operand})'
        return f'not {operand}' if expr.op == 'not' else f'-{operand}'
    if isinstance(expr, Binary):
        prec = _precedence(expr)
        left, right = format_expr(expr.left), format_expr(expr.right)
        left_prec = _precedence(expr.left)
        if left_prec < prec or (prec == PREC_CMP and left_prec == PREC_CMP):
            left = f'({left})'
        if _precedence(expr.right) <= prec:
            right = f'({right})'
        return f'{left} {expr.op} {right}'
    if isinstance(expr, Approx):
        return f'approx({format_expr(expr.left)}, {format_expr(expr.right)}, {format_scalar(expr.eps)})'
    if isinstance(expr, Conditional):
        return f'if({format_expr(expr.cond)}, {format_expr(expr.then)}, {format_expr(expr.otherwise)})'
    if isinstance(expr, Aggregate):
        attr = f', {expr.attr}' if expr.attr is not None else ''
        return f'{expr.func}({format_set(expr.set)}{attr})'
    if isinstance(expr, Quantifier):
        return f'{expr.func}({format_set(expr.set)}, {_binder(expr.var)}{format_expr(expr.body)})'
    if isinstance(expr, Proximity):
        if expr.body is None:
            return f'proximity({expr.vo})'
        return f'proximity({expr.vo}, {_binder(expr.var)}{format_expr(expr.body)})'
    raise TypeError(f'Not an expression: {expr!r}')


def format_spec(spec: VomasSpec) -> str:
    """Render a compiled spec as DSL text, one item per line."""
    lines = []
    for vo in spec.vo_agents:
        if vo.is_spatial:
            p = vo.placement
            where = f'at ({format_scalar(p.x)}, {format_scalar(p.y)}) radius {format_scalar(p.radius)}'
        else:
            where = 'global'
        kind = f' kind {vo.kind_filter}' if vo.kind_filter is not None else ''
        lines.append(f'vo {vo.name} {where}{kind}')
    for watch in spec.watches:
        every = f' every {watch.period}' if watch.period != 1 else ''
        lines.append(f'watch {watch.name} = {format_expr(watch.expr)}{every}')
    for inv in spec.invariants:
        scope = 'at_termination ' if inv.scope == InvariantScope.at_termination else ''
        policy = ' on_violation halt' if inv.on_violation == ViolationPolicy.halt else ''
        lines.append(f'invariant {inv.name}: {scope}{format_expr(inv.predicate)}{policy}')
    return '\n'.join(lines) + ('\n' if lines else '')
