"""Evaluation of compiled expressions over a read-only world view."""

import math
from typing import Dict, List, Optional, Tuple

from ..data_structure.constants import AgentId, Scalar
from ..engine.world import SimAgent, World, neighbors_within
from .exceptions import EvalError
from .expr import (
    AgentSet,
    Aggregate,
    Approx,
    AttrRef,
    Binary,
    Conditional,
    Expr,
    Filter,
    Literal,
    Proximity,
    Quantifier,
    TickRef,
    Unary,
    VOAgentDef,
)

__all__ = ['EvalContext', 'eval_expr', 'resolve_set']

_ORDERING = {
    '<': lambda a, b: a < b,
    '<=': lambda a, b: a <= b,
    '>': lambda a, b: a > b,
    '>=': lambda a, b: a >= b,
}


class EvalContext:
    """What an expression may see: the world view, the tick and the VO agent
    definitions, plus the agents bound by enclosing quantifiers.

    Args:
        world (World): read-only view; nothing here writes to it.
        tick (int): tick under evaluation.
        vo_agents (Dict[str, VOAgentDef]): VO agents by name.
    """

    def __init__(self, world: World, tick: int, vo_agents: Optional[Dict[str, VOAgentDef]] = None) -> None:
        self.world = world
        self.tick = tick
        self.vo_agents = dict(vo_agents or {})
        self.bindings: List[Tuple[Optional[str], SimAgent]] = []

    def bind(self, var: Optional[str], agent: SimAgent) -> None:
        self.bindings.append((var, agent))

    def unbind(self) -> None:
        self.bindings.pop()

    def lookup(self, var: Optional[str]) -> SimAgent:
        for name, agent in reversed(self.bindings):
            if name == var:
                return agent
        raise EvalError('MissingAttribute', f'no agent bound to {var or "the implicit element"}')


def _read(agent: SimAgent, attr: str) -> Scalar:
    try:
        return agent.read(attr)
    except KeyError:
        raise EvalError('MissingAttribute', f'agent {agent.id} ({agent.kind}) has no attribute "{attr}"') from None


def _number(value: Scalar, what: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise EvalError('TypeMismatch', f'{what} is {value!r}, not a number')
    return value


def _finite(value: Scalar, what: str) -> Scalar:
    if isinstance(value, float) and not math.isfinite(value):
        raise EvalError('Overflow', f'{what} gives {value}')
    return value


def _matches(agent: SimAgent, flt: Filter) -> bool:
    try:
        value = agent.read(flt.attr)
    except KeyError:
        # agents of kinds without the attribute never match
        return False
    if flt.op == '==':
        return value == flt.value and isinstance(value, bool) == isinstance(flt.value, bool)
    if flt.op == '!=':
        return not (value == flt.value and isinstance(value, bool) == isinstance(flt.value, bool))
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        return False
    return _ORDERING[flt.op](value, flt.value)


def resolve_set(agent_set: AgentSet, ctx: EvalContext) -> List[AgentId]:
    """Ids of the agents in a set expression, ascending.

    ``within(v)`` is the agents within ``v``'s radius that match its kind filter
    (every matching agent for a global VO agent); filters apply conjunctively.
    """
    return [agent.id for agent in _members(agent_set, ctx)]


def _members(agent_set: AgentSet, ctx: EvalContext) -> List[SimAgent]:
    world = ctx.world
    if agent_set.vo is None:
        agents = list(world.agents)
    else:
        vo = ctx.vo_agents[agent_set.vo]
        if vo.is_spatial:
            center = (vo.placement.x, vo.placement.y)
            agents = [world.get(agent_id) for agent_id in neighbors_within(world, center, vo.placement.radius, vo.kind_filter)]
        else:
            agents = [agent for agent in world.agents if vo.kind_filter is None or agent.kind == vo.kind_filter]
    for flt in agent_set.filters:
        agents = [agent for agent in agents if _matches(agent, flt)]
    return agents


def _aggregate(expr: Aggregate, ctx: EvalContext) -> Scalar:
    members = _members(expr.set, ctx)
    if expr.func == 'count':
        return len(members)
    if expr.func in ('components', 'largest_component_fraction'):
        from ..validators.connectivity import components_of

        report = components_of(ctx.world, [agent.id for agent in members])
        return report.component_count if expr.func == 'components' else report.largest_fraction
    values = [_number(_read(agent, expr.attr), expr.attr) for agent in members]
    if expr.func == 'sum':
        if all(isinstance(value, int) for value in values):
            return sum(values)
        return math.fsum(values)
    if not values:
        raise EvalError('EmptySet', f'{expr.func} over an empty set')
    if expr.func == 'min':
        return min(values)
    if expr.func == 'max':
        return max(values)
    return math.fsum(values) / len(values)


def _quantify(expr: Quantifier, ctx: EvalContext) -> bool:
    want = expr.func == 'exists'
    for agent in _members(expr.set, ctx):
        ctx.bind(expr.var, agent)
        try:
            outcome = _evaluate(expr.body, ctx)
        finally:
            ctx.unbind()
        if outcome is want:
            return want
    return not want


def _binary(expr: Binary, ctx: EvalContext) -> Scalar:
    op = expr.op
    if op == 'and':
        return _evaluate(expr.left, ctx) is True and _evaluate(expr.right, ctx) is True
    if op == 'or':
        return _evaluate(expr.left, ctx) is True or _evaluate(expr.right, ctx) is True
    left = _evaluate(expr.left, ctx)
    right = _evaluate(expr.right, ctx)
    if op == '==':
        return left == right
    if op == '!=':
        return left != right
    left = _number(left, 'left operand')
    right = _number(right, 'right operand')
    if op in _ORDERING:
        return _ORDERING[op](left, right)
    if op == '+':
        result = left + right
    elif op == '-':
        result = left - right
    elif op == '*':
        result = left * right
    elif right == 0:
        raise EvalError('DivByZero', f'division of {left!r} by zero')
    else:
        result = left / right
    return _finite(result, f'"{op}"')


def _evaluate(expr: Expr, ctx: EvalContext) -> Scalar:
    if isinstance(expr, Literal):
        return expr.value
    if isinstance(expr, TickRef):
        return ctx.tick
    if isinstance(expr, AttrRef):
        return _read(ctx.lookup(expr.var), expr.attr)
    if isinstance(expr, Binary):
        return _binary(expr, ctx)
    if isinstance(expr, Unary):
        operand = _evaluate(expr.operand, ctx)
        if expr.op == 'not':
            return operand is not True
        return -_number(operand, 'operand')
    if isinstance(expr, Aggregate):
        return _aggregate(expr, ctx)
    if isinstance(expr, Quantifier):
        return _quantify(expr, ctx)
    if isinstance(expr, Approx):
        left = _number(_evaluate(expr.left, ctx), 'left operand')
        right = _number(_evaluate(expr.right, ctx), 'right operand')
        return abs(left - right) <= expr.eps
    if isinstance(expr, Conditional):
        branch = expr.then if _evaluate(expr.cond, ctx) is True else expr.otherwise
        return _evaluate(branch, ctx)
    if isinstance(expr, Proximity):
        from ..validators.proximity import proximity_report

        return len(proximity_report(ctx.vo_agents[expr.vo], ctx.world, ctx.tick).members)
    raise TypeError(f'Not an expression: {expr!r}')


def eval_expr(expr: Expr, ctx: EvalContext) -> Scalar:
    """Evaluate an expression to a scalar.

    Args:
        expr (Expr): type-checked expression.
        ctx (EvalContext): evaluation context.

    Returns:
        Scalar: number, boolean or symbol; numbers are always finite. A proximity
            watch evaluates to its member count.

    Raises:
        EvalError: ``EmptySet`` for min/max/avg over nothing, ``DivByZero``,
            ``MissingAttribute`` for an attribute the agent lacks, ``Overflow``
            when arithmetic leaves the range of a float.
    """
    try:
        return _finite(_evaluate(expr, ctx), 'result')
    except OverflowError as e:
        raise EvalError('Overflow', str(e)) from None
