"""Compiler of the VOMAS spec language.

Parsing, name resolution and type checking happen in one pass over the token
stream; ``within(NAME)`` references are resolved once the whole text is read,
so VO agents may be declared after their first use.
"""

import math
import re
from typing import Dict, List, Mapping, NamedTuple, Optional, Tuple

from loguru import logger

from ..data_structure.constants import AttrType, InvariantScope, Scalar, ViolationPolicy
from .exceptions import (
    DuplicateName,
    PlacementError,
    SpecSyntaxError,
    SpecTypeError,
    UnboundVariable,
    UnknownAttribute,
    UnknownVoAgent,
)
from .expr import (
    AGGREGATES,
    COMPARISON_OPS,
    QUANTIFIERS,
    AgentSet,
    Aggregate,
    Approx,
    AttrRef,
    Binary,
    Conditional,
    Expr,
    Filter,
    GlobalPlacement,
    Invariant,
    Literal,
    Proximity,
    Quantifier,
    SpatialPlacement,
    TickRef,
    Unary,
    VOAgentDef,
    VomasSpec,
    Watch,
    format_expr,
)

__all__ = ['compile_spec', 'tokenize', 'Token']

ITEM_KEYWORDS = ('vo', 'watch', 'invariant')
_NO_ATTRIBUTE_AGGREGATES = ('count', 'components', 'largest_component_fraction')
_CALL_KEYWORDS = AGGREGATES + QUANTIFIERS + ('approx', 'if', 'proximity')

_TOKEN_RE = re.compile(
    r"""
    (?P<newline>\n)
    |(?P<space>[ \t\r\f]+)
    |(?P<comment>\#[^\n]*)
    |(?P<num>\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)
    |(?P<name>[A-Za-z_][A-Za-z0-9_]*)
    |(?P<op>->|==|!=|<=|>=|[()\[\],.=<>+\-*/:])
    """,
    re.VERBOSE,
)


class Token(NamedTuple):
    kind: str  # 'num' | 'name' | 'op' | 'eof'
    text: str
    line: int
    column: int

    def describe(self) -> str:
        return 'end of input' if self.kind == 'eof' else f'"{self.text}"'


class _Typed(NamedTuple):
    node: Expr
    type: AttrType
    token: Token


def tokenize(text: str) -> List[Token]:
    """Split spec text into tokens, dropping whitespace and ``#`` comments.

    Raises:
        SpecSyntaxError: on a character that starts no token, or a number too large for a float.
    """
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        column = pos - line_start + 1
        if match is None:
            raise SpecSyntaxError(['a token'], f'"{text[pos]}"', line, column)
        kind = match.lastgroup
        if kind == 'newline':
            line += 1
            line_start = match.end()
        elif kind == 'num' and not math.isfinite(float(match.group())):
            raise SpecSyntaxError(['a finite number'], f'"{match.group()}"', line, column)
        if kind in ('num', 'name', 'op'):
            tokens.append(Token(kind, match.group(), line, column))
        pos = match.end()
    tokens.append(Token('eof', '', line, pos - line_start + 1))
    return tokens


def _parse_number(text: str) -> Scalar:
    if '.' in text or 'e' in text or 'E' in text:
        return float(text)
    return int(text)


class _Parser:
    def __init__(self, text: str, attributes: Mapping[str, AttrType]) -> None:
        self.tokens = tokenize(text)
        self.pos = 0
        self.attributes = dict(attributes)
        # bound variable names, innermost last; None marks an implicit binder
        self.scopes: List[Optional[str]] = []
        self.names: Dict[str, Dict[str, Token]] = {'VO agent': {}, 'watch': {}, 'invariant': {}}
        self.vo_refs: List[Token] = []
        self.proximity_refs: List[Token] = []

    # ------ token helpers ------ #
    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def advance(self) -> Token:
        token = self.current
        if token.kind != 'eof':
            self.pos += 1
        return token

    def at(self, text: str) -> bool:
        token = self.current
        return token.kind in ('name', 'op') and token.text == text

    def fail(self, *expected: str) -> SpecSyntaxError:
        token = self.current
        return SpecSyntaxError(list(expected), token.describe(), token.line, token.column)

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.fail(f'"{text}"')
        return self.advance()

    def expect_name(self, what: str = 'a name') -> Token:
        if self.current.kind != 'name':
            raise self.fail(what)
        return self.advance()

    def signed_number(self, what: str = 'a number') -> Tuple[float, Token]:
        start = self.current
        sign = 1.0
        if self.at('-'):
            self.advance()
            sign = -1.0
        if self.current.kind != 'num':
            raise self.fail(what)
        return sign * float(self.advance().text), start

    # ------ items ------ #
    def parse_spec(self, source: str) -> VomasSpec:
        vo_agents, watches, invariants = [], [], []
        while self.current.kind != 'eof':
            if self.at('vo'):
                vo_agents.append(self.parse_vo_agent())
            elif self.at('watch'):
                watches.append(self.parse_watch())
            elif self.at('invariant'):
                invariants.append(self.parse_invariant())
            else:
                raise self.fail(*(f'"{keyword}"' for keyword in ITEM_KEYWORDS))
        for ref in self.vo_refs:
            if ref.text not in self.names['VO agent']:
                raise UnknownVoAgent(ref.text, ref.line, ref.column)
        spatial = {vo.name for vo in vo_agents if vo.is_spatial}
        for ref in self.proximity_refs:
            if ref.text not in spatial:
                raise SpecTypeError(f'proximity({ref.text})', 'spatial VO agent', 'global VO agent', ref.line, ref.column)
        return VomasSpec(tuple(vo_agents), tuple(watches), tuple(invariants), source=source)

    def declare(self, category: str, token: Token) -> None:
        if token.text in self.names[category]:
            raise DuplicateName(token.text, category, token.line, token.column)
        self.names[category][token.text] = token

    def end_of_item(self, *options: str) -> None:
        if self.current.kind == 'eof' or any(self.at(keyword) for keyword in ITEM_KEYWORDS):
            return
        raise self.fail(*(f'"{option}"' for option in options + ITEM_KEYWORDS), 'end of input')

    def parse_vo_agent(self) -> VOAgentDef:
        self.expect('vo')
        name = self.expect_name()
        self.declare('VO agent', name)
        if self.at('global'):
            self.advance()
            placement = GlobalPlacement()
        elif self.at('at'):
            self.advance()
            self.expect('(')
            x, _ = self.signed_number()
            self.expect(',')
            y, _ = self.signed_number()
            self.expect(')')
            self.expect('radius')
            radius, radius_token = self.signed_number()
            if radius < 0:
                raise PlacementError(name.text, f'has negative radius {radius}', radius_token.line, radius_token.column)
            placement = SpatialPlacement(x, y, radius)
        else:
            raise self.fail('"at"', '"global"')
        kind_filter = None
        if self.at('kind'):
            self.advance()
            kind_filter = self.expect_name('a kind name').text
        self.end_of_item('kind')
        return VOAgentDef(name.text, placement, kind_filter)

    def parse_watch(self) -> Watch:
        self.expect('watch')
        name = self.expect_name()
        self.declare('watch', name)
        self.expect('=')
        if self.at('proximity'):
            typed = self.parse_proximity()
        else:
            typed = self.parse_expr()
            if typed.type == AttrType.sym:
                raise self.type_error(typed, 'number or boolean')
        period = 1
        if self.at('every'):
            self.advance()
            token = self.current
            if token.kind != 'num' or not token.text.isdigit() or int(token.text) < 1:
                raise self.fail('a positive integer')
            period = int(self.advance().text)
        self.end_of_item('every')
        return Watch(name.text, typed.node, period)

    def parse_invariant(self) -> Invariant:
        self.expect('invariant')
        name = self.expect_name()
        self.declare('invariant', name)
        self.expect(':')
        scope = InvariantScope.every_tick
        if self.at('at_termination'):
            self.advance()
            scope = InvariantScope.at_termination
        typed = self.parse_expr()
        self.require(typed, AttrType.bool)
        policy = ViolationPolicy.log
        if self.at('on_violation'):
            self.advance()
            if self.at('halt'):
                policy = ViolationPolicy.halt
            elif not self.at('log'):
                raise self.fail('"halt"', '"log"')
            self.advance()
        self.end_of_item('on_violation')
        return Invariant(name.text, typed.node, scope, policy)

    # ------ type helpers ------ #
    @staticmethod
    def type_error(typed: _Typed, expected: str) -> SpecTypeError:
        return SpecTypeError(
            format_expr(typed.node), expected, typed.type.value, typed.token.line, typed.token.column
        )

    def require(self, typed: _Typed, expected: AttrType) -> None:
        if typed.type != expected:
            raise self.type_error(typed, expected.value)

    def attribute(self, token: Token) -> AttrType:
        try:
            return self.attributes[token.text]
        except KeyError:
            raise UnknownAttribute(token.text, token.line, token.column) from None

    # ------ expressions ------ #
    def parse_expr(self) -> _Typed:
        return self.parse_or()

    def parse_or(self) -> _Typed:
        left = self.parse_and()
        while self.at('or'):
            self.advance()
            right = self.parse_and()
            self.require(left, AttrType.bool)
            self.require(right, AttrType.bool)
            left = _Typed(Binary('or', left.node, right.node), AttrType.bool, left.token)
        return left

    def parse_and(self) -> _Typed:
        left = self.parse_not()
        while self.at('and'):
            self.advance()
            right = self.parse_not()
            self.require(left, AttrType.bool)
            self.require(right, AttrType.bool)
            left = _Typed(Binary('and', left.node, right.node), AttrType.bool, left.token)
        return left

    def parse_not(self) -> _Typed:
        if self.at('not'):
            token = self.advance()
            operand = self.parse_not()
            self.require(operand, AttrType.bool)
            return _Typed(Unary('not', operand.node), AttrType.bool, token)
        return self.parse_comparison()

    def parse_comparison(self) -> _Typed:
        left = self.parse_additive()
        if not (self.current.kind == 'op' and self.current.text in COMPARISON_OPS):
            return left
        op = self.advance().text
        right = self.parse_additive()
        if op in ('==', '!='):
            if left.type != right.type:
                raise self.type_error(right, left.type.value)
        else:
            self.require(left, AttrType.num)
            self.require(right, AttrType.num)
        if self.current.kind == 'op' and self.current.text in COMPARISON_OPS:
            raise self.fail('"and"', '"or"', '")"')
        return _Typed(Binary(op, left.node, right.node), AttrType.bool, left.token)

    def parse_additive(self) -> _Typed:
        left = self.parse_multiplicative()
        while self.at('+') or self.at('-'):
            op = self.advance().text
            right = self.parse_multiplicative()
            self.require(left, AttrType.num)
            self.require(right, AttrType.num)
            left = _Typed(Binary(op, left.node, right.node), AttrType.num, left.token)
        return left

    def parse_multiplicative(self) -> _Typed:
        left = self.parse_unary()
        while self.at('*') or self.at('/'):
            op = self.advance().text
            right = self.parse_unary()
            self.require(left, AttrType.num)
            self.require(right, AttrType.num)
            left = _Typed(Binary(op, left.node, right.node), AttrType.num, left.token)
        return left

    def parse_unary(self) -> _Typed:
        if self.at('-'):
            token = self.advance()
            if self.current.kind == 'num':
                return _Typed(Literal(-_parse_number(self.advance().text)), AttrType.num, token)
            operand = self.parse_unary()
            self.require(operand, AttrType.num)
            return _Typed(Unary('-', operand.node), AttrType.num, token)
        return self.parse_atom()

    def parse_atom(self) -> _Typed:
        token = self.current
        if token.kind == 'num':
            self.advance()
            return _Typed(Literal(_parse_number(token.text)), AttrType.num, token)
        if self.at('('):
            self.advance()
            inner = self.parse_expr()
            self.expect(')')
            return _Typed(inner.node, inner.type, token)
        if token.kind != 'name':
            raise self.fail('an expression')
        if token.text in ('true', 'false'):
            self.advance()
            return _Typed(Literal(token.text == 'true'), AttrType.bool, token)
        if token.text == 'tick':
            self.advance()
            return _Typed(TickRef(), AttrType.num, token)
        if token.text in _CALL_KEYWORDS:
            if self.peek().text != '(':
                raise SpecSyntaxError(['"("'], self.peek().describe(), self.peek().line, self.peek().column)
            if token.text in AGGREGATES:
                return self.parse_aggregate()
            if token.text in QUANTIFIERS:
                return self.parse_quantifier()
            if token.text == 'approx':
                return self.parse_approx()
            if token.text == 'if':
                return self.parse_conditional()
            proximity = self.parse_proximity()
            raise SpecTypeError(format_expr(proximity.node), 'scalar expression', 'proximity report', token.line, token.column)
        self.advance()
        if self.at('.'):
            self.advance()
            attr = self.expect_name('an attribute name')
            if token.text not in self.scopes:
                raise UnboundVariable(token.text, token.line, token.column)
            return _Typed(AttrRef(token.text, attr.text), self.attribute(attr), token)
        if None in self.scopes and token.text in self.attributes:
            return _Typed(AttrRef(None, token.text), self.attributes[token.text], token)
        return _Typed(Literal(token.text), AttrType.sym, token)

    def parse_aggregate(self) -> _Typed:
        func = self.advance()
        self.expect('(')
        agent_set = self.parse_set()
        attr = None
        if self.at(','):
            self.advance()
            attr_token = self.expect_name('an attribute name')
            attr_type = self.attribute(attr_token)
            if func.text in _NO_ATTRIBUTE_AGGREGATES:
                raise SpecTypeError(
                    f'{func.text}(...)', 'no attribute argument', attr_token.text, attr_token.line, attr_token.column
                )
            if attr_type != AttrType.num:
                raise SpecTypeError(attr_token.text, AttrType.num.value, attr_type.value, attr_token.line, attr_token.column)
            attr = attr_token.text
        elif func.text not in _NO_ATTRIBUTE_AGGREGATES:
            raise self.fail('","')
        self.expect(')')
        return _Typed(Aggregate(func.text, agent_set, attr), AttrType.num, func)

    def parse_binder(self) -> Optional[str]:
        if self.current.kind == 'name' and self.peek().text == '->':
            var = self.advance().text
            self.advance()
            return var
        return None

    def parse_bound_body(self, var: Optional[str]) -> _Typed:
        self.scopes.append(var)
        try:
            body = self.parse_expr()
        finally:
            self.scopes.pop()
        self.require(body, AttrType.bool)
        return body

    def parse_quantifier(self) -> _Typed:
        func = self.advance()
        self.expect('(')
        agent_set = self.parse_set()
        self.expect(',')
        var = self.parse_binder()
        body = self.parse_bound_body(var)
        self.expect(')')
        return _Typed(Quantifier(func.text, agent_set, var, body.node), AttrType.bool, func)

    def parse_approx(self) -> _Typed:
        token = self.advance()
        self.expect('(')
        left = self.parse_expr()
        self.require(left, AttrType.num)
        self.expect(',')
        right = self.parse_expr()
        self.require(right, AttrType.num)
        self.expect(',')
        if self.current.kind != 'num':
            raise self.fail('a non-negative number')
        eps = float(self.advance().text)
        self.expect(')')
        return _Typed(Approx(left.node, right.node, eps), AttrType.bool, token)

    def parse_conditional(self) -> _Typed:
        token = self.advance()
        self.expect('(')
        cond = self.parse_expr()
        self.require(cond, AttrType.bool)
        self.expect(',')
        then = self.parse_expr()
        self.expect(',')
        otherwise = self.parse_expr()
        if otherwise.type != then.type:
            raise self.type_error(otherwise, then.type.value)
        self.expect(')')
        return _Typed(Conditional(cond.node, then.node, otherwise.node), then.type, token)

    def parse_proximity(self) -> _Typed:
        token = self.advance()
        self.expect('(')
        vo = self.expect_name('a VO agent name')
        self.vo_refs.append(vo)
        self.proximity_refs.append(vo)
        var, body = None, None
        if self.at(','):
            self.advance()
            var = self.parse_binder()
            body = self.parse_bound_body(var).node
        self.expect(')')
        return _Typed(Proximity(vo.text, var, body), AttrType.num, token)

    # ------ sets ------ #
    def parse_set(self) -> AgentSet:
        vo = None
        if self.at('within'):
            self.advance()
            self.expect('(')
            ref = self.expect_name('a VO agent name')
            self.vo_refs.append(ref)
            vo = ref.text
            self.expect(')')
        elif self.at('agents'):
            self.advance()
        else:
            raise self.fail('"agents"', '"within"')
        filters = []
        while self.at('['):
            self.advance()
            filters.append(self.parse_filter())
            self.expect(']')
        return AgentSet(vo, tuple(filters))

    def parse_filter(self) -> Filter:
        attr = self.expect_name('an attribute name')
        attr_type = self.attribute(attr)
        if not (self.current.kind == 'op' and self.current.text in COMPARISON_OPS):
            raise self.fail(*(f'"{op}"' for op in COMPARISON_OPS))
        op = self.advance().text
        if op not in ('==', '!=') and attr_type != AttrType.num:
            raise SpecTypeError(f'{attr.text} {op}', AttrType.num.value, attr_type.value, attr.line, attr.column)
        token = self.current
        if self.at('-') or token.kind == 'num':
            negative = self.at('-')
            if negative:
                self.advance()
            if self.current.kind != 'num':
                raise self.fail('a number')
            value = _parse_number(self.advance().text)
            value, value_type = (-value if negative else value), AttrType.num
        elif token.kind == 'name':
            self.advance()
            if token.text in ('true', 'false'):
                value, value_type = token.text == 'true', AttrType.bool
            else:
                value, value_type = token.text, AttrType.sym
        else:
            raise self.fail('a literal')
        if value_type != attr_type:
            raise SpecTypeError(str(value), attr_type.value, value_type.value, token.line, token.column)
        return Filter(attr.text, op, value)


def compile_spec(text: str, attributes: Optional[Mapping[str, AttrType]] = None) -> VomasSpec:
    """Compile VOMAS spec text into a checked :class:`VomasSpec`.

    Args:
        text (str): spec source.
        attributes (Optional[Mapping[str, AttrType]], optional): attribute name -> type
            used for name resolution and type checking. Defaults to the union of all
            registered models' attributes.

    Returns:
        VomasSpec: compiled spec; empty text yields an empty spec.

    Raises:
        SpecError: a positioned diagnostic (syntax, name or type error).
    """
    if attributes is None:
        from .. import models  # noqa: F401  (registers the bundled models)
        from ..engine.registry import ModelRegistry

        attributes = ModelRegistry.attribute_types()
    spec = _Parser(text, attributes).parse_spec(text)
    logger.debug(
        f'Compiled spec: {len(spec.vo_agents)} VO agent(s), '
        f'{len(spec.watches)} watch(es), {len(spec.invariants)} invariant(s)'
    )
    return spec
