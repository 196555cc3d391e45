"""
>>> pytest tests/vomas/test_parser.py
"""
import pytest

from vomasim.data_structure.constants import InvariantScope, ViolationPolicy
from vomasim.models import spec_path
from vomasim.vomas import (
    DuplicateName,
    PlacementError,
    SpecError,
    SpecSyntaxError,
    SpecTypeError,
    UnboundVariable,
    UnknownAttribute,
    UnknownVoAgent,
    compile_spec,
    format_expr,
    format_spec,
)
from vomasim.vomas.expr import (
    AgentSet,
    Aggregate,
    AttrRef,
    Binary,
    Filter,
    GlobalPlacement,
    Literal,
    Proximity,
    Quantifier,
    SpatialPlacement,
    Unary,
)
from vomasim.vomas.parser import tokenize

from ..oracles import random_spec

round_trip_specs = [
    'watch a = 1 + 2 * 3',
    'watch a = (1 + 2) * 3',
    'watch a = 1 - (2 - 3)',
    'watch a = 1 - 2 - 3',
    'watch a = -count(agents) / 2 every 5',
    'watch a = -(3) + --2',
    'watch a = not (true and false) or true',
    'watch a = (1 < 2) == true',
    'watch a = if(tick > 3, 1.5, -0.25)',
    'watch a = approx(avg(agents[kind == sheep], x), 25.0, 0.5)',
    'invariant i: forall(agents[pubs >= 0][policy != none], a -> a.pubs >= 0 and a.pubs < 1000)',
    'invariant i: exists(agents, kind == wolf) on_violation halt',
    'invariant i: at_termination largest_component_fraction(agents) >= 0.5',
    'vo center at (25.0, 25.0) radius 10.0 kind sheep\nwatch near = proximity(center, s -> s.x > 1.0)',
    'vo all global\nwatch n = components(within(all)[energy > 2.5])',
]


@pytest.mark.parametrize('text', round_trip_specs)
def test_pretty_printer_round_trips(text):
    spec = compile_spec(text)
    printed = format_spec(spec)
    again = compile_spec(printed)
    assert again == spec, f'{text!r} printed as {printed!r} compiled differently'
    assert format_spec(again) == printed


def test_shipped_specs_round_trip():
    for name in ('researchers.vomas', 'wolfsheep.vomas'):
        spec = compile_spec(spec_path(name).read_text(encoding='utf-8'))
        assert compile_spec(format_spec(spec)) == spec, f'{name} does not round trip'


def test_empty_and_comment_only_text_compile_to_an_empty_spec():
    assert compile_spec('').is_empty
    assert compile_spec('# nothing here\n\n   # still nothing\n').is_empty


def test_precedence_and_associativity():
    spec = compile_spec('watch a = 1 - 2 - 3\nwatch b = 1 + 2 * 3\nwatch c = not true or false')
    a, b, c = (watch.expr for watch in spec.watches)
    assert a == Binary('-', Binary('-', Literal(1), Literal(2)), Literal(3))
    assert b == Binary('+', Literal(1), Binary('*', Literal(2), Literal(3)))
    assert c == Binary('or', Unary('not', Literal(True)), Literal(False))


def test_negative_literals_fold_only_before_numbers():
    spec = compile_spec('watch a = -3\nwatch b = -tick\nwatch c = 2 - 3')
    a, b, c = (watch.expr for watch in spec.watches)
    assert a == Literal(-3)
    assert isinstance(b, Unary) and b.op == '-'
    assert c == Binary('-', Literal(2), Literal(3))


def test_items_and_options():
    spec = compile_spec(
        """
        vo corner at (1, 2.5) radius 3 kind wolf   # a spatial VO agent
        vo everyone global
        watch wolves = count(within(corner)) every 10
        invariant keep: at_termination count(within(everyone)) > 0 on_violation log
        invariant stop: count(agents) > 0 on_violation halt
        """
    )
    corner, everyone = spec.vo_agents
    assert corner.placement == SpatialPlacement(1.0, 2.5, 3.0) and corner.kind_filter == 'wolf'
    assert everyone.placement == GlobalPlacement() and not everyone.is_spatial
    assert spec.watches[0].period == 10
    assert spec.watches[0].expr == Aggregate('count', AgentSet('corner'))
    keep, stop = spec.invariants
    assert (keep.scope, keep.on_violation) == (InvariantScope.at_termination, ViolationPolicy.log)
    assert (stop.scope, stop.on_violation) == (InvariantScope.every_tick, ViolationPolicy.halt)


def test_vo_agents_may_be_referenced_before_declaration():
    spec = compile_spec('watch n = count(within(late))\nvo late global')
    assert spec.vo_agent('late').name == 'late'


def test_implicit_binder_reads_attributes_of_the_element():
    spec = compile_spec('invariant i: forall(agents, pubs >= 0 and policy != none)')
    body = spec.invariants[0].predicate
    assert isinstance(body, Quantifier) and body.var is None
    assert body.body == Binary(
        'and', Binary('>=', AttrRef(None, 'pubs'), Literal(0)), Binary('!=', AttrRef(None, 'policy'), Literal('none'))
    )


def test_filters_keep_literal_types():
    spec = compile_spec('watch n = count(agents[energy > -1.5][kind == wolf])')
    assert spec.watches[0].expr.set.filters == (Filter('energy', '>', -1.5), Filter('kind', '==', 'wolf'))


def test_keywords_are_contextual():
    spec = compile_spec('watch every = 1 every 2\nwatch watch = 2\ninvariant tick: tick >= 0')
    assert [w.name for w in spec.watches] == ['every', 'watch']
    assert spec.watches[0].period == 2
    assert spec.invariants[0].name == 'tick'


def test_proximity_watch():
    spec = compile_spec('vo pen at (5, 5) radius 2\nwatch near = proximity(pen)')
    assert spec.watches[0].expr == Proximity('pen')


positioned_diagnostics = [
    ('watch a = 1 +', SpecSyntaxError, 1, 14),
    ('watch a 1', SpecSyntaxError, 1, 9),
    ('watch a = 1\nfoo', SpecSyntaxError, 2, 1),
    ('watch a = 1 < 2 < 3', SpecSyntaxError, 1, 17),
    ('watch a = (1', SpecSyntaxError, 1, 13),
    ('watch a = 1 every 0', SpecSyntaxError, 1, 19),
    ('watch a = 1 every 1.5', SpecSyntaxError, 1, 19),
    ('watch a = 1 $', SpecSyntaxError, 1, 13),
    ('watch a = 1\nwatch a = 2', DuplicateName, 2, 7),
    ('vo v global\nvo v global', DuplicateName, 2, 4),
    ('watch n = count(within(nowhere))', UnknownVoAgent, 1, 24),
    ('watch n = sum(agents, height)', UnknownAttribute, 1, 23),
    ('watch n = count(agents[height > 1])', UnknownAttribute, 1, 24),
    ('invariant i: forall(agents, a -> b.pubs > 0)', UnboundVariable, 1, 34),
    ('watch n = a.pubs', UnboundVariable, 1, 11),
    ('invariant i: 1 + 2', SpecTypeError, 1, 14),
    ('watch n = true + 1', SpecTypeError, 1, 11),
    ('watch n = wolf', SpecTypeError, 1, 11),
    ('watch n = 1 == true', SpecTypeError, 1, 16),
    ('watch n = sum(agents, policy)', SpecTypeError, 1, 23),
    ('watch n = count(agents, pubs)', SpecTypeError, 1, 25),
    ('watch n = count(agents[policy > 1])', SpecTypeError, 1, 24),
    ('watch n = count(agents[pubs == wolf])', SpecTypeError, 1, 32),
    ('watch n = if(true, 1, false)', SpecTypeError, 1, 23),
    ('vo g global\nwatch n = proximity(g)', SpecTypeError, 2, 21),
    ('vo p at (1, 1) radius 1\nwatch n = 1 + proximity(p)', SpecTypeError, 2, 15),
    ('vo p at (1, 1) radius -1', PlacementError, 1, 23),
    ('watch big = 1e999', SpecSyntaxError, 1, 13),
    ('watch n = ' + '1' * 400, SpecSyntaxError, 1, 11),
    ('vo v at (1e999, 1) radius 1', SpecSyntaxError, 1, 10),
]


@pytest.mark.parametrize('text, error, line, column', positioned_diagnostics)
def test_diagnostics_are_positioned(text, error, line, column):
    with pytest.raises(error) as excinfo:
        compile_spec(text)
    e = excinfo.value
    assert (e.line, e.column) == (line, column), f'{text!r}: {type(e).__name__} at {e.line}:{e.column}: {e.message}'
    assert e.message.startswith(f'line {line}, column {column}: ')


def test_syntax_error_names_what_was_expected():
    with pytest.raises(SpecSyntaxError) as excinfo:
        compile_spec('watch a = 1 +')
    assert excinfo.value.found == 'end of input'
    assert excinfo.value.expected == ['an expression']


def test_tokenize_tracks_lines_and_columns():
    tokens = tokenize('watch a = 1 # note\n  invariant')
    assert [(t.kind, t.text, t.line, t.column) for t in tokens] == [
        ('name', 'watch', 1, 1),
        ('name', 'a', 1, 7),
        ('op', '=', 1, 9),
        ('num', '1', 1, 11),
        ('name', 'invariant', 2, 3),
        ('eof', '', 2, 12),
    ]


def test_format_expr_parenthesizes_only_where_needed():
    spec = compile_spec('watch a = ((1 + 2)) * (3)\nwatch b = 1 + (2 * 3)')
    assert [format_expr(w.expr) for w in spec.watches] == ['(1 + 2) * 3', '1 + 2 * 3']


def test_random_specs_round_trip(rng):
    for _ in range(200):
        text = random_spec(rng)
        spec = compile_spec(text)
        printed = format_spec(spec)
        assert compile_spec(printed) == spec, f'{text!r} printed as {printed!r} compiled differently'


malformed_specs = [
    'watch',
    'watch = 1',
    'watch 3 = 1',
    'watch a =',
    'watch a = ()',
    'watch a = 1 2',
    'watch a = 1 + + 2',
    'watch a = tick.x',
    'watch a = count(agents',
    'watch a = count(agents]',
    'watch a = count(agents[kind wolf])',
    'watch a = count(agents[kind ==])',
    '# only a comment\nwatch a = count(agents[])',
    'watch a = sum(agents)',
    'watch a = sum(agents, )',
    'watch a = forall(agents)',
    'watch a = forall(agents, a ->)',
    'watch a = approx(1, 2)',
    'watch a = approx(1, 2, tick)',
    'watch a = if(1, 2, 3)',
    'watch a = if(true, 2)',
    'watch a = 1 every',
    'watch a = 1 every -1',
    'watch a = not 1',
    'watch a = -true',
    'watch a = 1 == wolf',
    'watch a = 1 < (2 < 3)',
    'watch a = proximity()',
    'watch a = count(within())',
    'watch a = count(within(v))',
    'watch a = 1\n\n  watch b = 2 $',
    'invariant i 1 < 2',
    'invariant i: tick',
    'invariant i: at_termination',
    'invariant i: true on_violation stop',
    'invariant i: forall(agents, a -> a.nope > 0)',
    'vo',
    'vo v',
    'vo v at (1 1) radius 2',
    'vo v at (1, 1) 2',
    'vo v at (1, 1) radius',
    'vo v global kind',
    'vo v global kind 3',
    'foo bar',
]


def test_malformed_specs_give_positioned_diagnostics():
    texts = malformed_specs + [text for text, *_ in positioned_diagnostics]
    assert len(texts) >= 50
    for text in texts:
        with pytest.raises(SpecError) as excinfo:
            compile_spec(text)
        e = excinfo.value
        lines = text.split('\n')
        assert 1 <= e.line <= len(lines), f'{text!r}: {e.message}'
        assert 1 <= e.column <= len(lines[e.line - 1]) + 1, f'{text!r}: {e.message}'
