"""Lexer, parser, checker, and evaluator for the statement language."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dimcheck.decvalue import DecValue
from dimcheck.dimension import Dimension
from dimcheck.measure import default_registry
from dimcheck.quantlang import (
    BinOp,
    Compare,
    ConstDecl,
    DeriveDecl,
    LexError,
    Literal,
    Name,
    Neg,
    ParseError,
    Pow,
    Program,
    Statement,
    UnitDecl,
    VarDecl,
    analyze,
    evaluate,
    free_variables,
    parse,
    parse_expression,
    render_expression,
    render_program,
    tokenize,
)


# -- lexer ----------------------------------------------------------------


def test_token_positions_are_one_based():
    toks = tokenize("check x\n  eval y")
    assert (toks[0].line, toks[0].col) == (1, 1)
    assert (toks[1].line, toks[1].col) == (1, 7)
    assert (toks[2].line, toks[2].col) == (2, 3)
    assert (toks[3].line, toks[3].col) == (2, 8)


def test_comments_are_skipped():
    toks = tokenize("# nothing\ncheck x # trailing\n")
    kinds = [(t.kind, t.text) for t in toks]
    assert kinds[:2] == [("KEYWORD", "check"), ("IDENT", "x")]


@pytest.mark.parametrize("src,col", [("1e", 1), ("1.", 1), ("  3.e2", 3), ("x + 12.", 5)])
def test_dangling_number_is_a_lex_error_at_number_start(src, col):
    with pytest.raises(LexError) as err:
        tokenize(src)
    assert err.value.col == col
    assert err.value.line == 1


def test_number_forms():
    toks = tokenize("0 3.25 1e6 2.5e-3")
    values = [t.value for t in toks if t.kind == "NUMBER"]
    assert values[0] == DecValue.from_int(0)
    assert values[1] == DecValue.parse("3.25")
    assert values[2] == DecValue.parse("1e6")
    assert values[3] == DecValue.parse("2.5e-3")


def test_unexpected_character():
    with pytest.raises(LexError) as err:
        tokenize("check $x")
    assert (err.value.line, err.value.col) == (1, 7)


# -- parser ---------------------------------------------------------------


def test_precedence_mul_binds_tighter_than_add():
    e = parse_expression("a + b * c")
    assert isinstance(e, BinOp) and e.op == "+"
    assert isinstance(e.right, BinOp) and e.right.op == "*"


def test_precedence_pow_binds_tighter_than_mul():
    e = parse_expression("a * b ^ 2")
    assert isinstance(e, BinOp) and e.op == "*"
    assert isinstance(e.right, Pow) and e.right.power == 2


def test_left_associativity():
    e = parse_expression("a - b - c")
    assert isinstance(e, BinOp) and e.op == "-"
    assert isinstance(e.left, BinOp) and e.left.op == "-"
    assert isinstance(e.right, Name) and e.right.ident == "c"


def test_number_with_unit_suffix():
    e = parse_expression("10 second")
    assert isinstance(e, Literal)
    assert e.value == DecValue.from_int(10)
    assert e.unit == "second"


def test_bare_number_is_unitless():
    e = parse_expression("42")
    assert isinstance(e, Literal) and e.unit is None


def test_negation():
    e = parse_expression("-3 kph")
    assert isinstance(e, Neg) and isinstance(e.operand, Literal)


def test_parenthesized_comparison_at_top_level():
    p = parse("check (a > b)")
    stmt = p.items[0]
    assert isinstance(stmt, Statement)
    assert isinstance(stmt.expr, Compare)


def test_nested_comparison_rejected():
    with pytest.raises(ParseError):
        parse("check (a > b) + c")
    with pytest.raises(ParseError):
        parse("check a > (b > c)")


def test_comparison_not_allowed_in_declarations():
    with pytest.raises(ParseError):
        parse("const k : second = 1 > 2")


def test_declarations():
    p = parse(
        "unit knot : Length / Time scale 463/900\n"
        "derive joule_ish = Kilogram * mps * mps\n"
        "const limit : knot = 30\n"
        "var speed : knot\n"
    )
    u, d, c, v = p.items
    assert isinstance(u, UnitDecl) and u.name == "knot"
    assert u.dimension == Dimension.of(length=1, time=-1)
    assert u.scale == Fraction(463, 900)
    assert u.offset is None
    assert isinstance(d, DeriveDecl) and d.first == "Kilogram"
    assert d.rest == (("*", "mps"), ("*", "mps"))
    assert isinstance(c, ConstDecl) and c.value == DecValue.from_int(30)
    assert isinstance(v, VarDecl) and v.unit == "knot"


def test_unit_decl_with_offset():
    p = parse("unit reaumur : Temperature scale 5/4 offset 5463/20")
    decl = p.items[0]
    assert decl.scale == Fraction(5, 4)
    assert decl.offset == Fraction(5463, 20)


def test_parse_error_states_expectation():
    with pytest.raises(ParseError) as err:
        parse("check 3 +")
    assert "expected" in str(err.value)


def test_statement_requires_expression():
    with pytest.raises(ParseError):
        parse("check")


# -- render/parse round trip ----------------------------------------------

idents = st.sampled_from(["x", "y", "vel", "t_0", "q"])
unit_names = st.sampled_from(["second", "gram", "kph", "celsius", None])
literals = st.builds(
    Literal,
    value=st.integers(0, 10**6).map(DecValue.from_int),
    unit=unit_names,
)


def exprs(depth: int):
    if depth == 0:
        return st.one_of(literals, st.builds(Name, ident=idents))
    sub = exprs(depth - 1)
    return st.one_of(
        literals,
        st.builds(Name, ident=idents),
        st.builds(BinOp, op=st.sampled_from("+-*/"), left=sub, right=sub),
        st.builds(Pow, base=sub, power=st.integers(-6, 6)),
        st.builds(Neg, operand=sub),
    )


statements = st.one_of(
    st.builds(Statement, kind=st.sampled_from(["check", "eval"]), expr=exprs(3)),
    st.builds(
        Statement,
        kind=st.just("check"),
        expr=st.builds(
            Compare, op=st.sampled_from(["<", "<=", ">", ">=", "==", "!="]),
            left=exprs(2), right=exprs(2),
        ),
    ),
)

programs = st.builds(Program, items=st.lists(statements, max_size=5).map(tuple))


@given(p=programs)
@settings(max_examples=300)
def test_parse_render_roundtrip(p):
    assert parse(render_program(p)) == p


@given(e=exprs(3))
@settings(max_examples=300)
def test_expression_roundtrip(e):
    assert parse_expression(render_expression(e)) == e


def test_declaration_roundtrip():
    src = (
        "unit knot : Length / Time scale 463/900\n"
        "const limit : knot = 30\n"
        "var speed : knot\n"
        "check speed < limit\n"
    )
    p = parse(src)
    assert parse(render_program(p)) == p


# -- checker --------------------------------------------------------------


def test_check_ok_and_mismatch_verdicts():
    p = parse(
        "var a : kph\n"
        "var b : kph\n"
        "check a > b - 3 kph\n"
        "check a > b - 3 second\n"
        "check a * 2 < b\n"
    )
    analysis = analyze(p)
    verdicts = analysis.report.entries
    assert [v.ok for v in verdicts] == [True, True, True, False, True]
    bad = verdicts[3]
    assert bad.error_kind == "DimensionMismatch"
    assert "L^1·T^-1" in bad.message and "T^1" in bad.message


def test_checker_continues_past_errors():
    p = parse(
        "check unknown_thing > 1 second\n"
        "var ok_var : second\n"
        "check ok_var < 5 second\n"
    )
    analysis = analyze(p)
    assert [v.ok for v in analysis.report.entries] == [False, True, True]
    assert analysis.report.entries[0].error_kind == "UnknownName"


def test_unknown_unit_in_literal():
    analysis = analyze(parse("check 3 cubit > 1 second"))
    assert analysis.report.entries[0].error_kind == "UnknownName"


def test_assert_requires_comparison():
    analysis = analyze(parse("assert 3 second"))
    v = analysis.report.entries[0]
    assert not v.ok and v.error_kind == "AssertForm"


def test_assert_with_comparison_is_fine():
    analysis = analyze(parse("assert 3 second < 1 minute"))
    assert analysis.report.entries[0].ok


def test_unit_declarations_extend_a_private_registry():
    p = parse(
        "unit smoot : Length scale 17018/10000\n"
        "var bridge : smoot\n"
        "check bridge > 100 smoot\n"
    )
    analysis = analyze(p)
    assert all(v.ok for v in analysis.report.entries)
    # the shared default registry must stay untouched
    assert "smoot" not in default_registry()


def test_derive_declaration_in_program():
    p = parse(
        "derive accel = mps / Second\n"
        "var g : accel\n"
        "check g < 10 accel\n"
    )
    analysis = analyze(p)
    assert all(v.ok for v in analysis.report.entries)


def test_duplicate_unit_decl_reported():
    analysis = analyze(parse("unit gram : Mass scale 1/1000"))
    v = analysis.report.entries[0]
    assert not v.ok and v.error_kind == "DuplicateName"


def test_dimensionless_literal_as_scalar_factor():
    p = parse("var d : metre\ncheck d * 2 > d\n")
    assert all(v.ok for v in analyze(p).report.entries)


def test_dimensionless_literal_additive_mismatch():
    analysis = analyze(parse("var d : metre\ncheck d + 2 > d\n"))
    entries = analysis.report.entries
    assert not entries[1].ok and entries[1].error_kind == "DimensionMismatch"


def test_mixed_same_dimension_units_check_ok():
    p = parse("var t : decisecond\ncheck t > 10 second\n")
    assert all(v.ok for v in analyze(p).report.entries)


# -- evaluator ------------------------------------------------------------


@pytest.fixture()
def reg():
    return default_registry()


def ev(src, reg, env=None):
    return evaluate(parse_expression(src), env or {}, reg)


def test_evaluate_literal_arithmetic(reg):
    got = ev("100 gram + 2 pound", reg)
    assert str(got.value) == "1007.18474"
    assert got.unit.name == "gram"


def test_affine_addition_is_pointwise(reg):
    got = ev("0 celsius + 0 celsius", reg)
    assert got.unit.name == "celsius"
    assert str(got.value) == "273.15"
    got2 = ev("2 celsius + 3 celsius", reg)
    assert str(got2.value) == "278.15"


def test_affine_subtraction_pointwise(reg):
    got = ev("10 celsius - 10 celsius", reg)
    assert got.unit.name == "celsius"
    # 283.15 - 283.15 = 0 K, expressed in celsius: -273.15
    assert str(got.value) == "-273.15"


def test_comparison_evaluates_to_bool(reg):
    assert ev("1000 gram == 1 kilogram", reg) is True
    assert ev("5 minute > 200 second", reg) is True
    assert ev("1 gram > 1 kilogram", reg) is False


def test_evaluate_with_environment(reg):
    env = {
        "currentTime": reg.make(DecValue.from_int(101), reg.resolve("decisecond")),
        "T_extend": reg.make(DecValue.from_int(0), reg.resolve("decisecond")),
    }
    assert ev("currentTime > T_extend + 10 second", reg, env) is True
    env["currentTime"] = reg.make(DecValue.from_int(100), reg.resolve("decisecond"))
    assert ev("currentTime > T_extend + 10 second", reg, env) is False


def test_evaluate_mismatch_raises(reg):
    from dimcheck.measure import DimensionMismatchError

    with pytest.raises(DimensionMismatchError):
        ev("1 kph + 3 second", reg)


def test_evaluate_power_and_division(reg):
    got = ev("(3 kilometre) / (0.5 hour)", reg)
    assert got.unit.name == "kph" and str(got.value) == "6"
    got2 = ev("(2 metre) ^ 2", reg)
    assert got2.unit.dimension == Dimension.of(length=2)
    assert got2.value == DecValue.from_int(4)


def test_free_variables(reg):
    expr = parse_expression("a + b * 2 second")
    assert free_variables(expr, {}) == {"a", "b"}
    assert free_variables(expr, {"a": None}) == {"b"}


# -- soundness: checked-OK closed expressions evaluate without mismatch ---


closed_exprs = st.recursive(
    st.builds(
        Literal,
        value=st.integers(0, 1000).map(DecValue.from_int),
        unit=st.sampled_from(["second", "minute", "gram", "kph", None]),
    ),
    lambda sub: st.one_of(
        st.builds(BinOp, op=st.sampled_from("+-*/"), left=sub, right=sub),
        st.builds(Neg, operand=sub),
    ),
    max_leaves=8,
)


@given(e=closed_exprs)
@settings(max_examples=300, deadline=None)
def test_checker_soundness_for_closed_expressions(e):
    from dimcheck.measure import DimensionMismatchError

    registry = default_registry()
    program = Program(items=(Statement(kind="eval", expr=e),))
    analysis = analyze(program, registry)
    verdict = analysis.report.entries[0]
    if not verdict.ok:
        return
    try:
        evaluate(e, {}, analysis.registry)
    except DimensionMismatchError:
        raise AssertionError(f"checker passed but evaluation mismatched: {render_expression(e)}")
    except ZeroDivisionError:
        pass
