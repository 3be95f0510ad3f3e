"""A small checked expression language over measurements.

Programs are sequences of declarations (``unit``, ``derive``, ``const``,
``var``) and statements (``check``, ``eval``, ``assert``).  Expressions
combine unit-tagged decimal literals and declared names with the usual
infix operators; ``^`` takes an integer power and comparisons may appear
only at the top of a statement.

The pipeline is tokenize -> parse -> check -> evaluate.  Checking is
purely static: it extends the registry with the program's unit
declarations and infers a dimension for every statement, reporting one
verdict per program item and continuing past errors.  Evaluation needs a
binding for every ``var`` and works measurement-by-measurement.

Additive semantics: operands must share a dimension; values are combined
on the canonical scale (so a literal in an offset unit denotes an absolute
point) and the result is mapped back into the first operand's unit.  For
offset-free units this coincides with plain converted addition.

All parse products are immutable; source positions carry line and column
(1-based) but never participate in structural equality, so a rendered
program reparses to an equal tree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .decvalue import DecValue, PrecisionContext
from .dimension import DIMENSIONLESS, Dimension, base_by_name
from .measure import (
    DimensionMismatchError,
    Measurement,
    Unit,
    UnitError,
    UnitRegistry,
    default_registry,
)

__all__ = [
    "Token",
    "tokenize",
    "parse",
    "parse_tokens",
    "parse_expression",
    "render_program",
    "render_expression",
    "Program",
    "UnitDecl",
    "DeriveDecl",
    "ConstDecl",
    "VarDecl",
    "Statement",
    "Literal",
    "Name",
    "Neg",
    "BinOp",
    "Pow",
    "Compare",
    "Verdict",
    "CheckReport",
    "Analysis",
    "analyze",
    "check_program",
    "infer_dimension",
    "evaluate",
    "free_variables",
    "LangError",
    "LexError",
    "ParseError",
    "UnknownNameError",
]

KEYWORDS = frozenset(
    {"unit", "derive", "const", "var", "check", "eval", "assert", "scale", "offset"}
)

_COMPARE_OPS = ("==", "!=", "<=", ">=", "<", ">")
_OP_TO_MEASURE = {"==": "eq", "!=": "neq", "<": "lt", "<=": "le", ">": "gt", ">=": "ge"}


class LangError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(message)
        self.line = line
        self.col = col

    @property
    def kind(self) -> str:
        return type(self).__name__.removesuffix("Error")


class LexError(LangError):
    pass


class ParseError(LangError):
    def __init__(self, message: str, line: int, col: int, expected: tuple = ()):
        super().__init__(message, line, col)
        self.expected = expected


class UnknownNameError(LangError):
    pass


# -- lexer ----------------------------------------------------------------


@dataclass(frozen=True)
class Token:
    kind: str  # NUMBER | IDENT | KEYWORD | OP | EOF
    text: str
    line: int
    col: int
    value: DecValue | None = None


_TWO_CHAR_OPS = ("==", "!=", "<=", ">=")
_ONE_CHAR_OPS = "+-*/^():=<>"


def tokenize(source: str) -> list[Token]:
    """Lex a program; numbers carry their exact decimal value."""
    tokens: list[Token] = []
    line, col = 1, 1
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and source[i] != "\n":
                i += 1
            continue
        if ch.isdigit():
            start, start_col = i, col
            i = _scan_number(source, i, line, start_col)
            text = source[start:i]
            col += i - start
            tokens.append(Token("NUMBER", text, line, start_col, DecValue.parse(text)))
            continue
        if ch.isalpha() or ch == "_":
            start, start_col = i, col
            while i < n and (source[i].isalnum() or source[i] == "_"):
                i += 1
            text = source[start:i]
            col += i - start
            kind = "KEYWORD" if text in KEYWORDS else "IDENT"
            tokens.append(Token(kind, text, line, start_col))
            continue
        two = source[i : i + 2]
        if two in _TWO_CHAR_OPS:
            tokens.append(Token("OP", two, line, col))
            i += 2
            col += 2
            continue
        if ch in _ONE_CHAR_OPS:
            tokens.append(Token("OP", ch, line, col))
            i += 1
            col += 1
            continue
        raise LexError(f"illegal character {ch!r}", line, col)
    if tokens:
        last = tokens[-1]
        tokens.append(Token("EOF", "", last.line, last.col + len(last.text)))
    else:
        tokens.append(Token("EOF", "", line, col))
    return tokens


def _scan_number(source: str, i: int, line: int, col: int) -> int:
    n = len(source)
    while i < n and source[i].isdigit():
        i += 1
    if i < n and source[i] == ".":
        if i + 1 >= n or not source[i + 1].isdigit():
            raise LexError("malformed number: digits must follow the point", line, col)
        i += 1
        while i < n and source[i].isdigit():
            i += 1
    if i < n and source[i] in "eE":
        j = i + 1
        if j < n and source[j] == "-":
            j += 1
        if j >= n or not source[j].isdigit():
            raise LexError("malformed number: exponent needs digits", line, col)
        i = j
        while i < n and source[i].isdigit():
            i += 1
    return i


# -- syntax tree ----------------------------------------------------------

Pos = tuple[int, int]


@dataclass(frozen=True)
class Literal:
    value: DecValue
    unit: str | None
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Name:
    ident: str
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Neg:
    operand: "Expr"
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class BinOp:
    op: str  # + - * /
    left: "Expr"
    right: "Expr"
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    power: int
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Compare:
    op: str  # == != < <= > >=
    left: "Expr"
    right: "Expr"
    pos: Pos = field(default=(0, 0), compare=False)


Expr = Literal | Name | Neg | BinOp | Pow | Compare


@dataclass(frozen=True)
class UnitDecl:
    name: str
    dimension: Dimension
    scale: Fraction
    offset: Fraction | None
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class DeriveDecl:
    name: str
    first: str
    rest: tuple[tuple[str, str], ...]  # ("*" | "/", unit-name)
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class ConstDecl:
    name: str
    unit: str
    value: DecValue
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class VarDecl:
    name: str
    unit: str
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Statement:
    kind: str  # check | eval | assert
    expr: Expr
    pos: Pos = field(default=(0, 0), compare=False)


Item = UnitDecl | DeriveDecl | ConstDecl | VarDecl | Statement


@dataclass(frozen=True)
class Program:
    items: tuple[Item, ...]


# -- parser ---------------------------------------------------------------


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def next(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def at(self, kind: str, text: str | None = None) -> bool:
        tok = self.peek()
        return tok.kind == kind and (text is None or tok.text == text)

    def expect(self, kind: str, text: str | None = None) -> Token:
        if self.at(kind, text):
            return self.next()
        return self.fail(text or kind.lower())

    def fail(self, *expected: str):
        tok = self.peek()
        found = repr(tok.text) if tok.kind != "EOF" else "end of input"
        wanted = " or ".join(expected)
        raise ParseError(
            f"expected {wanted} but found {found}", tok.line, tok.col, expected
        )

    # items

    def program(self) -> Program:
        items: list[Item] = []
        while not self.at("EOF"):
            items.append(self.item())
        return Program(tuple(items))

    def item(self) -> Item:
        tok = self.peek()
        if tok.kind == "KEYWORD":
            if tok.text == "unit":
                return self.unit_decl()
            if tok.text == "derive":
                return self.derive_decl()
            if tok.text == "const":
                return self.const_decl()
            if tok.text == "var":
                return self.var_decl()
            if tok.text in ("check", "eval", "assert"):
                return self.statement()
        return self.fail("'unit'", "'derive'", "'const'", "'var'", "'check'", "'eval'", "'assert'")

    def unit_decl(self) -> UnitDecl:
        tok = self.next()
        name = self.expect("IDENT").text
        self.expect("OP", ":")
        dimension = self.dimexpr()
        self.expect("KEYWORD", "scale")
        scale = self.rational()
        offset = None
        if self.at("KEYWORD", "offset"):
            self.next()
            offset = self.rational()
        return UnitDecl(name, dimension, scale, offset, (tok.line, tok.col))

    def derive_decl(self) -> DeriveDecl:
        tok = self.next()
        name = self.expect("IDENT").text
        self.expect("OP", "=")
        first = self.expect("IDENT").text
        rest: list[tuple[str, str]] = []
        while self.at("OP", "*") or self.at("OP", "/"):
            op = self.next().text
            rest.append((op, self.expect("IDENT").text))
        return DeriveDecl(name, first, tuple(rest), (tok.line, tok.col))

    def const_decl(self) -> ConstDecl:
        tok = self.next()
        name = self.expect("IDENT").text
        self.expect("OP", ":")
        unit = self.expect("IDENT").text
        self.expect("OP", "=")
        value = self.expect("NUMBER").value
        return ConstDecl(name, unit, value, (tok.line, tok.col))

    def var_decl(self) -> VarDecl:
        tok = self.next()
        name = self.expect("IDENT").text
        self.expect("OP", ":")
        unit = self.expect("IDENT").text
        return VarDecl(name, unit, (tok.line, tok.col))

    def statement(self) -> Statement:
        tok = self.next()
        expr = self.comparison()
        _reject_nested_comparisons(expr, top=True)
        return Statement(tok.text, expr, (tok.line, tok.col))

    # dimension expressions and rationals inside declarations

    def dimexpr(self) -> Dimension:
        dim = self.dimfactor()
        while self.at("OP", "*") or self.at("OP", "/"):
            op = self.next().text
            factor = self.dimfactor()
            dim = dim * factor if op == "*" else dim / factor
        return dim

    def dimfactor(self) -> Dimension:
        if self.at("NUMBER"):
            tok = self.next()
            if tok.text != "1":
                raise ParseError(
                    "only '1' may appear as a dimension term", tok.line, tok.col
                )
            return DIMENSIONLESS
        tok = self.expect("IDENT")
        base = base_by_name(tok.text)
        if base is None:
            raise ParseError(f"unknown base dimension {tok.text!r}", tok.line, tok.col)
        power = 1
        if self.at("OP", "^"):
            self.next()
            power = self.integer()
        return Dimension.base(base) ** power

    def rational(self) -> Fraction:
        num = self.expect("NUMBER").value.to_rational()
        if self.at("OP", "/"):
            self.next()
            den_tok = self.peek()
            den = self.expect("NUMBER").value.to_rational()
            if den == 0:
                raise ParseError("zero denominator", den_tok.line, den_tok.col)
            return num / den
        return num

    def integer(self) -> int:
        negative = False
        if self.at("OP", "-"):
            self.next()
            negative = True
        tok = self.expect("NUMBER")
        r = tok.value.to_rational()
        if r.denominator != 1:
            raise ParseError("integer expected", tok.line, tok.col)
        return -int(r) if negative else int(r)

    # expressions

    def comparison(self) -> Expr:
        left = self.sum()
        tok = self.peek()
        if tok.kind == "OP" and tok.text in _COMPARE_OPS:
            self.next()
            right = self.sum()
            return Compare(tok.text, left, right, (tok.line, tok.col))
        return left

    def sum(self) -> Expr:
        expr = self.prod()
        while self.at("OP", "+") or self.at("OP", "-"):
            tok = self.next()
            right = self.prod()
            expr = BinOp(tok.text, expr, right, (tok.line, tok.col))
        return expr

    def prod(self) -> Expr:
        expr = self.pow()
        while self.at("OP", "*") or self.at("OP", "/"):
            tok = self.next()
            right = self.pow()
            expr = BinOp(tok.text, expr, right, (tok.line, tok.col))
        return expr

    def pow(self) -> Expr:
        base = self.atom()
        if self.at("OP", "^"):
            tok = self.next()
            power = self.integer()
            return Pow(base, power, (tok.line, tok.col))
        return base

    def atom(self) -> Expr:
        tok = self.peek()
        if tok.kind == "OP" and tok.text == "-":
            self.next()
            return Neg(self.atom(), (tok.line, tok.col))
        if tok.kind == "NUMBER":
            self.next()
            unit = None
            if self.at("IDENT"):
                unit = self.next().text
            return Literal(tok.value, unit, (tok.line, tok.col))
        if tok.kind == "IDENT":
            self.next()
            return Name(tok.text, (tok.line, tok.col))
        if tok.kind == "OP" and tok.text == "(":
            self.next()
            inner = self.comparison()
            self.expect("OP", ")")
            return inner
        return self.fail("a number", "an identifier", "'('", "'-'")


def _reject_nested_comparisons(expr: Expr, top: bool):
    if isinstance(expr, Compare):
        if not top:
            raise ParseError(
                "comparison nested inside an expression", expr.pos[0], expr.pos[1]
            )
        _reject_nested_comparisons(expr.left, False)
        _reject_nested_comparisons(expr.right, False)
    elif isinstance(expr, Neg):
        _reject_nested_comparisons(expr.operand, False)
    elif isinstance(expr, BinOp):
        _reject_nested_comparisons(expr.left, False)
        _reject_nested_comparisons(expr.right, False)
    elif isinstance(expr, Pow):
        _reject_nested_comparisons(expr.base, False)


def parse_tokens(tokens: list[Token]) -> Program:
    return _Parser(tokens).program()


def parse(source: str) -> Program:
    return parse_tokens(tokenize(source))


def parse_expression(source: str) -> Expr:
    """Parse a single expression (comparison allowed at top level)."""
    parser = _Parser(tokenize(source))
    expr = parser.comparison()
    _reject_nested_comparisons(expr, top=True)
    parser.expect("EOF")
    return expr


# -- rendering ------------------------------------------------------------

_DIM_TERM_NAMES = ("Mass", "Length", "Time", "Temperature", "Light", "Current", "Matter")


def _render_dimexpr(dimension: Dimension) -> str:
    parts = [
        f"{_DIM_TERM_NAMES[i]}^{p}"
        for i, p in enumerate(dimension.exponents)
        if p != 0
    ]
    return " * ".join(parts) if parts else "1"


def _render_rational(r: Fraction) -> str:
    return str(r)


def render_expression(expr: Expr) -> str:
    return _render(expr, 0)


def _prec(expr: Expr) -> int:
    if isinstance(expr, Compare):
        return 0
    if isinstance(expr, BinOp):
        return 1 if expr.op in "+-" else 2
    if isinstance(expr, Pow):
        return 3
    if isinstance(expr, Neg):
        return 4
    return 5


def _render(expr: Expr, min_prec: int) -> str:
    own = _prec(expr)
    if isinstance(expr, Literal):
        s = str(expr.value) if expr.unit is None else f"{expr.value} {expr.unit}"
    elif isinstance(expr, Name):
        s = expr.ident
    elif isinstance(expr, Neg):
        s = "-" + _render(expr.operand, 4)
    elif isinstance(expr, Pow):
        s = f"{_render(expr.base, 4)}^{expr.power}"
    elif isinstance(expr, BinOp):
        s = f"{_render(expr.left, own)} {expr.op} {_render(expr.right, own + 1)}"
    else:
        s = f"{_render(expr.left, 1)} {expr.op} {_render(expr.right, 1)}"
    if own < min_prec:
        return f"({s})"
    return s


def render_program(program: Program) -> str:
    lines = []
    for item in program.items:
        if isinstance(item, UnitDecl):
            line = (
                f"unit {item.name} : {_render_dimexpr(item.dimension)} "
                f"scale {_render_rational(item.scale)}"
            )
            if item.offset is not None:
                line += f" offset {_render_rational(item.offset)}"
        elif isinstance(item, DeriveDecl):
            line = f"derive {item.name} = {item.first}"
            for op, name in item.rest:
                line += f" {op} {name}"
        elif isinstance(item, ConstDecl):
            line = f"const {item.name} : {item.unit} = {item.value}"
        elif isinstance(item, VarDecl):
            line = f"var {item.name} : {item.unit}"
        else:
            line = f"{item.kind} {render_expression(item.expr)}"
        lines.append(line)
    return "\n".join(lines)


# -- static checking ------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    index: int
    kind: str  # item kind: unit/derive/const/var/check/eval/assert
    line: int
    col: int
    ok: bool
    dimension: Dimension | None = None
    boolean: bool = False
    error_kind: str | None = None
    message: str | None = None
    expected: Dimension | None = None
    actual: Dimension | None = None

    def describe(self) -> str:
        if self.ok:
            what = "boolean over " + self.dimension.render() if self.boolean else (
                self.dimension.render() if self.dimension else "-"
            )
            return f"OK {what}"
        return f"{self.error_kind}: {self.message}"


@dataclass(frozen=True)
class CheckReport:
    entries: tuple[Verdict, ...]

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)

    def errors(self) -> list[Verdict]:
        return [e for e in self.entries if not e.ok]

    def statement_entries(self) -> list[Verdict]:
        return [e for e in self.entries if e.kind in ("check", "eval", "assert")]


@dataclass
class Analysis:
    program: Program
    report: CheckReport
    registry: UnitRegistry
    constants: dict[str, Measurement]
    variables: dict[str, Unit]

    def bindings_env(self, bindings: dict[str, Measurement]) -> dict[str, Measurement]:
        env = dict(self.constants)
        env.update(bindings)
        return env


class _CheckFailure(Exception):
    def __init__(self, kind: str, pos: Pos, message: str, expected=None, actual=None):
        self.kind = kind
        self.pos = pos
        self.message = message
        self.expected = expected
        self.actual = actual


def analyze(program: Program, registry: UnitRegistry | None = None) -> Analysis:
    """Process declarations and statically check every statement.

    The input registry is never mutated; declarations extend a copy.
    """
    base = registry if registry is not None else default_registry()
    has_unit_decls = any(isinstance(i, (UnitDecl, DeriveDecl)) for i in program.items)
    reg = base.copy() if has_unit_decls else base
    constants: dict[str, Measurement] = {}
    variables: dict[str, object] = {}
    entries: list[Verdict] = []

    for index, item in enumerate(program.items):
        line, col = item.pos
        kind = item.kind if isinstance(item, Statement) else _ITEM_KIND[type(item)]
        try:
            if isinstance(item, UnitDecl):
                unit = reg.register(item.name, item.dimension, item.scale, item.offset or 0)
                entries.append(_ok(index, kind, line, col, unit.dimension))
            elif isinstance(item, DeriveDecl):
                num = [item.first]
                den: list[str] = []
                for op, name in item.rest:
                    (num if op == "*" else den).append(name)
                unit = reg.derive(item.name, num, den)
                entries.append(_ok(index, kind, line, col, unit.dimension))
            elif isinstance(item, ConstDecl):
                _declare_fresh(item.name, constants, variables, item.pos)
                unit = _resolve_unit(reg, item.unit, item.pos)
                constants[item.name] = Measurement(item.value, unit)
                entries.append(_ok(index, kind, line, col, unit.dimension))
            elif isinstance(item, VarDecl):
                _declare_fresh(item.name, constants, variables, item.pos)
                unit = _resolve_unit(reg, item.unit, item.pos)
                variables[item.name] = unit
                entries.append(_ok(index, kind, line, col, unit.dimension))
            else:
                if item.kind == "assert" and not isinstance(item.expr, Compare):
                    raise _CheckFailure(
                        "AssertForm", item.pos, "assert requires a comparison"
                    )
                dim = _infer(item.expr, constants, variables, reg)
                entries.append(
                    _ok(index, kind, line, col, dim, boolean=isinstance(item.expr, Compare))
                )
        except _CheckFailure as f:
            entries.append(
                Verdict(
                    index,
                    kind,
                    f.pos[0],
                    f.pos[1],
                    ok=False,
                    error_kind=f.kind,
                    message=f.message,
                    expected=f.expected,
                    actual=f.actual,
                )
            )
        except UnitError as exc:
            entries.append(
                Verdict(
                    index,
                    kind,
                    line,
                    col,
                    ok=False,
                    error_kind=type(exc).__name__.removesuffix("Error"),
                    message=str(exc),
                )
            )
    return Analysis(program, CheckReport(tuple(entries)), reg, constants, variables)


_ITEM_KIND = {UnitDecl: "unit", DeriveDecl: "derive", ConstDecl: "const", VarDecl: "var"}


def _ok(index, kind, line, col, dimension, boolean=False) -> Verdict:
    return Verdict(index, kind, line, col, ok=True, dimension=dimension, boolean=boolean)


def _declare_fresh(name, constants, variables, pos):
    if name in constants or name in variables:
        raise _CheckFailure("Redeclaration", pos, f"{name!r} is already declared")


def _resolve_unit(reg, name, pos):
    try:
        return reg.resolve(name)
    except UnitError:
        raise _CheckFailure("UnknownName", pos, f"unknown unit {name!r}") from None


def _infer(expr, constants, variables, reg) -> Dimension:
    if isinstance(expr, Literal):
        if expr.unit is None:
            return DIMENSIONLESS
        return _resolve_unit(reg, expr.unit, expr.pos).dimension
    if isinstance(expr, Name):
        if expr.ident in constants:
            return constants[expr.ident].dimension
        if expr.ident in variables:
            return variables[expr.ident].dimension
        raise _CheckFailure("UnknownName", expr.pos, f"unknown name {expr.ident!r}")
    if isinstance(expr, Neg):
        return _infer(expr.operand, constants, variables, reg)
    if isinstance(expr, Pow):
        return _infer(expr.base, constants, variables, reg) ** expr.power
    if isinstance(expr, BinOp):
        left = _infer(expr.left, constants, variables, reg)
        right = _infer(expr.right, constants, variables, reg)
        if expr.op in "+-":
            if left != right:
                raise _CheckFailure(
                    "DimensionMismatch",
                    expr.pos,
                    f"{left.render()} vs {right.render()}",
                    expected=left,
                    actual=right,
                )
            return left
        return left * right if expr.op == "*" else left / right
    # Compare
    left = _infer(expr.left, constants, variables, reg)
    right = _infer(expr.right, constants, variables, reg)
    if left != right:
        raise _CheckFailure(
            "DimensionMismatch",
            expr.pos,
            f"{left.render()} vs {right.render()}",
            expected=left,
            actual=right,
        )
    return left


def check_program(program: Program, registry: UnitRegistry | None = None) -> CheckReport:
    return analyze(program, registry).report


def infer_dimension(expr: Expr, analysis: Analysis) -> Dimension:
    """Dimension of an expression under an analysis' declarations.

    For comparisons this is the common operand dimension; the result is
    boolean-valued.
    """
    dim = _infer(expr, analysis.constants, analysis.variables, analysis.registry)
    return dim


# -- evaluation -----------------------------------------------------------


def evaluate(
    expr: Expr,
    env: dict[str, Measurement],
    reg: UnitRegistry,
    ctx: PrecisionContext | None = None,
):
    """Evaluate to a Measurement, or bool for comparisons.

    ``env`` binds every free name to a measurement.  Dimension guards are
    still enforced dynamically, so evaluating an unchecked expression is
    safe; checked expressions never trip them.
    """
    if isinstance(expr, Literal):
        if expr.unit is None:
            return Measurement(expr.value, reg.canonical_for(DIMENSIONLESS))
        try:
            unit = reg.resolve(expr.unit)
        except UnitError:
            raise UnknownNameError(f"unknown unit {expr.unit!r}", *expr.pos) from None
        return Measurement(expr.value, unit)
    if isinstance(expr, Name):
        try:
            return env[expr.ident]
        except KeyError:
            raise UnknownNameError(f"unbound name {expr.ident!r}", *expr.pos) from None
    if isinstance(expr, Neg):
        return -evaluate(expr.operand, env, reg, ctx)
    if isinstance(expr, Pow):
        return evaluate(expr.base, env, reg, ctx).pow(expr.power, ctx)
    if isinstance(expr, BinOp):
        left = evaluate(expr.left, env, reg, ctx)
        right = evaluate(expr.right, env, reg, ctx)
        if expr.op == "*":
            return left.mul(right, ctx)
        if expr.op == "/":
            return left.div(right, ctx)
        if left.dimension != right.dimension:
            raise DimensionMismatchError(left.dimension, right.dimension, "addition")
        combined = left.canonical_fraction() + (
            right.canonical_fraction() if expr.op == "+" else -right.canonical_fraction()
        )
        v = left.unit.from_canonical_fraction(combined)
        return Measurement(DecValue.from_rational(v, ctx), left.unit)
    # Compare
    left = evaluate(expr.left, env, reg, ctx)
    right = evaluate(expr.right, env, reg, ctx)
    return left.compare(_OP_TO_MEASURE[expr.op], right)


def free_variables(expr: Expr, constants: dict[str, Measurement]) -> set[str]:
    """Names the expression needs bound beyond the program's constants."""
    out: set[str] = set()
    _collect_free(expr, constants, out)
    return out


def _collect_free(expr, constants, out):
    if isinstance(expr, Name):
        if expr.ident not in constants:
            out.add(expr.ident)
    elif isinstance(expr, Neg):
        _collect_free(expr.operand, constants, out)
    elif isinstance(expr, Pow):
        _collect_free(expr.base, constants, out)
    elif isinstance(expr, (BinOp, Compare)):
        _collect_free(expr.left, constants, out)
        _collect_free(expr.right, constants, out)
