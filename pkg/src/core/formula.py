"""STL formula syntax: AST, lark grammar, printer and copyless check"""
import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, List, Optional, Tuple

from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedEOF, UnexpectedInput, VisitError

from core.errors import MonitorError

logger = logging.getLogger(__name__)


class FormulaSyntaxError(MonitorError):
    """Raised when formula text does not parse"""

    def __init__(self, message: str, line: int = -1, column: int = -1, context: str = ""):
        self.line = line
        self.column = column
        self.context = context
        where = f" at line {line}, column {column}" if line > 0 else ""
        super().__init__(f"{message}{where}" + (f"\n{context}" if context else ""))


class UndeclaredSignalError(MonitorError):
    """Raised when a formula references a signal the trace does not declare"""
    pass


class MalformedIntervalError(MonitorError):
    """Raised when an interval is empty, reversed, or closed at infinity"""
    pass


# ── arithmetic expressions ──────────────────────────────────────────────────

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    value: Fraction


@dataclass(frozen=True)
class BinOp:
    op: str  # '+', '-', '*'
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class Func:
    name: str  # 'sqrt' or 'square'
    arg: "Expr"


Expr = object  # Var | Const | BinOp | Neg | Func

COMPARATORS = (">", ">=", "<", "<=")


@dataclass(frozen=True)
class Predicate:
    """`expr cmp bound`; bare=True marks the sugar `x` for `x >= 1`"""
    expr: Expr
    cmp: str
    bound: Fraction
    bare: bool = False


@dataclass(frozen=True)
class TimeInterval:
    lo: Fraction
    hi: Optional[Fraction]  # None is +∞
    lo_closed: bool = True
    hi_closed: bool = False

    @property
    def bounded(self) -> bool:
        return self.hi is not None

    @property
    def untimed(self) -> bool:
        return self.lo == 0 and self.lo_closed and self.hi is None

    def to_ticks(self, tick: Fraction) -> Tuple[int, Optional[int]]:
        """Endpoints in ticks

        Raises:
            MalformedIntervalError: an endpoint is finer than the tick quantum
        """
        bounds = []
        for value in (self.lo, self.hi):
            if value is None:
                bounds.append(None)
                continue
            ticks = Fraction(value) / tick
            if ticks.denominator != 1:
                raise MalformedIntervalError(f"interval endpoint {value} is finer than tick {tick}")
            bounds.append(int(ticks))
        return bounds[0], bounds[1]

    def __str__(self) -> str:
        hi = "inf" if self.hi is None else _num(self.hi)
        return f"{'[' if self.lo_closed else '('}{_num(self.lo)},{hi}{']' if self.hi_closed else ')'}"


UNTIMED = TimeInterval(Fraction(0), None, True, False)


# ── formulas ────────────────────────────────────────────────────────────────

class Formula:
    """Base class of formula nodes"""
    pass


@dataclass(frozen=True)
class Literal(Formula):
    value: bool


@dataclass(frozen=True)
class Atom(Formula):
    predicate: Predicate


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    right: Formula
    interval: TimeInterval = UNTIMED


@dataclass(frozen=True)
class Eventually(Formula):
    arg: Formula
    interval: TimeInterval = UNTIMED


@dataclass(frozen=True)
class Always(Formula):
    arg: Formula
    interval: TimeInterval = UNTIMED


def children(f: Formula) -> Tuple[Formula, ...]:
    if isinstance(f, (Not, Eventually, Always)):
        return (f.arg,)
    if isinstance(f, (And, Or, Implies, Until)):
        return (f.left, f.right)
    return ()


def subformulas(f: Formula) -> Iterator[Formula]:
    """Pre-order walk"""
    yield f
    for c in children(f):
        yield from subformulas(c)


def expr_variables(e: Expr) -> Iterator[str]:
    if isinstance(e, Var):
        yield e.name
    elif isinstance(e, BinOp):
        yield from expr_variables(e.left)
        yield from expr_variables(e.right)
    elif isinstance(e, (Neg, Func)):
        yield from expr_variables(e.arg)


def signal_occurrences(f: Formula) -> List[str]:
    """Signal names in order of occurrence, with repetition"""
    names: List[str] = []
    for node in subformulas(f):
        if isinstance(node, Atom):
            names.extend(expr_variables(node.predicate.expr))
    return names


def signals_of(f: Formula) -> frozenset:
    return frozenset(signal_occurrences(f))


def is_timed(f: Formula) -> bool:
    return any(isinstance(n, (Until, Eventually, Always)) and not n.interval.untimed
               for n in subformulas(f))


def depth(f: Formula) -> int:
    return 1 + max((depth(c) for c in children(f)), default=0)


def check_copyless(f: Formula) -> List[str]:
    """One warning per signal occurring more than once"""
    warnings = [f"{name} occurs {count}×"
                for name, count in Counter(signal_occurrences(f)).items() if count > 1]
    for w in warnings:
        logger.warning(f"⚠️ formula is not copyless: {w}; verdicts stay sound but may be less precise")
    return warnings


# ── printer ─────────────────────────────────────────────────────────────────

def _num(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def expr_text(e: Expr) -> str:
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Const):
        return _num(e.value)
    if isinstance(e, BinOp):
        return f"({expr_text(e.left)} {e.op} {expr_text(e.right)})"
    if isinstance(e, Neg):
        return f"-({expr_text(e.arg)})"
    if isinstance(e, Func):
        return f"{e.name}({expr_text(e.arg)})"
    raise TypeError(f"not an expression: {e!r}")


def _interval_text(interval: TimeInterval) -> str:
    return "" if interval == UNTIMED else str(interval)


def to_text(f: Formula) -> str:
    """Render a formula as parseable text"""
    if isinstance(f, Literal):
        return "true" if f.value else "false"
    if isinstance(f, Atom):
        p = f.predicate
        if p.bare:
            return expr_text(p.expr)
        return f"({expr_text(p.expr)} {p.cmp} {_num(p.bound)})"
    if isinstance(f, Not):
        return f"!{to_text(f.arg)}"
    if isinstance(f, And):
        return f"({to_text(f.left)} & {to_text(f.right)})"
    if isinstance(f, Or):
        return f"({to_text(f.left)} | {to_text(f.right)})"
    if isinstance(f, Implies):
        return f"({to_text(f.left)} -> {to_text(f.right)})"
    if isinstance(f, Until):
        return f"({to_text(f.left)} U{_interval_text(f.interval)} {to_text(f.right)})"
    if isinstance(f, Eventually):
        return f"F{_interval_text(f.interval)} {to_text(f.arg)}"
    if isinstance(f, Always):
        return f"G{_interval_text(f.interval)} {to_text(f.arg)}"
    raise TypeError(f"not a formula: {f!r}")


# ── grammar ─────────────────────────────────────────────────────────────────

GRAMMAR = r'''
?start: implication

?implication: disjunction
    | disjunction IMPLIES implication       -> implies

?disjunction: conjunction
    | disjunction OR conjunction            -> or_

?conjunction: until
    | conjunction AND until                 -> and_

?until: unary
    | unary UNTIL [interval] until          -> until

?unary: primary
    | NOT unary                             -> not_
    | EVENTUALLY [interval] unary           -> eventually
    | ALWAYS [interval] unary               -> always

?primary: TRUE                              -> true
    | FALSE                                 -> false
    | comparison
    | NAME                                  -> bare
    | "(" implication ")"

comparison: sum CMP bound

?bound: NUMBER                              -> pos_bound
    | MINUS NUMBER                          -> neg_bound

?sum: product
    | sum PLUS product                      -> binop
    | sum MINUS product                     -> binop

?product: factor
    | product TIMES factor                  -> binop

?factor: NUMBER                             -> num
    | NAME                                  -> var
    | MINUS factor                          -> neg
    | FUNC "(" sum ")"                      -> func
    | "(" sum ")"

interval: LEFT NUMBER "," upper RIGHT
?upper: NUMBER | INF

EVENTUALLY: /F(?![A-Za-z0-9_])/ | "◇"
ALWAYS: /G(?![A-Za-z0-9_])/ | "□"
UNTIL: /U(?![A-Za-z0-9_])/
TRUE: /true(?![A-Za-z0-9_])/
FALSE: /false(?![A-Za-z0-9_])/
FUNC: /(sqrt|square)(?=\s*\()/
INF: /inf(?![A-Za-z0-9_])/ | "∞"
NAME: /(?!(?:F|G|U|true|false|inf|sqrt|square)(?![A-Za-z0-9_]))[A-Za-z_][A-Za-z0-9_]*/

NOT: "!" | "~" | "¬"
AND: "&&" | "&" | "∧"
OR: "||" | "|" | "∨"
IMPLIES: "->" | "=>" | "→"
CMP: ">=" | "<=" | ">" | "<" | "≥" | "≤"
PLUS: "+"
MINUS: /-(?!>)/
TIMES: "*"
LEFT: "[" | "("
RIGHT: "]" | ")"
NUMBER: /\d+\/\d+|\d+(\.\d+)?([eE][-+]?\d+)?/

%import common.WS
%ignore WS
'''

_CMP_ALIASES = {"≥": ">=", "≤": "<="}


@v_args(inline=True)
class FormulaBuilder(Transformer):
    """Turn lark trees into formula nodes"""

    def implies(self, left, _op, right):
        return Implies(left, right)

    def or_(self, left, _op, right):
        return Or(left, right)

    def and_(self, left, _op, right):
        return And(left, right)

    def until(self, left, _op, interval, right):
        return Until(left, right, interval or UNTIMED)

    def not_(self, _op, arg):
        return Not(arg)

    def eventually(self, _op, interval, arg):
        return Eventually(arg, interval or UNTIMED)

    def always(self, _op, interval, arg):
        return Always(arg, interval or UNTIMED)

    def true(self, _tok):
        return Literal(True)

    def false(self, _tok):
        return Literal(False)

    def bare(self, name):
        return Atom(Predicate(Var(str(name)), ">=", Fraction(1), bare=True))

    def comparison(self, expr, cmp, bound):
        return Atom(Predicate(expr, _CMP_ALIASES.get(str(cmp), str(cmp)), bound))

    def pos_bound(self, number):
        return Fraction(str(number))

    def neg_bound(self, _op, number):
        return -Fraction(str(number))

    def binop(self, left, op, right):
        return BinOp(str(op), left, right)

    def num(self, number):
        return Const(Fraction(str(number)))

    def var(self, name):
        return Var(str(name))

    def neg(self, _op, arg):
        if isinstance(arg, Const):
            return Const(-arg.value)
        return Neg(arg)

    def func(self, name, arg):
        return Func(str(name), arg)

    def interval(self, left, lo, hi, right):
        lo_value = Fraction(str(lo))
        hi_value = None if hi.type == "INF" else Fraction(str(hi))
        lo_closed, hi_closed = str(left) == "[", str(right) == "]"
        if hi_value is None and hi_closed:
            raise MalformedIntervalError(f"interval {left}{lo},{hi}{right} is closed at infinity")
        if hi_value is not None and lo_value > hi_value:
            raise MalformedIntervalError(f"interval {left}{lo},{hi}{right} has lo > hi")
        if hi_value is not None and lo_value == hi_value and not (lo_closed and hi_closed):
            raise MalformedIntervalError(f"interval {left}{lo},{hi}{right} is empty")
        return TimeInterval(lo_value, hi_value, lo_closed, hi_closed)


_parser = Lark(GRAMMAR, parser="earley", lexer="dynamic", maybe_placeholders=True)


def parse(text: str, declared: Optional[Iterable[str]] = None) -> Formula:
    """Parse formula text; with `declared`, reject unknown signal names

    Raises:
        FormulaSyntaxError: text does not match the grammar
        MalformedIntervalError: an interval is reversed, empty or closed at ∞
        UndeclaredSignalError: a name is not among `declared`
    """
    try:
        tree = _parser.parse(text)
        formula = FormulaBuilder().transform(tree)
    except VisitError as e:
        if isinstance(e.orig_exc, MonitorError):
            raise e.orig_exc from None
        raise
    except UnexpectedEOF as e:
        raise FormulaSyntaxError("unexpected end of formula") from e
    except UnexpectedInput as e:
        raise FormulaSyntaxError("unexpected input", e.line, e.column, e.get_context(text)) from e

    if declared is not None:
        known = set(declared)
        unknown = sorted(signals_of(formula) - known)
        if unknown:
            raise UndeclaredSignalError(f"undeclared signal(s): {', '.join(unknown)}")
    return formula


# ── derived operators ───────────────────────────────────────────────────────

def expand(f: Formula) -> Formula:
    """Rewrite derived operators into ¬, ∧, U (F φ = true U φ, G φ = ¬F¬φ)"""
    if isinstance(f, (Literal, Atom)):
        return f
    if isinstance(f, Not):
        return Not(expand(f.arg))
    if isinstance(f, And):
        return And(expand(f.left), expand(f.right))
    if isinstance(f, Or):
        return Not(And(Not(expand(f.left)), Not(expand(f.right))))
    if isinstance(f, Implies):
        return Not(And(expand(f.left), Not(expand(f.right))))
    if isinstance(f, Until):
        return Until(expand(f.left), expand(f.right), f.interval)
    if isinstance(f, Eventually):
        return Until(Literal(True), expand(f.arg), f.interval)
    if isinstance(f, Always):
        return Not(Until(Literal(True), Not(expand(f.arg)), f.interval))
    raise TypeError(f"not a formula: {f!r}")
