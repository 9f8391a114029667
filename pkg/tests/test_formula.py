"""Formula parser, printer and rewriting"""
from fractions import Fraction

import pytest
from hypothesis import given

from core.formula import (
    UNTIMED, Always, And, Atom, BinOp, Const, Eventually, FormulaSyntaxError, Func, Implies,
    Literal, MalformedIntervalError, Not, Or, Predicate, TimeInterval, UndeclaredSignalError,
    Until, Var, check_copyless, expand, is_timed, parse, signals_of, subformulas, to_text,
)
from strategies import bare, formulas

p, q, r = bare("p"), bare("q"), bare("r")


class TestParse:
    def test_bounded_response(self):
        assert parse("G (p -> F[0,1) q)") == Always(
            Implies(p, Eventually(q, TimeInterval(Fraction(0), Fraction(1)))))

    def test_conjunction_under_always(self):
        assert parse("G (p & q)") == Always(And(p, q))

    def test_precedence(self):
        assert parse("p | q & r") == Or(p, And(q, r))
        assert parse("!p U q") == Until(Not(p), q)
        assert parse("F p & q") == And(Eventually(p), q)

    def test_right_associative(self):
        assert parse("p -> q -> r") == Implies(p, Implies(q, r))
        assert parse("p U q U r") == Until(p, Until(q, r))

    def test_alternate_symbols(self):
        assert parse("□ (p ∧ ¬q)") == parse("G (p && !q)")
        assert parse("p ∨ q → r") == parse("p || q => r")

    def test_constants(self):
        assert parse("G (p | true)") == Always(Or(p, Literal(True)))

    def test_sum_comparison(self):
        assert parse("G (x1 + x2 > 4)") == Always(
            Atom(Predicate(BinOp("+", Var("x1"), Var("x2")), ">", Fraction(4))))

    def test_separation_shape(self):
        f = parse("G (sqrt(square(a1 - b1) + square(a2 - b2)) >= 1.5)")
        atom = f.arg
        assert atom.predicate.cmp == ">=" and atom.predicate.bound == Fraction(3, 2)
        assert isinstance(atom.predicate.expr, Func) and atom.predicate.expr.name == "sqrt"

    def test_negative_bound_and_constant(self):
        atom = parse("x * -2 <= -1/2")
        assert atom == Atom(Predicate(BinOp("*", Var("x"), Const(Fraction(-2))), "<=", Fraction(-1, 2)))

    def test_intervals(self):
        assert parse("F(1,3] p").interval == TimeInterval(Fraction(1), Fraction(3), False, True)
        assert parse("F[2,inf) p").interval == TimeInterval(Fraction(2), None)
        assert parse("F[0,inf) p").interval == UNTIMED

    def test_keywords_are_not_names(self):
        assert signals_of(parse("Fx U Gy")) == frozenset({"Fx", "Gy"})


class TestParseErrors:
    def test_truncated(self):
        with pytest.raises(FormulaSyntaxError):
            parse("G (p &")

    def test_position(self):
        with pytest.raises(FormulaSyntaxError) as info:
            parse("p & & q")
        assert info.value.line == 1 and info.value.column >= 3

    @pytest.mark.parametrize("text", ["F[3,1) p", "F[2,2) p", "F[0,inf] p"])
    def test_malformed_interval(self, text):
        with pytest.raises(MalformedIntervalError):
            parse(text)

    def test_undeclared(self):
        with pytest.raises(UndeclaredSignalError):
            parse("p & z", declared=["p", "q"])

    def test_interval_finer_than_tick(self):
        with pytest.raises(MalformedIntervalError):
            TimeInterval(Fraction(1, 2), Fraction(1)).to_ticks(Fraction(1))
        assert TimeInterval(Fraction(1, 2), Fraction(1)).to_ticks(Fraction(1, 2)) == (1, 2)


class TestStructure:
    def test_copyless_warning(self, caplog):
        assert check_copyless(parse("G (p & F p)")) == ["p occurs 2×"]
        assert "not copyless" in caplog.text
        assert check_copyless(parse("G (p & q)")) == []

    def test_is_timed(self):
        assert is_timed(parse("G (p -> F[0,1) q)"))
        assert not is_timed(parse("G (p -> F q)"))

    def test_expand_uses_core_operators(self):
        f = expand(parse("G (p -> F q) | r"))
        allowed = (Literal, Atom, Not, And, Until)
        assert all(isinstance(n, allowed) for n in subformulas(f))

    def test_expand_always(self):
        assert expand(Always(p)) == Not(Until(Literal(True), Not(p)))


@pytest.mark.property_based
@given(formulas(names=("p", "q"), timed=True))
def test_printer_round_trip(f):
    assert parse(to_text(f)) == f
