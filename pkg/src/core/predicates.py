"""Predicate evaluation over segments: exact products, fine and coarse abstractions"""
import logging
from decimal import Decimal, localcontext
from fractions import Fraction
from itertools import product as cartesian
from math import isqrt
from typing import Dict, FrozenSet, List, Optional, Sequence

from core.bitwise import product_map
from core.engine_config import EngineConfig, Variant
from core.errors import MonitorError
from core.formula import BinOp, Const, Expr, Func, Neg, Predicate, Var, expr_variables
from core.trace_model import DistributedSignal, Segment, gamma, regions_of
from core.words import ExprSet, Letter

logger = logging.getLogger(__name__)

SQRT_DIGITS = 60


class NonMonotonePredicateError(MonitorError):
    """Raised when the coarse variant meets a predicate it cannot treat as monotone"""
    pass


class PredicateDomainError(MonitorError):
    """Raised when a predicate is evaluated outside its domain (sqrt of a negative)"""
    pass


# ── exact evaluation ────────────────────────────────────────────────────────

def _sqrt(value: Fraction) -> Fraction:
    if value < 0:
        raise PredicateDomainError(f"sqrt of negative value {value}")
    num, den = value.numerator, value.denominator
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    with localcontext() as ctx:
        ctx.prec = SQRT_DIGITS
        root = (Decimal(num) / Decimal(den)).sqrt()
    return Fraction(root)


def eval_expr(e: Expr, env: Dict[str, Letter]) -> Fraction:
    if isinstance(e, Var):
        return Fraction(env[e.name])
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Neg):
        return -eval_expr(e.arg, env)
    if isinstance(e, BinOp):
        left, right = eval_expr(e.left, env), eval_expr(e.right, env)
        if e.op == "+":
            return left + right
        if e.op == "-":
            return left - right
        return left * right
    if isinstance(e, Func):
        arg = eval_expr(e.arg, env)
        return _sqrt(arg) if e.name == "sqrt" else arg * arg
    raise TypeError(f"not an expression: {e!r}")


def holds(pred: Predicate, env: Dict[str, Letter]) -> int:
    value = eval_expr(pred.expr, env)
    if pred.cmp == ">":
        return int(value > pred.bound)
    if pred.cmp == ">=":
        return int(value >= pred.bound)
    if pred.cmp == "<":
        return int(value < pred.bound)
    return int(value <= pred.bound)


def variables(pred: Predicate) -> List[str]:
    """Referenced signals, first occurrence order"""
    return list(dict.fromkeys(expr_variables(pred.expr)))


# ── monotonicity ────────────────────────────────────────────────────────────

def _polarities(e: Expr, sign: int, out: Dict[str, set]) -> bool:
    if isinstance(e, Var):
        out.setdefault(e.name, set()).add(sign)
        return True
    if isinstance(e, Const):
        return True
    if isinstance(e, Neg):
        return _polarities(e.arg, -sign, out)
    if isinstance(e, BinOp):
        if e.op == "+":
            return _polarities(e.left, sign, out) and _polarities(e.right, sign, out)
        if e.op == "-":
            return _polarities(e.left, sign, out) and _polarities(e.right, -sign, out)
        if isinstance(e.left, Const):
            coefficient, rest = e.left.value, e.right
        elif isinstance(e.right, Const):
            coefficient, rest = e.right.value, e.left
        else:
            return False
        if coefficient == 0:
            return True
        return _polarities(rest, sign if coefficient > 0 else -sign, out)
    if isinstance(e, Func) and e.name == "sqrt":
        return _polarities(e.arg, sign, out)
    return False


def is_monotone(pred: Predicate) -> bool:
    """Syntactic check: each signal enters with a single polarity through +, −, constant ×, sqrt"""
    found: Dict[str, set] = {}
    return _polarities(pred.expr, 1, found) and all(len(s) == 1 for s in found.values())


# ── abstractions ────────────────────────────────────────────────────────────

def bounded_words(outcomes: FrozenSet[int], bound: int) -> ExprSet:
    """All destuttered words over `outcomes` with length at most bound"""
    if len(outcomes) == 1:
        return frozenset({(next(iter(outcomes)),)})
    found = set()
    for start in (0, 1):
        for length in range(1, max(1, bound) + 1):
            found.add(tuple((start + i) % 2 for i in range(length)))
    return frozenset(found)


def alternation_bound(ds: DistributedSignal, names: Sequence[str], seg: Segment) -> int:
    """1 + edges of the named signals whose uncertainty regions meet seg"""
    count = 0
    for name in names:
        for region in regions_of(ds, ds.signal(name)):
            if region.lo < seg.hi and seg.lo < region.hi:
                count += 1
    return 1 + count


def _letter_sets(ds: DistributedSignal, names: Sequence[str], seg: Segment,
                 segments: Optional[Sequence[Segment]]) -> List[FrozenSet[Letter]]:
    sets = []
    for name in names:
        letters = set()
        for u in gamma(ds, ds.signal(name), seg, segments):
            letters.update(u)
        sets.append(frozenset(letters))
    return sets


def eval_predicate(pred: Predicate, seg: Segment, ds: DistributedSignal, cfg: EngineConfig,
                   segments: Optional[Sequence[Segment]] = None) -> ExprSet:
    """Boolean value expressions of a predicate on one segment

    Raises:
        NonMonotonePredicateError: ADM_C on a predicate that is not flagged monotone
    """
    names = variables(pred)
    if not names:
        return frozenset({(holds(pred, {}),)})

    if cfg.variant is Variant.ADM:
        sets = [gamma(ds, ds.signal(n), seg, segments) for n in names]
        return product_map(sets, lambda column: holds(pred, dict(zip(names, column))))

    if cfg.variant is Variant.ADM_C and not (cfg.assume_monotone or is_monotone(pred)):
        raise NonMonotonePredicateError(
            "coarse evaluation needs a monotone predicate; pass assume_monotone to force it")

    letter_sets = _letter_sets(ds, names, seg, segments)
    if cfg.variant is Variant.ADM_C:
        letter_sets = [frozenset({min(s, key=Fraction), max(s, key=Fraction)}) for s in letter_sets]
    outcomes = frozenset(holds(pred, dict(zip(names, combo))) for combo in cartesian(*letter_sets))
    return bounded_words(outcomes, alternation_bound(ds, names, seg))
