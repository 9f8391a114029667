"""Set backends: explicit frozensets of words, or compact type summaries"""
from typing import FrozenSet

from core import compact
from core.bitwise import product_map, product_until
from core.engine_config import BackendKind
from core.words import (
    EPSILON, Affix, ExprSet, affix_closure, concat_sets, destutter,
    drop_epsilon, first_letters,
)

_COMBINERS = {
    "and": lambda c: min(c),
    "or": lambda c: max(c),
    "implies": lambda c: max(1 - c[0], c[1]),
}


class ExplicitBackend:
    """Operations on explicit sets of destuttered Boolean words"""
    kind = BackendKind.EXPLICIT

    def lift(self, members: ExprSet) -> ExprSet:
        return frozenset(members)

    def lower(self, value: ExprSet) -> ExprSet:
        return value

    def const(self, bit: int) -> ExprSet:
        return frozenset({(bit,)})

    def epsilon(self) -> ExprSet:
        return frozenset({EPSILON})

    def neg(self, value: ExprSet) -> ExprSet:
        return frozenset(tuple(1 - b for b in u) for u in value)

    def combine(self, op: str, left: ExprSet, right: ExprSet) -> ExprSet:
        return product_map([left, right], _COMBINERS[op])

    def until(self, left: ExprSet, right: ExprSet, weak: int) -> ExprSet:
        return product_until(left, right, weak)

    def first(self, value: ExprSet) -> FrozenSet[int]:
        return frozenset(int(b) for b in first_letters(value))

    def union(self, left: ExprSet, right: ExprSet) -> ExprSet:
        return left | right

    def prefix(self, value: ExprSet) -> ExprSet:
        return affix_closure(value, Affix.PREFIX)

    def suffix(self, value: ExprSet) -> ExprSet:
        return affix_closure(value, Affix.SUFFIX)

    def infix(self, value: ExprSet) -> ExprSet:
        return affix_closure(value, Affix.INFIX)

    def first_set(self, value: ExprSet) -> ExprSet:
        return affix_closure(value, Affix.FIRST)

    def concat(self, left: ExprSet, right: ExprSet) -> ExprSet:
        return frozenset(destutter(u) for u in concat_sets(left, right))

    def drop_eps(self, value: ExprSet) -> ExprSet:
        return drop_epsilon(value)


class CompactBackend:
    """Same operations on compact.CompactSet summaries"""
    kind = BackendKind.COMPACT

    def lift(self, members: ExprSet) -> compact.CompactSet:
        return compact.summarize(members)

    def lower(self, value: compact.CompactSet) -> ExprSet:
        return compact.concretize(value)

    def const(self, bit: int) -> compact.CompactSet:
        return compact.summarize([(bit,)])

    def epsilon(self) -> compact.CompactSet:
        return compact.CompactSet(has_eps=True)

    def neg(self, value):
        return compact.negate(value)

    def combine(self, op: str, left, right):
        if op == "and":
            return compact.conjunction(left, right)
        if op == "or":
            return compact.disjunction(left, right)
        return compact.disjunction(compact.negate(left), right)

    def until(self, left, right, weak: int):
        return compact.until(left, right, weak)

    def first(self, value) -> FrozenSet[int]:
        starts0, starts1 = value.first_bits()
        return frozenset(b for b, on in ((0, starts0), (1, starts1)) if on)

    def union(self, left, right):
        return compact.union(left, right)

    def prefix(self, value):
        return compact.prefix(value)

    def suffix(self, value):
        return compact.suffix(value)

    def infix(self, value):
        return compact.infix(value)

    def first_set(self, value):
        return compact.first(value)

    def concat(self, left, right):
        return compact.concat(left, right)

    def drop_eps(self, value):
        return compact.drop_epsilon(value)


def make_backend(kind: BackendKind):
    return CompactBackend() if kind is BackendKind.COMPACT else ExplicitBackend()
