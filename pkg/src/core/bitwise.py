"""Asynchronous products and bitwise temporal operators on value expressions

An asynchronous product aligns words by walking all their indices forward
together; every step advances a nonempty subset of them. The resulting
columns are exactly the synchronized destutterings of equal-length
stutterings, without enumerating the stutterings.
"""
from functools import lru_cache
from itertools import product as cartesian
from typing import Callable, Dict, FrozenSet, Iterable, Sequence, Set, Tuple

from core.errors import MonitorError
from core.words import EPSILON, ExprSet, Letter, ValueExpr, WordError, destutter


class ProductError(MonitorError):
    """Raised when a product operand contains ε"""
    pass


Column = Tuple[Letter, ...]
Step = Tuple[int, ...]


@lru_cache(maxsize=None)
def _steps(n: int) -> Tuple[Step, ...]:
    return tuple(s for s in cartesian((0, 1), repeat=n) if any(s))


def _check_operands(us: Sequence[ValueExpr]) -> Tuple[ValueExpr, ...]:
    if any(u == EPSILON for u in us):
        raise ProductError("asynchronous product of ε")
    return tuple(destutter(u) for u in us)


def _successors(state: Tuple[int, ...], lengths: Tuple[int, ...]):
    for step in _steps(len(state)):
        nxt = tuple(i + s for i, s in zip(state, step))
        if all(i < n for i, n in zip(nxt, lengths)):
            yield nxt


# ── products ────────────────────────────────────────────────────────────────

def word_product(us: Sequence[ValueExpr]) -> FrozenSet[Tuple[ValueExpr, ...]]:
    """All aligned tuples of one n-tuple of words"""
    us = _check_operands(us)
    lengths = tuple(len(u) for u in us)
    memo: Dict[Tuple[int, ...], Set[Tuple[Column, ...]]] = {}

    def walk(state):
        if state in memo:
            return memo[state]
        column = tuple(u[i] for u, i in zip(us, state))
        if all(i == n - 1 for i, n in zip(state, lengths)):
            found = {(column,)}
        else:
            found = {(column,) + rest for nxt in _successors(state, lengths) for rest in walk(nxt)}
        memo[state] = found
        return found

    columns = walk(tuple(0 for _ in us))
    return frozenset(tuple(zip(*cols)) for cols in columns)


def async_product(left: Iterable[ValueExpr], right: Iterable[ValueExpr]) -> FrozenSet[Tuple[ValueExpr, ValueExpr]]:
    """L1 ⊗ L2 as a set of aligned pairs"""
    right = tuple(right)
    return frozenset(pair for u in left for v in right for pair in word_product((u, v)))


def product_n(sets: Sequence[Iterable[ValueExpr]]) -> FrozenSet[Tuple[ValueExpr, ...]]:
    """n-ary product, aligning one word from each set"""
    return frozenset(t for combo in cartesian(*[tuple(s) for s in sets]) for t in word_product(combo))


# ── fused product and map ───────────────────────────────────────────────────

def _mapped_words(us: Tuple[ValueExpr, ...], fn: Callable[[Column], Letter]) -> Set[ValueExpr]:
    lengths = tuple(len(u) for u in us)
    memo: Dict[Tuple[int, ...], Set[ValueExpr]] = {}

    def walk(state):
        if state in memo:
            return memo[state]
        b = fn(tuple(u[i] for u, i in zip(us, state)))
        if all(i == n - 1 for i, n in zip(state, lengths)):
            found = {(b,)}
        else:
            found = set()
            for nxt in _successors(state, lengths):
                for w in walk(nxt):
                    found.add(w if w[0] == b else (b,) + w)
        memo[state] = found
        return found

    return walk(tuple(0 for _ in us))


def product_map(sets: Sequence[Iterable[ValueExpr]], fn: Callable[[Column], Letter]) -> ExprSet:
    """{destutter(fn applied columnwise) | aligned tuple in the product of sets}"""
    found: Set[ValueExpr] = set()
    for combo in cartesian(*[tuple(s) for s in sets]):
        found |= _mapped_words(_check_operands(combo), fn)
    return frozenset(found)


def _until_words(u: ValueExpr, v: ValueExpr, a: int) -> Set[ValueExpr]:
    us = _check_operands((u, v))
    lengths = (len(us[0]), len(us[1]))
    memo: Dict[Tuple[int, int], Set[ValueExpr]] = {}

    def walk(state):
        if state in memo:
            return memo[state]
        left, right = us[0][state[0]], us[1][state[1]]
        if state == (lengths[0] - 1, lengths[1] - 1):
            found = {(int(right or (left and a)),)}
        else:
            found = set()
            for nxt in _successors(state, lengths):
                for w in walk(nxt):
                    b = int(right or (left and w[0]))
                    found.add(w if w[0] == b else (b,) + w)
        memo[state] = found
        return found

    return walk((0, 0))


def product_until(left: Iterable[ValueExpr], right: Iterable[ValueExpr], a: int) -> ExprSet:
    """{destutter(u U^a v) | (u, v) ∈ left ⊗ right}"""
    right = tuple(right)
    found: Set[ValueExpr] = set()
    for u in left:
        for v in right:
            found |= _until_words(u, v, a)
    return frozenset(found)


# ── positional operators ────────────────────────────────────────────────────

def bitwise_until(u: ValueExpr, v: ValueExpr, a: int) -> ValueExpr:
    """Position i holds iff some j ≥ i has v[j] with u on [i, j); a=1 also accepts u to the end

    Raises:
        WordError: lengths differ
    """
    if len(u) != len(v):
        raise WordError(f"until operands differ in length: {len(u)} vs {len(v)}")
    out = []
    nxt = a
    for i in range(len(u) - 1, -1, -1):
        nxt = int(v[i] or (u[i] and nxt))
        out.append(nxt)
    return tuple(reversed(out))


def bitwise_unary(u: ValueExpr, op: str) -> ValueExpr:
    """'NOT' flips, 'E' is the suffix maximum, 'A' the suffix minimum

    Raises:
        WordError: u is ε
    """
    if not u:
        raise WordError(f"{op} of ε")
    if op == "NOT":
        return tuple(1 - b for b in u)
    if op == "E":
        return bitwise_until((1,) * len(u), u, 0)
    if op == "A":
        return bitwise_unary(bitwise_unary(bitwise_unary(u, "NOT"), "E"), "NOT")
    raise ValueError(f"unknown unary operator {op!r}")
