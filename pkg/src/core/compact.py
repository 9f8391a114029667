"""Compact summaries of sets of destuttered Boolean value expressions

A destuttered Boolean word is fixed by its first bit and its length, so a set
is summarized by the longest word of each (first bit, last bit) type plus
flags for the one-letter words and ε. The concretization of a summary holds
every word no longer than its type maximum.
"""
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import FrozenSet, Iterable, Tuple

from core.errors import MonitorError
from core.words import EPSILON, ExprSet, ValueExpr, WordError, is_boolean, is_canonical


class CompactSetError(MonitorError):
    """Raised on ill-formed summaries or non-Boolean members"""
    pass


def alternating(first: int, length: int) -> ValueExpr:
    return tuple((first + i) % 2 for i in range(length))


@dataclass(frozen=True)
class CompactSet:
    max00: int = 0
    max01: int = 0
    max10: int = 0
    max11: int = 0
    has_0: bool = False
    has_1: bool = False
    has_eps: bool = False

    def __post_init__(self):
        for name, odd in (("max00", True), ("max11", True), ("max01", False), ("max10", False)):
            value = getattr(self, name)
            if value < 0 or (value and (value % 2 == 1) != odd):
                raise CompactSetError(f"{name}={value} has the wrong parity")
        if self.has_0 and self.max00 < 1:
            raise CompactSetError("has_0 without any 0…0 word")
        if self.has_1 and self.max11 < 1:
            raise CompactSetError("has_1 without any 1…1 word")

    def maximum(self, first: int, last: int) -> int:
        return getattr(self, f"max{first}{last}")

    def flag(self, bit: int) -> bool:
        return self.has_1 if bit else self.has_0

    @property
    def empty(self) -> bool:
        return not (self.max00 or self.max01 or self.max10 or self.max11 or self.has_eps)

    def first_bits(self) -> Tuple[bool, bool]:
        """(some word starts with 0, some word starts with 1)

        Raises:
            WordError: the set contains ε
        """
        if self.has_eps:
            raise WordError("first is undefined on a set containing ε")
        return bool(self.max00 or self.max01), bool(self.max10 or self.max11)

    def __str__(self) -> str:
        flags = "".join(f for f, on in (("0", self.has_0), ("1", self.has_1), ("ε", self.has_eps)) if on)
        return (f"⟨00:{self.max00} 01:{self.max01} 10:{self.max10} 11:{self.max11}"
                f"{' +' + flags if flags else ''}⟩")


# ── abstraction and concretization ──────────────────────────────────────────

def summarize(members: Iterable[ValueExpr]) -> CompactSet:
    """Per-type maxima and singleton flags

    Raises:
        CompactSetError: a member is not a canonical Boolean word
    """
    maxima = {(0, 0): 0, (0, 1): 0, (1, 0): 0, (1, 1): 0}
    flags = {0: False, 1: False}
    has_eps = False
    for u in members:
        if u == EPSILON:
            has_eps = True
            continue
        if not is_boolean(u) or not is_canonical(u):
            raise CompactSetError(f"cannot summarize non-canonical or non-Boolean word {u!r}")
        kind = (int(u[0]), int(u[-1]))
        maxima[kind] = max(maxima[kind], len(u))
        if len(u) == 1:
            flags[int(u[0])] = True
    return CompactSet(maxima[(0, 0)], maxima[(0, 1)], maxima[(1, 0)], maxima[(1, 1)],
                      flags[0], flags[1], has_eps)


def concretize(s: CompactSet) -> ExprSet:
    words = set()
    if s.has_eps:
        words.add(EPSILON)
    for first in (0, 1):
        for last in (0, 1):
            top = s.maximum(first, last)
            start = 2 if first != last else 3
            words.update(alternating(first, n) for n in range(start, top + 1, 2))
        if s.flag(first):
            words.add((first,))
    return frozenset(words)


def _generators(s: CompactSet) -> ExprSet:
    """Maximal word of every type plus the flagged singletons"""
    words = {alternating(f, s.maximum(f, l)) for f in (0, 1) for l in (0, 1) if s.maximum(f, l)}
    words.update((b,) for b in (0, 1) if s.flag(b))
    if s.has_eps:
        words.add(EPSILON)
    return frozenset(words)


# ── closed-form operators ───────────────────────────────────────────────────

def negate(s: CompactSet) -> CompactSet:
    return CompactSet(s.max11, s.max10, s.max01, s.max00, s.has_1, s.has_0, s.has_eps)


def first(s: CompactSet) -> CompactSet:
    starts0, starts1 = s.first_bits()
    return CompactSet(max00=int(starts0), max11=int(starts1), has_0=starts0, has_1=starts1)


def _longest_by(s: CompactSet, by_first: bool, bit: int) -> int:
    if by_first:
        return max(s.maximum(bit, 0), s.maximum(bit, 1))
    return max(s.maximum(0, bit), s.maximum(1, bit))


def _all_up_to(limits, by_first: bool) -> CompactSet:
    """All words whose first (or last) bit b has length ≤ limits[b], plus ε"""
    fields = {"has_eps": True}
    for bit in (0, 1):
        top = limits[bit]
        if not top:
            continue
        same = top if top % 2 else top - 1
        other = top if top % 2 == 0 else top - 1
        fields[f"max{bit}{bit}"] = same
        key = f"max{bit}{1 - bit}" if by_first else f"max{1 - bit}{bit}"
        fields[key] = other
        fields[f"has_{bit}"] = True
    return CompactSet(**fields)


def prefix(s: CompactSet) -> CompactSet:
    return _all_up_to({b: _longest_by(s, True, b) for b in (0, 1)}, by_first=True)


def suffix(s: CompactSet) -> CompactSet:
    return _all_up_to({b: _longest_by(s, False, b) for b in (0, 1)}, by_first=False)


def infix(s: CompactSet) -> CompactSet:
    found = set()
    for u in _generators(s):
        found.update(u[i:j] for i in range(len(u) + 1) for j in range(i, len(u) + 1))
    return summarize(found)


def union(a: CompactSet, b: CompactSet) -> CompactSet:
    return CompactSet(max(a.max00, b.max00), max(a.max01, b.max01),
                      max(a.max10, b.max10), max(a.max11, b.max11),
                      a.has_0 or b.has_0, a.has_1 or b.has_1, a.has_eps or b.has_eps)


def drop_epsilon(s: CompactSet) -> CompactSet:
    return replace(s, has_eps=False)


def concat(a: CompactSet, b: CompactSet) -> CompactSet:
    """Summary of destutter(a · b)"""
    maxima = {(0, 0): 0, (0, 1): 0, (1, 0): 0, (1, 1): 0}
    entries_a = [(f, l, a.maximum(f, l)) for f in (0, 1) for l in (0, 1) if a.maximum(f, l)]
    entries_b = [(f, l, b.maximum(f, l)) for f in (0, 1) for l in (0, 1) if b.maximum(f, l)]
    for fa, la, ma in entries_a:
        for fb, lb, mb in entries_b:
            length = ma + mb - (1 if la == fb else 0)
            maxima[(fa, lb)] = max(maxima[(fa, lb)], length)
    if b.has_eps:
        for f, l, m in entries_a:
            maxima[(f, l)] = max(maxima[(f, l)], m)
    if a.has_eps:
        for f, l, m in entries_b:
            maxima[(f, l)] = max(maxima[(f, l)], m)
    flags = {bit: (a.flag(bit) and b.flag(bit)) or (a.has_eps and b.flag(bit)) or (a.flag(bit) and b.has_eps)
             for bit in (0, 1)}
    return CompactSet(maxima[(0, 0)], maxima[(0, 1)], maxima[(1, 0)], maxima[(1, 1)],
                      flags[0], flags[1], a.has_eps and b.has_eps)


# ── pairwise closed forms ───────────────────────────────────────────────────
#
# A summary is the union of its generators, and both the product operators and
# summarization distribute over union. Each operator is therefore the union,
# over pairs of generator shapes, of a per-pair rule on (first bit, length).
# The rules below give, for one pair, the shapes whose summary equals the
# summary of the explicit product; doc/compact.md carries the case tables.

Shape = Tuple[int, int]

CONST_ONE: Shape = (1, 1)
CONST_ZERO: Shape = (0, 1)


def _last(shape: Shape) -> int:
    first, length = shape
    return (first + length - 1) % 2


def _ones(shape: Shape) -> int:
    """Number of 1-blocks"""
    first, length = shape
    return (length + first) // 2


def _length(first: int, last: int, blocks: int) -> int:
    """Length of the alternating word with these end bits and this many 1-blocks"""
    return 2 * blocks - 1 + (1 - first) + (1 - last)


@lru_cache(maxsize=1024)
def _shapes(s: CompactSet) -> Tuple[Shape, ...]:
    if s.has_eps:
        raise CompactSetError("product operand contains ε")
    found = {(f, s.maximum(f, l)) for f in (0, 1) for l in (0, 1) if s.maximum(f, l)}
    found.update((b, 1) for b in (0, 1) if s.flag(b))
    return tuple(sorted(found))


def _from_shapes(shapes: Iterable[Shape]) -> CompactSet:
    maxima = {(0, 0): 0, (0, 1): 0, (1, 0): 0, (1, 1): 0}
    flags = {0: False, 1: False}
    for shape in shapes:
        kind = (shape[0], _last(shape))
        maxima[kind] = max(maxima[kind], shape[1])
        if shape[1] == 1:
            flags[shape[0]] = True
    return CompactSet(maxima[(0, 0)], maxima[(0, 1)], maxima[(1, 0)], maxima[(1, 1)], flags[0], flags[1])


@lru_cache(maxsize=None)
def _meet(u: Shape, v: Shape) -> FrozenSet[Shape]:
    """Shapes of min over the aligned pairs of two words

    The 1-blocks of the result are the nonempty intersections of a 1-block of
    u with one of v. At most ones(u) + ones(v) - 1 of them meet, and they can
    all be made to. Common first or last 1 bits force an intersection; with
    neither forced the blocks can be kept apart, unless one word is the
    constant 1, which meets every block of the other.
    """
    ones_u, ones_v = _ones(u), _ones(v)
    if not ones_u or not ones_v:
        return frozenset({CONST_ZERO})
    first, last = u[0] & v[0], _last(u) & _last(v)
    found = {(first, _length(first, last, ones_u + ones_v - 1))}
    if CONST_ONE not in (u, v) and not first and not last:
        found.add(CONST_ZERO)
    return frozenset(found)


@lru_cache(maxsize=None)
def _until(u: Shape, v: Shape, weak: int) -> FrozenSet[Shape]:
    """Shapes of u U^weak v over the aligned pairs of two words

    A column with v=1 yields 1 and a column (0, 0) yields 0; a column (1, 0)
    copies the next column, the last one copies weak. The result is v with the
    0-blocks that u covers with 1 erased, and weak appended when u ends with 1
    over a final 0-block of v.
    """
    h, last_u = _last(v), _last(u)
    if v == CONST_ONE:
        return frozenset({CONST_ONE})
    if v == CONST_ZERO:
        if not last_u:
            return frozenset({CONST_ZERO})
        if u == CONST_ONE:
            return frozenset({(weak, 1)})
        return frozenset({(0, 1 + weak)})
    if u == CONST_ONE:
        return frozenset({(1, 2 if not h and not weak else 1)})
    tail = int(not h and last_u and weak)
    found = {(v[0], v[1] + tail)}
    if u[0] and not v[0]:
        found.add((1, v[1] - 1 + tail))
    if u != CONST_ZERO and (u[0] or v[0]) and (h or (last_u and weak)):
        found.add(CONST_ONE)
    return frozenset(found)


@lru_cache(maxsize=65536)
def conjunction(a: CompactSet, b: CompactSet) -> CompactSet:
    return _from_shapes(w for u in _shapes(a) for v in _shapes(b) for w in _meet(u, v))


@lru_cache(maxsize=65536)
def disjunction(a: CompactSet, b: CompactSet) -> CompactSet:
    """De Morgan over the conjunction; negation is exact on summaries"""
    return negate(conjunction(negate(a), negate(b)))


@lru_cache(maxsize=65536)
def until(a: CompactSet, b: CompactSet, weak: int) -> CompactSet:
    """Summary of {u U^weak v | (u, v) ∈ C(a) ⊗ C(b)}"""
    return _from_shapes(w for u in _shapes(a) for v in _shapes(b) for w in _until(u, v, weak))


def compact_apply(op: str, *args: CompactSet) -> CompactSet:
    """Dispatch by operator name (AND, OR, NOT, UNTIL0, UNTIL1, CONCAT, PREFIX, SUFFIX, INFIX, FIRST)

    FIRST answers the pair of booleans from first_bits rather than a summary.

    Raises:
        CompactSetError: wrong number of arguments or unknown operator
    """
    table = {
        "NOT": (1, negate), "FIRST": (1, lambda s: s.first_bits()), "PREFIX": (1, prefix),
        "SUFFIX": (1, suffix), "INFIX": (1, infix),
        "AND": (2, conjunction), "OR": (2, disjunction), "CONCAT": (2, concat),
        "UNTIL0": (2, lambda a, b: until(a, b, 0)), "UNTIL1": (2, lambda a, b: until(a, b, 1)),
    }
    if op not in table:
        raise CompactSetError(f"unknown compact operator {op!r}")
    arity, fn = table[op]
    if len(args) != arity:
        raise CompactSetError(f"{op} takes {arity} argument(s), got {len(args)}")
    return fn(*args)
