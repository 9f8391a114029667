"""Word algebra over finite value alphabets

Value expressions are tuples of letters. Boolean letters are the ints 0 and 1,
real-valued letters are Fractions; both hash and compare exactly, so sets of
mixed representations stay consistent (Fraction(1) == 1).
"""
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import FrozenSet, Iterable, Tuple, Union

from core.errors import MonitorError


Letter = Union[int, Fraction]
ValueExpr = Tuple[Letter, ...]
ExprSet = FrozenSet[ValueExpr]

EPSILON: ValueExpr = ()


class WordError(MonitorError):
    """Raised on malformed word arguments (length mismatch, first of ε)"""
    pass


class Affix(Enum):
    PREFIX = "prefix"
    SUFFIX = "suffix"
    INFIX = "infix"
    FIRST = "first"


# ── construction and display ────────────────────────────────────────────────

def word(text: str) -> ValueExpr:
    """Build a Boolean word from its bit string ("" is ε)"""
    if text in ("", "ε"):
        return EPSILON
    return tuple(int(ch) for ch in text)


def words(*texts: str) -> ExprSet:
    return frozenset(word(t) for t in texts)


def show_letter(letter: Letter) -> str:
    value = Fraction(letter)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def show(u: ValueExpr) -> str:
    """Render a word; bit words are concatenated, other letters joined by '·'"""
    if not u:
        return "ε"
    parts = [show_letter(a) for a in u]
    if all(len(p) == 1 for p in parts):
        return "".join(parts)
    return "·".join(parts)


def show_set(members: Iterable[ValueExpr]) -> str:
    rendered = sorted(show(u) for u in members)
    return "{" + ", ".join(rendered) + "}"


def is_boolean(u: ValueExpr) -> bool:
    return all(a == 0 or a == 1 for a in u)


# ── destuttering ────────────────────────────────────────────────────────────

def destutter(u: ValueExpr) -> ValueExpr:
    """Collapse runs of equal adjacent letters"""
    out = []
    for a in u:
        if not out or out[-1] != a:
            out.append(a)
    return tuple(out)


def is_canonical(u: ValueExpr) -> bool:
    return all(u[i] != u[i + 1] for i in range(len(u) - 1))


def destutter_tuple(us: Tuple[ValueExpr, ...]) -> Tuple[ValueExpr, ...]:
    """Synchronized destutter: drop position i+1 only where every component repeats

    Raises:
        WordError: components differ in length
    """
    if not us:
        return us
    length = len(us[0])
    if any(len(u) != length for u in us):
        raise WordError(f"tuple components differ in length: {[len(u) for u in us]}")
    keep = [i for i in range(length)
            if i == 0 or any(u[i] != u[i - 1] for u in us)]
    return tuple(tuple(u[i] for i in keep) for u in us)


def stutter_k(u: ValueExpr, k: int) -> ExprSet:
    """All length-k words whose destuttering equals destutter(u)"""
    base = destutter(u)
    m = len(base)
    if k < m or (m == 0 and k > 0):
        return frozenset()
    if m == 0:
        return frozenset({EPSILON})
    found = set()
    # choose the m-1 block boundaries among the k-1 inner cut points
    for cuts in combinations(range(1, k), m - 1):
        bounds = (0,) + cuts + (k,)
        found.add(tuple(base[b] for b in range(m) for _ in range(bounds[b + 1] - bounds[b])))
    return frozenset(found)


def destutter_set(members: Iterable[ValueExpr]) -> ExprSet:
    return frozenset(destutter(u) for u in members)


def drop_epsilon(members: Iterable[ValueExpr]) -> ExprSet:
    return frozenset(u for u in members if u)


# ── affix closures and concatenation ────────────────────────────────────────

def prefixes(u: ValueExpr) -> ExprSet:
    return frozenset(u[:i] for i in range(len(u) + 1))


def suffixes(u: ValueExpr) -> ExprSet:
    return frozenset(u[i:] for i in range(len(u) + 1))


def infixes(u: ValueExpr) -> ExprSet:
    return frozenset(u[i:j] for i in range(len(u) + 1) for j in range(i, len(u) + 1))


def first_letters(members: Iterable[ValueExpr]) -> FrozenSet[Letter]:
    """Set of first letters

    Raises:
        WordError: a member is ε
    """
    letters = set()
    for u in members:
        if not u:
            raise WordError("first is undefined on a set containing ε")
        letters.add(u[0])
    return frozenset(letters)


def affix_closure(members: Iterable[ValueExpr], kind: Affix) -> ExprSet:
    """Elementwise prefix/suffix/infix closure (with ε), or first letters as 1-letter words"""
    if kind is Affix.FIRST:
        return frozenset((a,) for a in first_letters(members))
    closure = {Affix.PREFIX: prefixes, Affix.SUFFIX: suffixes, Affix.INFIX: infixes}[kind]
    out = set()
    for u in members:
        out |= closure(u)
    return frozenset(out)


def concat_sets(left: Iterable[ValueExpr], right: Iterable[ValueExpr]) -> ExprSet:
    """Pairwise concatenation; not destuttered"""
    right = tuple(right)
    return frozenset(u + v for u in left for v in right)
