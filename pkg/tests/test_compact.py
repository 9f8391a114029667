"""Compact set summaries: closed forms against explicit set semantics"""
from functools import reduce
from operator import or_

import pytest
from hypothesis import given
from hypothesis import strategies as st

from core import compact
from core.bitwise import product_map, product_until
from core.compact import CompactSet, CompactSetError, compact_apply, concretize, summarize
from core.words import Affix, affix_closure, concat_sets, destutter, words

canonical = st.builds(compact.alternating, st.integers(0, 1), st.integers(1, 7))
word_sets = st.frozensets(canonical, min_size=1, max_size=4)

MIXED = words("0", "01", "010", "1", "10")


class TestSummarize:
    def test_mixed_types(self):
        assert summarize(MIXED) == CompactSet(max00=3, max01=2, max10=2, max11=1, has_0=True, has_1=True)

    def test_singleton(self):
        assert summarize(words("0")) == CompactSet(max00=1, has_0=True)

    def test_no_singleton_flag(self):
        s = summarize(words("010"))
        assert s.max00 == 3 and not s.has_0
        assert concretize(s) == words("010")

    def test_rejects_non_boolean(self):
        with pytest.raises(CompactSetError):
            summarize([(0, 2)])

    def test_parity_checked(self):
        with pytest.raises(CompactSetError):
            CompactSet(max00=2)


class TestApply:
    def test_not_swaps_types(self):
        assert compact_apply("NOT", summarize(MIXED)) == CompactSet(
            max00=1, max01=2, max10=2, max11=3, has_0=True, has_1=True)

    def test_first(self):
        assert compact_apply("FIRST", summarize(words("0", "01", "1"))) == (True, True)
        assert compact_apply("FIRST", summarize(words("10"))) == (False, True)

    def test_and_identity(self):
        s = summarize(MIXED)
        assert compact_apply("AND", summarize(words("1")), s) == s

    def test_arity(self):
        with pytest.raises(CompactSetError):
            compact_apply("AND", summarize(MIXED))

    def test_unknown(self):
        with pytest.raises(CompactSetError):
            compact_apply("XOR", summarize(MIXED), summarize(MIXED))

    def test_concat_overlapping_regions(self):
        left = compact.CompactSet(max01=2, max11=1, has_1=True, has_eps=True)
        right = compact.CompactSet(max10=2, max11=1, has_1=True, has_eps=True)
        assert concretize(compact.drop_epsilon(compact.concat(left, right))) == words("01", "010", "1", "10")


WORDS = tuple(compact.alternating(f, n) for f in (0, 1) for n in range(1, 8))
OPS = ("AND", "OR", "UNTIL0", "UNTIL1")


def explicit_words(op, left, right) -> CompactSet:
    """Summary of the product of two explicit word sets"""
    if op == "AND":
        return summarize(product_map([left, right], min))
    if op == "OR":
        return summarize(product_map([left, right], max))
    return summarize(product_until(left, right, int(op[-1])))


def explicit(op, a: CompactSet, b: CompactSet) -> CompactSet:
    return explicit_words(op, concretize(a), concretize(b))


class TestClosedForms:
    @pytest.mark.parametrize("op", OPS)
    def test_every_word_pair(self, op):
        for u in WORDS:
            for v in WORDS:
                a, b = summarize([u]), summarize([v])
                assert compact_apply(op, a, b) == explicit(op, a, b), (op, u, v)

    def test_conjunction_staircase(self):
        got = compact.conjunction(summarize(words("0101")), summarize(words("1010")))
        assert got == CompactSet(max00=7, has_0=True)

    def test_conjunction_with_constant_one_keeps_blocks_apart(self):
        got = compact.conjunction(summarize(words("1")), summarize(words("01010")))
        assert got == CompactSet(max00=5)

    def test_disjunction_is_dual(self):
        a, b = summarize(words("010", "1")), summarize(words("01"))
        assert compact.disjunction(a, b) == compact.negate(
            compact.conjunction(compact.negate(a), compact.negate(b)))

    def test_until_appends_weak_bit(self):
        u, v = summarize(words("101")), summarize(words("010"))
        assert compact.until(u, v, 1) == CompactSet(max01=4, max11=3, has_1=True)
        assert compact.until(u, v, 0) == CompactSet(max00=3, max10=2)

    def test_until_over_zero(self):
        assert compact.until(summarize(words("1")), summarize(words("0")), 0) == CompactSet(max00=1, has_0=True)
        assert compact.until(summarize(words("01")), summarize(words("0")), 1) == CompactSet(max01=2)

    def test_epsilon_operand_rejected(self):
        with pytest.raises(CompactSetError):
            compact.until(CompactSet(has_eps=True), summarize(words("1")), 0)


@pytest.mark.property_based
@given(word_sets)
def test_summary_closure_idempotent(members):
    s = summarize(members)
    assert summarize(concretize(s)) == s
    assert members <= concretize(s)


@pytest.mark.property_based
@given(word_sets, word_sets, st.integers(0, 1))
def test_binary_operators_are_sound(left, right, weak):
    a, b = summarize(left), summarize(right)
    assert product_map([left, right], min) <= concretize(compact.conjunction(a, b))
    assert product_map([left, right], max) <= concretize(compact.disjunction(a, b))
    assert product_until(left, right, weak) <= concretize(compact.until(a, b, weak))
    joined = frozenset(destutter(u) for u in concat_sets(left, right))
    assert joined <= concretize(compact.concat(a, b))



@pytest.mark.property_based
@given(word_sets, word_sets, st.sampled_from(OPS))
def test_closed_forms_equal_explicit_summaries(left, right, op):
    a, b = summarize(left), summarize(right)
    assert compact_apply(op, a, b) == explicit(op, a, b)


@pytest.mark.property_based
@given(word_sets)
def test_affix_closures_are_sound(members):
    s = summarize(members)
    assert affix_closure(members, Affix.PREFIX) <= concretize(compact.prefix(s))
    assert affix_closure(members, Affix.SUFFIX) <= concretize(compact.suffix(s))
    assert affix_closure(members, Affix.INFIX) <= concretize(compact.infix(s))
    assert frozenset(tuple(1 - b for b in u) for u in members) <= concretize(compact.negate(s))


SAME_TYPE = ((0, False), (1, True), (3, False), (3, True), (5, False), (5, True), (7, False), (7, True))
MIXED_TYPE = (0, 2, 4, 6)
ALL_SUMMARIES = tuple(
    CompactSet(m00, m01, m10, m11, has_0, has_1)
    for m00, has_0 in SAME_TYPE for m11, has_1 in SAME_TYPE for m01 in MIXED_TYPE for m10 in MIXED_TYPE
)


def encode(s: CompactSet) -> int:
    """Bitmask in which union is bitwise or and inclusion of concretizations is inclusion of bits"""
    code = 0
    for slot, (f, l) in enumerate(((0, 0), (0, 1), (1, 0), (1, 1))):
        code |= ((1 << ((s.maximum(f, l) + 1) // 2)) - 1) << (4 * slot)
    return code | s.has_0 << 16 | s.has_1 << 17


@pytest.mark.slow
@pytest.mark.parametrize("op", OPS)
def test_every_summary_pair_up_to_seven(op, record_property):
    table = {(u, v): encode(explicit_words(op, [u], [v])) for u in WORDS for v in WORDS}
    members = {s: tuple(concretize(s)) for s in ALL_SUMMARIES}
    unsound, equal = [], 0
    for a in ALL_SUMMARIES:
        row = {v: reduce(or_, (table[u, v] for u in members[a]), 0) for v in WORDS}
        for b in ALL_SUMMARIES:
            expected = reduce(or_, (row[v] for v in members[b]), 0)
            got = encode(compact_apply(op, a, b))
            if expected & ~got:
                unsound.append((a, b))
            equal += expected == got
    rate = equal / len(ALL_SUMMARIES) ** 2
    record_property("equality_rate", rate)
    assert not unsound, f"{len(unsound)} unsound pairs, first {unsound[0]}"
    assert rate == 1.0
