"""Word algebra: destuttering, stuttering, affixes"""
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from core.words import (
    EPSILON, Affix, WordError, affix_closure, concat_sets, destutter, destutter_tuple,
    first_letters, infixes, is_canonical, show, show_set, stutter_k, word, words,
)

bit_words = st.lists(st.integers(0, 1), max_size=10).map(tuple)


class TestDestutter:
    def test_collapses_runs(self):
        assert destutter(word("00110")) == word("010")

    def test_epsilon(self):
        assert destutter(EPSILON) == EPSILON

    def test_tuple_drops_only_common_repeats(self):
        assert destutter_tuple((word("001"), word("111"))) == (word("01"), word("11"))

    def test_tuple_length_mismatch(self):
        with pytest.raises(WordError):
            destutter_tuple((word("01"), word("1")))


class TestStutter:
    def test_two_letters_into_three(self):
        assert stutter_k(word("01"), 3) == words("001", "011")

    def test_too_short(self):
        assert stutter_k(word("010"), 2) == frozenset()

    def test_epsilon(self):
        assert stutter_k(EPSILON, 0) == frozenset({EPSILON})
        assert stutter_k(EPSILON, 2) == frozenset()


class TestAffixes:
    def test_infixes(self):
        assert infixes(word("010")) == words("", "0", "1", "01", "10", "010")

    def test_prefix_closure(self):
        assert affix_closure([word("01"), word("1")], Affix.PREFIX) == words("", "0", "01", "1")

    def test_first_as_words(self):
        assert affix_closure(words("01", "10"), Affix.FIRST) == words("0", "1")

    def test_first_of_epsilon(self):
        with pytest.raises(WordError):
            first_letters(words("", "1"))

    def test_concat_is_not_destuttered(self):
        assert concat_sets(words("01"), words("1", "0")) == words("011", "010")


class TestDisplay:
    def test_bits(self):
        assert show(word("010")) == "010"
        assert show(EPSILON) == "ε"

    def test_set_sorted(self):
        assert show_set(words("10", "0", "01")) == "{0, 01, 10}"


@pytest.mark.property_based
@given(bit_words)
def test_destutter_idempotent_and_canonical(u):
    d = destutter(u)
    assert destutter(d) == d
    assert is_canonical(d)


@pytest.mark.property_based
@given(bit_words.filter(lambda u: len(u) > 0), st.integers(1, 8))
def test_stutter_inverts_destutter(u, k):
    base = destutter(u)
    found = stutter_k(u, k)
    assert all(len(v) == k and destutter(v) == base for v in found)
    expected = comb(k - 1, len(base) - 1) if k >= len(base) else 0
    assert len(found) == expected
