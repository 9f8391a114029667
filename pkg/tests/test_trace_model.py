"""Distributed signals: validation, segmentation, γ and consistency"""
import pytest

from core.trace_model import (
    DistributedSignal, Segment, SegmentError, Signal, TraceValidationError, apply_relative,
    canonical_endpoints, canonical_segmentation, ensure_valid, gamma, gamma_table, is_consistent,
    observed_word, uncertainty_regions, validate,
)
from core.words import word, words
from helpers.cache import get_cache

TWO_PULSE_SEGMENTS = [Segment(0, 1), Segment(1, 3), Segment(3, 4), Segment(4, 5), Segment(5, 7), Segment(7, 8)]

TWO_PULSE_GAMMA = {
    "x1": [words("0", "01"), words("0", "1", "01"), words("01", "010", "1", "10"),
           words("0", "1", "10"), words("0", "10"), words("0")],
    "x2": [words("0"), words("0", "01"), words("0", "1", "01"),
           words("01", "010", "1", "10"), words("0", "1", "10"), words("0", "10")],
}


class TestValidation:
    def test_two_pulses_valid(self, two_pulses):
        assert validate(two_pulses) == []

    def test_names_in_declaration_order(self, two_pulses):
        assert two_pulses.names == ("x1", "x2")

    @pytest.mark.parametrize("edges, rule", [
        (((0, 1),), "edge at time 0"),
        (((3, 1), (3, 0)), "non-increasing timestamps"),
        (((9, 1),), "edge beyond duration"),
        (((2, 0),), "repeated value"),
    ])
    def test_rules(self, edges, rule):
        ds = DistributedSignal((Signal("x", 0, edges),), duration=8, epsilon=1)
        assert rule in [v.rule for v in validate(ds)]

    def test_duplicate_names(self):
        ds = DistributedSignal((Signal("x", 0), Signal("x", 1)), duration=4, epsilon=1)
        assert [v.rule for v in validate(ds)] == ["duplicate signal name"]

    def test_ensure_valid_carries_violations(self):
        ds = DistributedSignal((Signal("x", 0, ((0, 1),)),), duration=0, epsilon=0)
        with pytest.raises(TraceValidationError) as info:
            ensure_valid(ds)
        assert len(info.value.violations) >= 3


class TestSegmentation:
    def test_regions_are_clipped(self, two_pulses):
        regions = uncertainty_regions(two_pulses.signal("x2"), 2, 8)
        assert [(r.lo, r.hi, r.expr) for r in regions] == [(1, 5, word("01")), (4, 8, word("10"))]

    def test_two_pulses(self, two_pulses):
        assert canonical_endpoints(two_pulses) == (0, 1, 3, 4, 5, 7, 8)
        assert canonical_segmentation(two_pulses) == TWO_PULSE_SEGMENTS

    def test_constant_signal(self):
        ds = DistributedSignal((Signal("x", 1),), duration=5, epsilon=1)
        segments, rows = gamma_table(ds)
        assert segments == [Segment(0, 5)]
        assert rows == [[words("1")]]


class TestGamma:
    def test_full_table(self, two_pulses):
        segments, rows = gamma_table(two_pulses)
        assert segments == TWO_PULSE_SEGMENTS
        assert dict(zip(two_pulses.names, rows)) == TWO_PULSE_GAMMA

    def test_overlapping_regions_concatenate(self, two_pulses):
        assert gamma(two_pulses, two_pulses.signal("x1"), Segment(3, 4)) == words("01", "010", "1", "10")

    def test_not_a_segment(self, two_pulses):
        with pytest.raises(SegmentError):
            gamma(two_pulses, two_pulses.signal("x1"), Segment(0, 2))

    def test_cached(self, two_pulses):
        gamma_table(two_pulses)
        misses = get_cache().stats()["misses"]
        gamma_table(two_pulses)
        assert get_cache().stats()["misses"] == misses
        assert get_cache().stats()["hits"] >= 12

    def test_relative_collapses_reference(self, two_pulses):
        ds = apply_relative(two_pulses, "x1")
        segments, rows = gamma_table(ds)
        assert segments == [Segment(0, 1), Segment(1, 2), Segment(2, 4), Segment(4, 5), Segment(5, 8)]
        assert rows[0] == [words("0"), words("0"), words("1"), words("1"), words("0")]

    def test_relative_unknown_agent(self, two_pulses):
        with pytest.raises(TraceValidationError):
            apply_relative(two_pulses, "x9")


class TestConsistency:
    def test_observed_word(self):
        x = Signal("x", 0, ((5, 1), (6, 0)))
        assert observed_word(x, Segment(4, 7)) == word("010")
        assert observed_word(x, Segment(5, 7)) == word("10")

    def test_late_retiming_is_consistent(self, two_pulses):
        shifted = Signal("x1", 0, ((3, 1), (6, 0)))
        assert is_consistent(two_pulses, shifted, two_pulses.signal("x1"))

    def test_missing_edges_are_not(self, two_pulses):
        assert not is_consistent(two_pulses, Signal("x1", 0), two_pulses.signal("x1"))
