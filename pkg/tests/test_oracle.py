"""Exact reference monitor over enumerated retimings"""
from fractions import Fraction
from itertools import islice

import pytest
from hypothesis import given

from core.formula import Not, parse
from core.oracle import (
    OracleInfeasibleError, SyncTrace, default_grid, enumerate_traces, eval_sync, oracle_check, oracle_verdict,
)
from core.trace_model import DistributedSignal, Signal, is_consistent
from core.verdict import Verdict
from strategies import formulas, traces

PULSE = SyncTrace((Signal("x1", 0, ((2, 1), (5, 0))),), 8)


class TestSynchronous:
    @pytest.mark.parametrize("text, expected", [
        ("F x1", True),
        ("G x1", False),
        ("!x1 U x1", True),
        ("F[0,1) x1", False),
        ("F[2,3) x1", True),
        ("F[0,2) x1", False),
        ("F[0,2] x1", True),
        ("G[0,2) !x1", True),
    ])
    def test_single_pulse(self, text, expected):
        assert eval_sync(PULSE, parse(text)) is expected

    def test_fractional_edges(self):
        w = SyncTrace((Signal("x1", 0, ((Fraction(3, 2), 1),)),), 4)
        assert eval_sync(w, parse("F[0,2) x1"))
        assert not eval_sync(w, parse("F[0,1] x1"))


class TestEnumeration:
    def test_no_edges(self):
        ds = DistributedSignal((Signal("x1", 1),), duration=4, epsilon=1)
        assert len(list(enumerate_traces(ds))) == 1

    def test_single_region(self):
        ds = DistributedSignal((Signal("x1", 0, ((2, 1),)),), duration=4, epsilon=1)
        assert default_grid(ds) == Fraction(1, 2)
        times = sorted(w.signal("x1").edges[0][0] for w in enumerate_traces(ds))
        assert times == [Fraction(3, 2), Fraction(2), Fraction(5, 2)]

    def test_happened_before(self, two_pulses):
        for w in enumerate_traces(two_pulses):
            rise1, fall1 = (t for t, _ in w.signal("x1").edges)
            rise2, fall2 = (t for t, _ in w.signal("x2").edges)
            assert rise1 < fall2 and rise2 < fall1

    def test_edge_cap(self, two_pulses):
        with pytest.raises(OracleInfeasibleError):
            list(enumerate_traces(two_pulses, max_edges=3))

    def test_trace_budget(self, two_pulses):
        with pytest.raises(OracleInfeasibleError):
            list(enumerate_traces(two_pulses, max_traces=1))


class TestOracleVerdicts:
    def test_overlap_is_certain(self, two_pulses):
        report = oracle_check(two_pulses, parse("F (x1 & x2)"))
        assert report.verdict is Verdict.TRUE
        assert report.label == "exact"
        assert report.traces > 1

    def test_exclusion_fails(self, two_pulses):
        assert oracle_verdict(two_pulses, parse("G (!x1 | !x2)")) is Verdict.FALSE

    def test_stops_at_both_outcomes(self, two_pulses):
        report = oracle_check(two_pulses, parse("F[0,3) x1"))
        assert report.verdict is Verdict.UNKNOWN
        assert report.label == "grid-exact"

    @pytest.mark.parametrize("text", ["F (x1 & x2)", "G x1", "x1 U x2", "F[0,3) x1"])
    def test_duality(self, two_pulses, text):
        phi = parse(text)
        assert oracle_verdict(two_pulses, parse(f"!({text})")) is oracle_verdict(two_pulses, phi).negated()


@pytest.mark.property_based
@given(traces(names=("x1", "x2"), max_edges=2))
def test_retimings_stay_consistent(ds):
    for w in islice(enumerate_traces(ds), 200):
        for original, retimed in zip(ds.signals, w.signals):
            assert is_consistent(ds, retimed, original)


@pytest.mark.property_based
@given(traces(names=("x1", "x2"), max_edges=2), formulas(max_depth=2))
def test_negation_flips_oracle(ds, phi):
    assert oracle_verdict(ds, Not(phi)) is oracle_verdict(ds, phi).negated()


@pytest.mark.property_based
@given(traces(names=("x1", "x2"), max_edges=2, max_epsilon=1), formulas(max_depth=2))
def test_untimed_verdicts_survive_grid_refinement(ds, phi):
    grid = default_grid(ds)
    assert oracle_verdict(ds, phi, grid=grid / 2) is oracle_verdict(ds, phi, grid=grid)
