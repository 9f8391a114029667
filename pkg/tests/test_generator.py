"""Seeded random trace generation"""
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given

from core.generator import GeneratorError, GenParams, generate
from core.trace_model import validate
from strategies import gen_params


class TestGenerate:
    def test_deterministic(self):
        p = GenParams(n_signals=3, duration=40, epsilon=2, edges_per_signal=5, seed="42:10:1:0")
        assert generate(p) == generate(p)

    def test_seed_changes_trace(self):
        a = generate(GenParams(duration=40, edges_per_signal=5, seed=1))
        b = generate(GenParams(duration=40, edges_per_signal=5, seed=2))
        assert a != b

    def test_zero_edges(self):
        ds = generate(GenParams(n_signals=2, edges_per_signal=0))
        assert ds.edge_count() == 0
        assert ds.names == ("x1", "x2")

    def test_names_and_tick(self):
        ds = generate(GenParams(names=("p", "q"), tick=Fraction(1, 2)))
        assert ds.names == ("p", "q")
        assert ds.tick == Fraction(1, 2)

    def test_resolution(self):
        ds = generate(GenParams(duration=20, edges_per_signal=3, resolution=4, seed=7))
        assert all(t % 4 == 0 for s in ds.signals for t in s.times)

    def test_alphabet(self):
        alphabet = (Fraction(1), Fraction(2), Fraction(5, 2))
        ds = generate(GenParams(duration=30, edges_per_signal=6, alphabet=alphabet, seed=3))
        for s in ds.signals:
            assert {s.initial, *(v for _, v in s.edges)} <= set(alphabet)

    def test_edge_slots_uniform(self):
        counts = Counter()
        for seed in range(500):
            ds = generate(GenParams(n_signals=2, duration=11, edges_per_signal=3, seed=seed))
            counts.update(t for s in ds.signals for t in s.times)
        assert set(counts) == set(range(1, 11))
        expected = sum(counts.values()) / 10
        chi_square = sum((c - expected) ** 2 / expected for c in counts.values())
        # 9 degrees of freedom, alpha = 0.01
        assert chi_square < 21.666


class TestInfeasible:
    @pytest.mark.parametrize("params", [
        GenParams(n_signals=0),
        GenParams(duration=0),
        GenParams(epsilon=0),
        GenParams(edges_per_signal=-1),
        GenParams(resolution=0),
        GenParams(names=("p",)),
        GenParams(duration=4, edges_per_signal=4),
        GenParams(alphabet=(Fraction(1),)),
    ])
    def test_rejected(self, params):
        with pytest.raises(GeneratorError):
            generate(params)


@pytest.mark.property_based
@given(gen_params(max_signals=3, max_edges=4))
def test_generated_traces_are_valid(p):
    ds = generate(p)
    assert validate(ds) == []
    assert ds.edge_count() == p.n_signals * p.edges_per_signal
    assert all(0 < t < p.duration for s in ds.signals for t in s.times)
