"""Command-line surface: exit codes and outputs"""
import json

import pytest

from main import EXIT_DISAGREE, EXIT_ERROR, EXIT_INFEASIBLE, main


@pytest.fixture
def two_pulses_file(samples_dir):
    return str(samples_dir / "two_pulses.json")


class TestMonitor:
    @pytest.mark.parametrize("formula, code, verdict", [
        ("G x1", 1, "FALSE"),
        ("F (x1 & x2)", 2, "UNKNOWN"),
        ("G (x1 | !x1)", 0, "TRUE"),
    ])
    def test_verdicts(self, capsys, two_pulses_file, formula, code, verdict):
        assert main(["monitor", "--trace", two_pulses_file, "--formula", formula]) == code
        assert capsys.readouterr().out.startswith(verdict)

    def test_combined(self, capsys, two_pulses_file):
        code = main(["monitor", "--trace", two_pulses_file, "--formula", "F (x1 & x2)",
                     "--engine", "combined", "--format", "records"])
        assert code == 0
        assert capsys.readouterr().out.strip() == "verdict=TRUE engine_used=exact"

    def test_oracle_infeasible(self, tmp_path, two_pulses_file):
        settings = tmp_path / "config.json"
        settings.write_text(json.dumps({"oracle": {"max_edges": 2}}))
        code = main(["--config", str(settings), "monitor", "--trace", two_pulses_file,
                     "--formula", "F x1", "--engine", "oracle"])
        assert code == EXIT_INFEASIBLE

    def test_compact_backend(self, capsys, two_pulses_file):
        assert main(["monitor", "--trace", two_pulses_file, "--formula", "G x1", "--backend", "compact"]) == 1

    def test_relative(self, two_pulses_file):
        assert main(["monitor", "--trace", two_pulses_file, "--formula", "F x1", "--relative", "x1"]) == 0

    def test_real_valued(self, samples_dir):
        trace = str(samples_dir / "water_tank.json")
        assert main(["monitor", "--trace", trace, "--formula", "G (x1 + x2 >= 4)"]) == 0

    @pytest.mark.parametrize("formula", ["G (x1 &", "F z"])
    def test_bad_formula(self, two_pulses_file, formula):
        assert main(["monitor", "--trace", two_pulses_file, "--formula", formula]) == EXIT_ERROR

    def test_missing_trace(self, tmp_path):
        assert main(["monitor", "--trace", str(tmp_path / "none.json"), "--formula", "F x1"]) == EXIT_ERROR


class TestOtherCommands:
    def test_gamma_records(self, capsys, two_pulses_file):
        assert main(["gamma", "--trace", two_pulses_file, "--format", "records"]) == 0
        out = capsys.readouterr().out
        assert "segments=[0,1) [1,3) [3,4) [4,5) [5,7) [7,8)" in out
        assert "signal=x1 segment=[3,4) gamma={01, 010, 1, 10}" in out

    def test_gamma_csv(self, capsys, two_pulses_file):
        assert main(["gamma", "--trace", two_pulses_file, "--format", "csv"]) == 0
        assert capsys.readouterr().out.splitlines()[0] == "signal,[0,1),[1,3),[3,4),[4,5),[5,7),[7,8)"

    def test_compare_false_positive(self, capsys, two_pulses_file):
        code = main(["compare", "--trace", two_pulses_file, "--formula", "F (x1 & x2)", "--format", "records"])
        assert code == EXIT_DISAGREE
        assert "relation=false_positive" in capsys.readouterr().out

    def test_compare_agree(self, two_pulses_file):
        assert main(["compare", "--trace", two_pulses_file, "--formula", "G x1"]) == 0

    def test_gen(self, tmp_path):
        out = tmp_path / "trace.json"
        args = ["gen", "--signals", "2", "--duration", "10", "--edges", "3", "--seed", "5", "--out", str(out)]
        assert main(args) == 0
        first = out.read_text()
        assert main(args) == 0
        assert out.read_text() == first
        assert main(["monitor", "--trace", str(out), "--formula", "F x1 | G x2"]) in (0, 1, 2)

    def test_gen_infeasible(self):
        assert main(["gen", "--duration", "3", "--edges", "5"]) == EXIT_ERROR

    def test_bench(self, tmp_path):
        out = tmp_path / "bench"
        code = main(["bench", "--samples", "2", "--durations", "6", "--epsilons", "1", "--workers", "1",
                     "--formula", "phi1=G (p & q)", "--out", str(out), "--format", "csv"])
        assert code == 0
        assert {p.name for p in out.iterdir()} == {"accuracy.csv", "timing.csv", "summary.md"}

    def test_bench_bad_formula_flag(self, tmp_path):
        assert main(["bench", "--formula", "phi1", "--out", str(tmp_path)]) == EXIT_ERROR
