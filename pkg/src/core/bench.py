"""Accuracy and speedup bench: approximate monitor against the enumeration oracle"""
import csv
import io
import logging
import statistics
import threading
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from core.engine_config import BackendKind, EngineConfig, Variant
from core.formula import parse
from core.generator import GeneratorError, GenParams, generate
from core.oracle import OracleInfeasibleError, oracle_check
from core.verdict import Verdict, monitor
from helpers.config import DEFAULTS
from helpers.workers_calculator import WorkerCalculator

logger = logging.getLogger(__name__)

ACCURACY_COLUMNS = [
    "formula_id", "formula", "duration", "epsilon", "samples", "seed", "tick", "engine", "backend",
    "adm_true", "adm_false", "adm_unknown", "oracle_true", "oracle_false", "oracle_unknown",
    "infeasible", "false_positives", "fp_rate", "unsound",
]
TIMING_COLUMNS = [
    "formula_id", "duration", "epsilon", "measured", "adm_ms_mean", "oracle_ms_mean",
    "combined_ms_mean", "speedup", "combined_speedup",
]


BENCH_DEFAULTS = DEFAULTS["bench"]


def _strings(values) -> List[str]:
    return [str(v) for v in values]


@dataclass
class BenchConfig:
    """One bench run; durations, epsilons and resolution are in time units

    Every default comes from helpers.config.DEFAULTS["bench"].
    """
    durations: List[str] = field(default_factory=lambda: _strings(BENCH_DEFAULTS["durations"]))
    epsilons: List[str] = field(default_factory=lambda: _strings(BENCH_DEFAULTS["epsilons"]))
    formulas: Dict[str, str] = field(default_factory=lambda: dict(BENCH_DEFAULTS["formulas"]))
    samples: int = BENCH_DEFAULTS["samples"]
    seed: int = BENCH_DEFAULTS["seed"]
    edges_per_signal: int = BENCH_DEFAULTS["edges_per_signal"]
    resolution: str = str(BENCH_DEFAULTS["resolution"])
    tick: str = str(BENCH_DEFAULTS["tick"])
    names: Tuple[str, ...] = ("p", "q")
    variant: Variant = Variant.ADM
    backend: BackendKind = BackendKind.EXPLICIT
    max_edges: int = DEFAULTS["oracle"]["max_edges"]
    max_traces: int = BENCH_DEFAULTS["max_traces"]

    @classmethod
    def from_config(cls, config) -> "BenchConfig":
        """Build from a helpers.config.Config"""
        cfg = EngineConfig.from_config(config)

        def setting(key):
            return config.get("bench", key, default=BENCH_DEFAULTS[key])

        return cls(
            durations=_strings(setting("durations")),
            epsilons=_strings(setting("epsilons")),
            formulas=dict(setting("formulas")),
            samples=int(setting("samples")),
            seed=int(setting("seed")),
            edges_per_signal=int(setting("edges_per_signal")),
            resolution=str(setting("resolution")),
            tick=str(setting("tick")),
            variant=cfg.variant,
            backend=cfg.backend,
            max_edges=int(config.get("oracle", "max_edges", default=DEFAULTS["oracle"]["max_edges"])),
            max_traces=int(setting("max_traces")),
        )


@dataclass(frozen=True)
class SampleJob:
    """One generated trace monitored against every formula of the run"""
    duration: str
    epsilon: str
    index: int
    config: BenchConfig


@dataclass(frozen=True)
class SampleResult:
    formula_id: str
    duration: str
    epsilon: str
    index: int
    adm: Verdict
    oracle: Optional[Verdict]  # None when the oracle was infeasible
    adm_seconds: float
    oracle_seconds: float

    @property
    def false_positive(self) -> bool:
        return self.adm is Verdict.UNKNOWN and self.oracle is not None and self.oracle.conclusive

    @property
    def unsound(self) -> bool:
        return self.adm.conclusive and self.oracle is not None and self.oracle is not self.adm

    @property
    def combined_seconds(self) -> float:
        return self.adm_seconds + (self.oracle_seconds if self.adm is Verdict.UNKNOWN else 0.0)


@dataclass
class CellReport:
    """Aggregate of one (formula, d, ε) heatmap cell"""
    formula_id: str
    formula: str
    duration: str
    epsilon: str
    results: List[SampleResult] = field(default_factory=list)

    def count(self, attr: str, verdict: Verdict) -> int:
        return sum(1 for r in self.results if getattr(r, attr) is verdict)

    @property
    def measured(self) -> List[SampleResult]:
        return [r for r in self.results if r.oracle is not None]

    @property
    def infeasible(self) -> int:
        return len(self.results) - len(self.measured)

    @property
    def false_positives(self) -> int:
        return sum(1 for r in self.results if r.false_positive)

    @property
    def fp_rate(self) -> Optional[Fraction]:
        measured = self.measured
        return Fraction(self.false_positives, len(measured)) if measured else None

    @property
    def unsound(self) -> int:
        return sum(1 for r in self.results if r.unsound)

    def speedups(self) -> Tuple[List[float], List[float]]:
        """Per-sample oracle/adm and oracle/combined ratios"""
        plain, combined = [], []
        for r in self.measured:
            if r.adm_seconds > 0:
                plain.append(r.oracle_seconds / r.adm_seconds)
            if r.combined_seconds > 0:
                combined.append(r.oracle_seconds / r.combined_seconds)
        return plain, combined

    def total_speedup(self, combined: bool = False) -> Optional[float]:
        """Total oracle time over total approximate (or combined) time"""
        measured = self.measured
        spent = sum(r.combined_seconds if combined else r.adm_seconds for r in measured)
        return sum(r.oracle_seconds for r in measured) / spent if measured and spent > 0 else None


def sample_seed(seed: int, duration: str, epsilon: str, index: int) -> str:
    return f"{seed}:{duration}:{epsilon}:{index}"


def gen_params(job: SampleJob) -> GenParams:
    cfg = job.config
    tick = Fraction(cfg.tick)

    def ticks(value: str) -> int:
        q = Fraction(value) / tick
        if q.denominator != 1:
            raise GeneratorError(f"{value} is not a multiple of the tick {cfg.tick}")
        return int(q)

    return GenParams(
        n_signals=len(cfg.names), duration=ticks(job.duration), epsilon=ticks(job.epsilon),
        edges_per_signal=cfg.edges_per_signal, seed=sample_seed(cfg.seed, job.duration, job.epsilon, job.index),
        resolution=ticks(cfg.resolution), names=tuple(cfg.names), tick=tick,
    )


def run_sample(job: SampleJob) -> List[SampleResult]:
    """Generate one trace and monitor it with both engines for every formula"""
    cfg = job.config
    ds = generate(gen_params(job))
    engine = EngineConfig(variant=cfg.variant, backend=cfg.backend)
    results = []
    for formula_id, text in sorted(cfg.formulas.items()):
        phi = parse(text, declared=cfg.names)

        started = time.perf_counter()
        adm = monitor(ds, phi, engine)
        adm_seconds = time.perf_counter() - started

        started = time.perf_counter()
        try:
            oracle = oracle_check(ds, phi, max_edges=cfg.max_edges, max_traces=cfg.max_traces).verdict
        except OracleInfeasibleError as e:
            logger.debug(f"{formula_id} d={job.duration} ε={job.epsilon} #{job.index}: {e}")
            oracle = None
        oracle_seconds = time.perf_counter() - started

        results.append(SampleResult(formula_id, job.duration, job.epsilon, job.index,
                                    adm, oracle, adm_seconds, oracle_seconds))
    return results


class BenchEngine:
    """Runs bench samples in a process pool and aggregates them into cells"""

    def __init__(self, max_workers: Optional[int] = None):
        self.stop_requested = False
        self.max_workers = max_workers
        self._lock = threading.Lock()

    def stop(self):
        """Request stop; cells keep the samples finished so far"""
        self.stop_requested = True

    def reset_stop(self):
        self.stop_requested = False

    def _workers(self, jobs: int) -> int:
        if self.max_workers is not None:
            logger.info(f"🔧 Using {self.max_workers} workers")
            return self.max_workers
        workers, info = WorkerCalculator.calculate_optimal_workers(jobs=jobs)
        logger.info(f"🔧 Auto-configured workers: {info}")
        return workers

    def run(
        self,
        config: BenchConfig,
        progress_callback: Optional[Callable[[int, int, int], None]] = None,
    ) -> List[CellReport]:
        """Run every (d, ε, sample) job; returns cells sorted by formula, d, ε"""
        self.reset_stop()
        jobs = [SampleJob(d, eps, i, config)
                for d in config.durations for eps in config.epsilons for i in range(config.samples)]
        results: List[SampleResult] = []
        completed = 0
        workers = self._workers(len(jobs))

        def record(batch: List[SampleResult]):
            nonlocal completed
            with self._lock:
                results.extend(batch)
                completed += 1
                percent = int(completed / len(jobs) * 100)
            if progress_callback:
                progress_callback(completed, len(jobs), percent)

        if workers <= 1:
            for job in jobs:
                if self.stop_requested:
                    break
                record(run_sample(job))
        else:
            with ProcessPoolExecutor(max_workers=workers) as executor:
                future_to_job = {executor.submit(run_sample, job): job for job in jobs}
                for future in as_completed(future_to_job):
                    if self.stop_requested:
                        for f in future_to_job:
                            f.cancel()
                        break
                    job = future_to_job[future]
                    try:
                        record(future.result())
                    except Exception as e:
                        logger.error(f"❌ sample d={job.duration} ε={job.epsilon} #{job.index} failed: {e}")

        cells = aggregate(config, results)
        logger.info(f"✅ Bench finished: {completed}/{len(jobs)} samples, {len(cells)} cells")
        return cells


def aggregate(config: BenchConfig, results: List[SampleResult]) -> List[CellReport]:
    cells: Dict[Tuple[str, str, str], CellReport] = {}
    for fid in sorted(config.formulas):
        for d in config.durations:
            for eps in config.epsilons:
                cells[(fid, d, eps)] = CellReport(fid, config.formulas[fid], d, eps)
    for r in sorted(results, key=lambda r: (r.formula_id, r.duration, r.epsilon, r.index)):
        cells[(r.formula_id, r.duration, r.epsilon)].results.append(r)
    return list(cells.values())


# ── outputs ─────────────────────────────────────────────────────────────────

def _mean(values: List[float]) -> str:
    return f"{statistics.fmean(values):.6g}" if values else ""


def _ms(values: List[float]) -> str:
    return _mean([v * 1000 for v in values])


def accuracy_csv(config: BenchConfig, cells: List[CellReport]) -> str:
    """Verdict counts per cell; byte-identical for a fixed seed"""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(ACCURACY_COLUMNS)
    for c in cells:
        rate = c.fp_rate
        writer.writerow([
            c.formula_id, c.formula, c.duration, c.epsilon, len(c.results), config.seed, config.tick,
            config.variant.value, config.backend.value,
            c.count("adm", Verdict.TRUE), c.count("adm", Verdict.FALSE), c.count("adm", Verdict.UNKNOWN),
            c.count("oracle", Verdict.TRUE), c.count("oracle", Verdict.FALSE), c.count("oracle", Verdict.UNKNOWN),
            c.infeasible, c.false_positives, "" if rate is None else f"{float(rate):.4f}", c.unsound,
        ])
    return out.getvalue()


def timing_csv(cells: List[CellReport]) -> str:
    """Wall-clock means and speedups; not reproducible across runs"""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(TIMING_COLUMNS)
    for c in cells:
        measured = c.measured
        plain, combined = c.total_speedup(), c.total_speedup(combined=True)
        writer.writerow([
            c.formula_id, c.duration, c.epsilon, len(measured),
            _ms([r.adm_seconds for r in measured]), _ms([r.oracle_seconds for r in measured]),
            _ms([r.combined_seconds for r in measured]),
            "" if plain is None else f"{plain:.6g}", "" if combined is None else f"{combined:.6g}",
        ])
    return out.getvalue()


def fp_rates_by_formula(cells: List[CellReport]) -> Dict[str, Optional[float]]:
    rates: Dict[str, Optional[float]] = {}
    for fid in sorted({c.formula_id for c in cells}):
        fps = sum(c.false_positives for c in cells if c.formula_id == fid)
        measured = sum(len(c.measured) for c in cells if c.formula_id == fid)
        rates[fid] = fps / measured if measured else None
    return rates


def summary_markdown(config: BenchConfig, cells: List[CellReport]) -> str:
    """Per-formula FP rates and speedups, plus the conjunctive-vs-mixed FP observation"""
    rates = fp_rates_by_formula(cells)
    lines = [
        "# Bench summary", "",
        f"seed {config.seed}, tick {config.tick}, engine {config.variant.value}, backend {config.backend.value}, "
        f"{config.samples} samples per (d, ε), {config.edges_per_signal} edges per signal", "",
        "| formula | text | FP rate | median speedup | median combined speedup | infeasible | unsound |",
        "|---|---|---|---|---|---|---|",
    ]
    for fid in sorted(config.formulas):
        mine = [c for c in cells if c.formula_id == fid]
        plain = [s for c in mine for s in c.speedups()[0]]
        combined = [s for c in mine for s in c.speedups()[1]]
        rate = rates.get(fid)
        lines.append(
            f"| {fid} | `{config.formulas[fid]}` | {'n/a' if rate is None else f'{rate:.1%}'} | "
            f"{f'{statistics.median(plain):.1f}×' if plain else 'n/a'} | "
            f"{f'{statistics.median(combined):.1f}×' if combined else 'n/a'} | "
            f"{sum(c.infeasible for c in mine)} | {sum(c.unsound for c in mine)} |")

    lines += ["", "## Observation", ""]
    base = rates.get("phi1")
    mixed = {fid: rates.get(fid) for fid in ("phi2", "phi3") if rates.get(fid) is not None}
    if base is None or not mixed:
        lines.append("Not enough measured cells to compare phi1 with phi2/phi3.")
    else:
        fewer = all(base <= r for r in mixed.values())
        others = ", ".join(f"{fid} {r:.1%}" for fid, r in mixed.items())
        lines.append(
            f"phi1 (conjunctive only) FP rate {base:.1%} against {others}: "
            + ("phi1 shows no more false positives than the mixed formulas in this run."
               if fewer else "phi1 shows more false positives than a mixed formula in this run."))
    return "\n".join(lines) + "\n"
