"""Command-line entry: monitor, gamma, gen, bench, compare"""
import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

# Add src directory to path
src_path = Path(__file__).parent
sys.path.insert(0, str(src_path if src_path.name == 'src' else src_path / 'src'))

from core.bench import BenchConfig, BenchEngine, accuracy_csv, summary_markdown, timing_csv
from core.engine_config import BackendKind, EngineConfig, Variant
from core.errors import MonitorError
from core.formula import parse
from core.generator import BOOLEAN, GenParams, generate
from core.oracle import OracleInfeasibleError, oracle_check
from core.trace_model import apply_relative, ensure_valid, gamma_table
from core.verdict import Verdict, monitor, monitor_combined
from helpers.cache import get_cache
from helpers.config import Config
from helpers.log import setup_logging
from helpers.report import (
    bench_table, gamma_csv, gamma_records, gamma_table_widget, print_table, records,
)
from helpers.trace_io import DEFAULT_TICK, dumps_trace, load_trace, parse_decimal, save_trace

logger = logging.getLogger("main")

EXIT_ERROR = 3
EXIT_INFEASIBLE = 4
EXIT_DISAGREE = 5

ENGINES = [v.value for v in Variant] + ["oracle", "combined"]


# ── argument parsing ────────────────────────────────────────────────────────

def _common(p: argparse.ArgumentParser, trace: bool = True):
    if trace:
        p.add_argument("--trace", required=True, help="trace file (JSON)")
        p.add_argument("--relative", metavar="SIGNAL", help="read time from this agent's clock")
    p.add_argument("--epsilon", help="override the clock-skew bound (time units)")
    p.add_argument("--tick", help="time units per tick (default from the trace or settings)")
    p.add_argument("--out", help="write the result to this path")
    p.add_argument("--format", choices=["text", "csv", "records"], default="text")


def _engine_flags(p: argparse.ArgumentParser, engines):
    p.add_argument("--formula", required=True)
    p.add_argument("--engine", choices=engines)
    p.add_argument("--backend", choices=[b.value for b in BackendKind])
    p.add_argument("--assume-monotone", action="store_true",
                   help="let adm-c accept predicates the polarity check cannot classify")
    p.add_argument("--grid", help="oracle retiming grid (time units)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stlmon", description="Offline monitoring of distributed STL traces")
    parser.add_argument("--config", help="settings JSON (default src/settings/config.json)")
    parser.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("monitor", help="three-valued verdict of a formula on a trace")
    _common(p)
    _engine_flags(p, ENGINES)

    p = sub.add_parser("gamma", help="canonical segmentation and the γ table")
    _common(p)

    p = sub.add_parser("compare", help="approximate verdict against the oracle")
    _common(p)
    _engine_flags(p, [v.value for v in Variant])

    p = sub.add_parser("gen", help="generate a random distributed trace")
    _common(p, trace=False)
    p.add_argument("--signals", type=int, default=2)
    p.add_argument("--names", help="comma-separated signal names")
    p.add_argument("--duration", default="10")
    p.add_argument("--edges", type=int, default=2, help="edges per signal")
    p.add_argument("--resolution", help="timestamp grid (time units, default one tick)")
    p.add_argument("--alphabet", default=BOOLEAN, help="'boolean' or comma-separated values")
    p.add_argument("--seed", default="0")

    p = sub.add_parser("bench", help="FP rate and speedup of the approximate monitor")
    _common(p, trace=False)
    p.add_argument("--engine", choices=[v.value for v in Variant])
    p.add_argument("--backend", choices=[b.value for b in BackendKind])
    p.add_argument("--seed", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--durations", help="comma-separated durations (time units)")
    p.add_argument("--epsilons", help="comma-separated clock-skew bounds (time units)")
    p.add_argument("--formula", action="append", metavar="ID=TEXT", help="replace the formula set")
    p.add_argument("--workers", type=int)
    return parser


# ── helpers ─────────────────────────────────────────────────────────────────

def _emit(text: str, out: str = None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
        logger.info(f"✅ Wrote {out}")
    else:
        sys.stdout.write(text)


def _load(args, config: Config):
    ds = load_trace(args.trace, tick=args.tick, epsilon=args.epsilon,
                    default_tick=config.get("monitor", "tick", default=DEFAULT_TICK))
    ensure_valid(ds)
    if args.relative:
        ds = apply_relative(ds, args.relative)
    return ds


def _engine_config(args, config: Config) -> EngineConfig:
    cfg = EngineConfig.from_config(config)
    if args.engine in {v.value for v in Variant}:
        cfg = replace(cfg, variant=Variant(args.engine))
    if args.backend:
        cfg = replace(cfg, backend=BackendKind(args.backend))
    if getattr(args, "relative", None):
        cfg = replace(cfg, relative_agent=args.relative)
    if args.assume_monotone:
        cfg = replace(cfg, assume_monotone=True)
    return cfg


def _oracle_options(args, config: Config, ds) -> dict:
    options = {
        "max_edges": int(config.get("oracle", "max_edges", default=12)),
        "max_traces": int(config.get("oracle", "max_traces", default=1000000)),
    }
    if args.grid:
        options["grid"] = parse_decimal(args.grid, "grid") / ds.tick
    return options


def _verdict_output(fmt: str, fields: dict) -> str:
    if fmt == "records":
        return records(fields) + "\n"
    if fmt == "csv":
        return ",".join(fields) + "\n" + ",".join(str(v) for v in fields.values()) + "\n"
    extra = ", ".join(f"{k}: {v}" for k, v in fields.items() if k != "verdict")
    return f"{fields['verdict']}" + (f" ({extra})" if extra else "") + "\n"


# ── subcommands ─────────────────────────────────────────────────────────────

def cmd_monitor(args, config: Config) -> int:
    ds = _load(args, config)
    phi = parse(args.formula, declared=ds.names)
    engine = args.engine or config.get("monitor", "engine", default="adm")
    cfg = _engine_config(args, config)

    if engine == "oracle":
        report = oracle_check(ds, phi, **_oracle_options(args, config, ds))
        verdict = report.verdict
        fields = {"verdict": verdict.name, "engine": report.label, "traces": report.traces,
                  "grid": report.grid * ds.tick}
    elif engine == "combined":
        verdict, used = monitor_combined(ds, phi, cfg, **_oracle_options(args, config, ds))
        fields = {"verdict": verdict.name, "engine_used": used}
    else:
        verdict = monitor(ds, phi, cfg)
        fields = {"verdict": verdict.name, "engine": cfg.variant.value, "backend": cfg.backend.value}
    _emit(_verdict_output(args.format, fields), args.out)
    return verdict.exit_code


def cmd_gamma(args, config: Config) -> int:
    ds = _load(args, config)
    segments, rows = gamma_table(ds)
    if args.format == "csv":
        _emit(gamma_csv(ds, segments, rows), args.out)
    elif args.format == "records" or args.out:
        _emit(gamma_records(ds, segments, rows), args.out)
    else:
        print_table(gamma_table_widget(ds, segments, rows))
    return 0


def cmd_compare(args, config: Config) -> int:
    ds = _load(args, config)
    phi = parse(args.formula, declared=ds.names)
    cfg = _engine_config(args, config)
    approximate = monitor(ds, phi, cfg)
    report = oracle_check(ds, phi, **_oracle_options(args, config, ds))
    if approximate is report.verdict:
        relation = "agree"
    elif approximate is Verdict.UNKNOWN:
        relation = "false_positive"
    else:
        relation = "unsound"
        logger.error(f"❌ approximate {approximate.name} contradicts oracle {report.verdict.name}")
    fields = {"verdict": approximate.name, "oracle": report.verdict.name, "relation": relation,
              "engine": cfg.variant.value, "oracle_label": report.label, "traces": report.traces}
    _emit(_verdict_output(args.format, fields), args.out)
    return 0 if relation == "agree" else EXIT_DISAGREE


def cmd_gen(args, config: Config) -> int:
    tick = parse_decimal(args.tick or "1", "tick")

    def ticks(text: str, what: str) -> int:
        q = parse_decimal(text, what) / tick
        if q.denominator != 1:
            raise MonitorError(f"{what} {text} is not a multiple of the tick {tick}")
        return int(q)

    alphabet = BOOLEAN if args.alphabet == BOOLEAN else \
        tuple(parse_decimal(v, "alphabet") for v in args.alphabet.split(","))
    params = GenParams(
        n_signals=args.signals, duration=ticks(args.duration, "duration"),
        epsilon=ticks(args.epsilon or "1", "epsilon"), edges_per_signal=args.edges,
        alphabet=alphabet, seed=int(args.seed) if args.seed.lstrip("-").isdigit() else args.seed,
        resolution=ticks(args.resolution, "resolution") if args.resolution else 1,
        names=tuple(args.names.split(",")) if args.names else None, tick=tick,
    )
    ds = generate(params)
    if args.out:
        save_trace(ds, args.out)
        logger.info(f"✅ Wrote {args.out}")
    else:
        sys.stdout.write(dumps_trace(ds) + "\n")
    return 0


def cmd_bench(args, config: Config) -> int:
    bench = BenchConfig.from_config(config)
    if args.engine:
        bench.variant = Variant(args.engine)
    if args.backend:
        bench.backend = BackendKind(args.backend)
    if args.seed is not None:
        bench.seed = args.seed
    if args.samples is not None:
        bench.samples = args.samples
    if args.durations:
        bench.durations = [v.strip() for v in args.durations.split(",")]
    if args.epsilons:
        bench.epsilons = [v.strip() for v in args.epsilons.split(",")]
    elif args.epsilon:
        bench.epsilons = [args.epsilon]
    if args.tick:
        bench.tick = args.tick
    if args.formula:
        malformed = [item for item in args.formula if "=" not in item]
        if malformed:
            raise MonitorError(f"--formula expects ID=TEXT, got {malformed[0]!r}")
        bench.formulas = dict(item.split("=", 1) for item in args.formula)

    def progress(done: int, total: int, percent: int):
        logger.info(f"📊 {done}/{total} samples ({percent}%)")

    cells = BenchEngine(max_workers=args.workers).run(bench, progress_callback=progress)
    out_dir = Path(args.out or "bench_out")
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "accuracy.csv").write_text(accuracy_csv(bench, cells), encoding="utf-8")
    (out_dir / "timing.csv").write_text(timing_csv(cells), encoding="utf-8")
    (out_dir / "summary.md").write_text(summary_markdown(bench, cells), encoding="utf-8")
    if args.format == "csv":
        sys.stdout.write(accuracy_csv(bench, cells))
    elif args.format == "text":
        print_table(bench_table(cells))
    logger.info(f"✅ Bench results in {out_dir}/")
    return 0


COMMANDS = {
    "monitor": cmd_monitor,
    "gamma": cmd_gamma,
    "compare": cmd_compare,
    "gen": cmd_gen,
    "bench": cmd_bench,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = Config(args.config) if args.config else Config()
    setup_logging(args.log_level or config.get("logging", "level", default="INFO"))
    get_cache().configure(int(config.get("cache", "max_entries", default=50000)))
    try:
        return COMMANDS[args.command](args, config)
    except OracleInfeasibleError as e:
        logger.error(f"❌ Oracle infeasible: {e}")
        return EXIT_INFEASIBLE
    except (MonitorError, OSError) as e:
        logger.error(f"❌ {e}")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
