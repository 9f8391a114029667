"""Console rendering for the gamma table and bench cells"""
import csv
import io
from typing import Dict, List, Sequence

from rich.console import Console
from rich.table import Table

from core.trace_model import DistributedSignal, Segment
from core.words import ExprSet, show_set


def gamma_table_widget(ds: DistributedSignal, segments: Sequence[Segment], rows: List[List[ExprSet]]) -> Table:
    title = f"γ  (d={ds.duration}, ε={ds.epsilon}" + (f", relative to {ds.reference})" if ds.reference else ")")
    table = Table(title=title, show_lines=True)
    table.add_column("signal", style="bold")
    for seg in segments:
        table.add_column(str(seg), justify="center")
    for sig, row in zip(ds.signals, rows):
        table.add_row(sig.name, *(show_set(cell) for cell in row))
    return table


def gamma_csv(ds: DistributedSignal, segments: Sequence[Segment], rows: List[List[ExprSet]]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["signal"] + [str(seg) for seg in segments])
    for sig, row in zip(ds.signals, rows):
        writer.writerow([sig.name] + [show_set(cell) for cell in row])
    return out.getvalue()


def gamma_records(ds: DistributedSignal, segments: Sequence[Segment], rows: List[List[ExprSet]]) -> str:
    lines = [f"segments={' '.join(str(s) for s in segments)}"]
    for sig, row in zip(ds.signals, rows):
        for seg, cell in zip(segments, row):
            lines.append(f"signal={sig.name} segment={seg} gamma={show_set(cell)}")
    return "\n".join(lines) + "\n"


def records(fields: Dict[str, object]) -> str:
    """One line of key=value pairs"""
    return " ".join(f"{k}={v}" for k, v in fields.items())


def bench_table(cells) -> Table:
    table = Table(title="bench cells")
    for name in ("formula", "d", "ε", "samples", "FP", "FP rate", "infeasible", "speedup", "combined"):
        table.add_column(name, justify="right" if name not in ("formula",) else "left")
    for c in cells:
        rate = c.fp_rate
        plain, combined = c.total_speedup(), c.total_speedup(combined=True)
        table.add_row(
            c.formula_id, c.duration, c.epsilon, str(len(c.results)), str(c.false_positives),
            "n/a" if rate is None else f"{float(rate):.1%}", str(c.infeasible),
            "n/a" if plain is None else f"{plain:.1f}×", "n/a" if combined is None else f"{combined:.1f}×",
        )
    return table


def print_table(table: Table, console: Console = None):
    (console or Console()).print(table)
