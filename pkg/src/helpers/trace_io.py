"""Trace files: JSON with exact decimal timestamps, converted to integer ticks"""
import json
import logging
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Optional, Union

from core.errors import MonitorError
from core.trace_model import DistributedSignal, Signal

logger = logging.getLogger(__name__)

DEFAULT_TICK = "1e-9"


class TraceFormatError(MonitorError):
    """Raised on malformed trace documents or timestamps finer than the tick"""
    pass


def parse_decimal(text: Any, what: str) -> Fraction:
    """Exact value of a decimal string ("2.5", "1e-9") or a rational "p/q\""""
    if isinstance(text, bool):
        raise TraceFormatError(f"{what}: expected a number, got {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        text = repr(text)
    if not isinstance(text, str):
        raise TraceFormatError(f"{what}: expected a decimal string, got {text!r}")
    text = text.strip()
    try:
        if "/" in text:
            return Fraction(text)
        return Fraction(Decimal(text))
    except (InvalidOperation, ValueError, ZeroDivisionError) as e:
        raise TraceFormatError(f"{what}: not a decimal: {text!r}") from e


def to_ticks(value: Fraction, tick: Fraction, what: str) -> int:
    q = value / tick
    if q.denominator != 1:
        raise TraceFormatError(f"{what}: {value} is not a multiple of the tick {tick}")
    return int(q)


def _letter(raw: Any, what: str):
    if isinstance(raw, bool):
        return int(raw)
    value = parse_decimal(raw, what)
    return int(value) if value.denominator == 1 else value


def decimal_text(value: Fraction) -> str:
    """Shortest exact text for value: a plain decimal when one exists, else p/q"""
    value = Fraction(value)
    den = value.denominator
    for p in (2, 5):
        while den % p == 0:
            den //= p
    if den != 1:
        return f"{value.numerator}/{value.denominator}"
    text = format(Decimal(value.numerator) / Decimal(value.denominator), "f")
    if "." in text:
        text = text.rstrip("0").rstrip(".")
    return text


def _letter_text(v) -> Union[int, str]:
    if isinstance(v, int):
        return v
    return decimal_text(v)


# ── documents ───────────────────────────────────────────────────────────────

def from_document(doc: Dict[str, Any], tick: Optional[str] = None, epsilon: Optional[str] = None,
                  default_tick: str = DEFAULT_TICK) -> DistributedSignal:
    """Build a DistributedSignal from a parsed document; tick/epsilon override the file's

    Raises:
        TraceFormatError: missing fields, bad decimals, or times off the tick grid
    """
    if not isinstance(doc, dict):
        raise TraceFormatError("trace document must be an object")
    for key in ("duration", "epsilon", "signals"):
        if key not in doc and not (key == "epsilon" and epsilon is not None):
            raise TraceFormatError(f"missing field '{key}'")

    tick_value = parse_decimal(tick if tick is not None else doc.get("tick", default_tick), "tick")
    if tick_value <= 0:
        raise TraceFormatError(f"tick must be positive, got {tick_value}")
    duration = to_ticks(parse_decimal(doc["duration"], "duration"), tick_value, "duration")
    eps = to_ticks(parse_decimal(epsilon if epsilon is not None else doc["epsilon"], "epsilon"),
                   tick_value, "epsilon")

    if not isinstance(doc["signals"], list):
        raise TraceFormatError("'signals' must be a list")
    signals = []
    for i, raw in enumerate(doc["signals"]):
        if not isinstance(raw, dict) or "name" not in raw or "initial" not in raw:
            raise TraceFormatError(f"signals[{i}]: needs 'name' and 'initial'")
        name = str(raw["name"])
        edges = []
        for j, edge in enumerate(raw.get("edges", [])):
            if not isinstance(edge, dict) or "t" not in edge or "v" not in edge:
                raise TraceFormatError(f"{name}.edges[{j}]: needs 't' and 'v'")
            t = to_ticks(parse_decimal(edge["t"], f"{name}.edges[{j}].t"), tick_value, f"{name}.edges[{j}].t")
            edges.append((t, _letter(edge["v"], f"{name}.edges[{j}].v")))
        signals.append(Signal(name, _letter(raw["initial"], f"{name}.initial"), tuple(edges)))

    return DistributedSignal(tuple(signals), duration, eps, doc.get("reference"), tick_value)


def to_document(ds: DistributedSignal) -> Dict[str, Any]:
    doc: Dict[str, Any] = {
        "duration": decimal_text(ds.duration * ds.tick),
        "epsilon": decimal_text(ds.epsilon * ds.tick),
        "tick": decimal_text(ds.tick),
        "signals": [
            {
                "name": s.name,
                "initial": _letter_text(s.initial),
                "edges": [{"t": decimal_text(t * ds.tick), "v": _letter_text(v)} for t, v in s.edges],
            }
            for s in ds.signals
        ],
    }
    if ds.reference is not None:
        doc["reference"] = ds.reference
    return doc


def load_trace(path: Union[str, Path], tick: Optional[str] = None, epsilon: Optional[str] = None,
               default_tick: str = DEFAULT_TICK) -> DistributedSignal:
    """Read a trace file

    Raises:
        TraceFormatError: invalid JSON or document
        OSError: unreadable file
    """
    with open(path, "r", encoding="utf-8") as f:
        try:
            doc = json.load(f)
        except json.JSONDecodeError as e:
            raise TraceFormatError(f"{path}: invalid JSON at line {e.lineno}: {e.msg}") from e
    ds = from_document(doc, tick, epsilon, default_tick)
    logger.debug(f"loaded {path}: {len(ds.signals)} signals, {ds.edge_count()} edges, tick {ds.tick}")
    return ds


def dumps_trace(ds: DistributedSignal) -> str:
    return json.dumps(to_document(ds), indent=2)


def save_trace(ds: DistributedSignal, path: Union[str, Path]):
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps_trace(ds) + "\n")
