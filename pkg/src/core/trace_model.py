"""Distributed signals, uncertainty regions, canonical segmentation and γ"""
import logging
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from core.errors import MonitorError
from core.words import (
    EPSILON, Affix, ExprSet, Letter, ValueExpr,
    affix_closure, concat_sets, destutter, drop_epsilon,
)
from helpers.cache import get_cache

logger = logging.getLogger(__name__)


class TraceValidationError(MonitorError):
    """Raised when a distributed signal breaks its invariants"""

    def __init__(self, violations: Sequence["Violation"]):
        self.violations = list(violations)
        summary = "; ".join(str(v) for v in self.violations[:5])
        more = f" (+{len(self.violations) - 5} more)" if len(self.violations) > 5 else ""
        super().__init__(f"invalid distributed signal: {summary}{more}")


class SegmentError(MonitorError):
    """Raised when an interval is not a segment of the canonical segmentation"""
    pass


# ── data model ──────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class Signal:
    """Piecewise-constant signal given by its initial value and (tick, value) edges"""
    name: str
    initial: Letter
    edges: Tuple[Tuple[int, Letter], ...] = ()

    @property
    def times(self) -> Tuple[int, ...]:
        return tuple(t for t, _ in self.edges)

    def value_at(self, t: int) -> Letter:
        """Right-continuous value at tick t"""
        idx = bisect_right(self.times, t)
        return self.initial if idx == 0 else self.edges[idx - 1][1]

    def values(self) -> List[Letter]:
        return [self.initial] + [v for _, v in self.edges]

    def alphabet(self) -> frozenset:
        return frozenset(self.values())


@dataclass(frozen=True)
class DistributedSignal:
    """Signals on the shared domain [0, duration) with clock-skew bound epsilon.

    Times are integer ticks of `tick` time units. `reference` names the agent
    whose clock the monitor reads (relative mode); its edges get zero-width
    uncertainty.
    """
    signals: Tuple[Signal, ...]
    duration: int
    epsilon: int
    reference: Optional[str] = None
    tick: Fraction = Fraction(1)

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(s.name for s in self.signals)

    def signal(self, name: str) -> Signal:
        for s in self.signals:
            if s.name == name:
                return s
        raise KeyError(name)

    def epsilon_for(self, name: str) -> int:
        return 0 if name == self.reference else self.epsilon

    def edge_count(self) -> int:
        return sum(len(s.edges) for s in self.signals)


@dataclass(frozen=True, order=True)
class Segment:
    lo: int
    hi: int

    def __str__(self) -> str:
        return f"[{self.lo},{self.hi})"


@dataclass(frozen=True)
class UncertaintyRegion:
    """Open interval (lo, hi) in which an edge may truly occur; expr is v_- · v_+"""
    lo: int
    hi: int
    expr: ValueExpr


@dataclass(frozen=True)
class Violation:
    signal: str
    position: int
    rule: str
    detail: str = field(default="", compare=False)

    def __str__(self) -> str:
        where = f"{self.signal}" if self.position < 0 else f"{self.signal}[{self.position}]"
        return f"{where}: {self.rule}" + (f" ({self.detail})" if self.detail else "")


# ── validation ──────────────────────────────────────────────────────────────

def validate(ds: DistributedSignal) -> List[Violation]:
    """Collect every invariant violation; empty list means the trace is valid"""
    violations: List[Violation] = []
    if ds.duration <= 0:
        violations.append(Violation("*", -1, "non-positive duration", str(ds.duration)))
    if ds.epsilon <= 0:
        violations.append(Violation("*", -1, "non-positive epsilon", str(ds.epsilon)))
    seen = set()
    for sig in ds.signals:
        if not sig.name:
            violations.append(Violation("?", -1, "empty signal name"))
        elif sig.name in seen:
            violations.append(Violation(sig.name, -1, "duplicate signal name"))
        seen.add(sig.name)

        previous_t, previous_v = None, sig.initial
        for i, (t, v) in enumerate(sig.edges):
            if t == 0:
                violations.append(Violation(sig.name, i, "edge at time 0"))
            elif t < 0:
                violations.append(Violation(sig.name, i, "negative timestamp", str(t)))
            if previous_t is not None and t <= previous_t:
                violations.append(Violation(sig.name, i, "non-increasing timestamps",
                                            f"{previous_t} then {t}"))
            if t >= ds.duration:
                violations.append(Violation(sig.name, i, "edge beyond duration", str(t)))
            if v == previous_v:
                violations.append(Violation(sig.name, i, "repeated value", str(v)))
            previous_t, previous_v = t, v
    if ds.reference is not None and ds.reference not in seen:
        violations.append(Violation(ds.reference, -1, "unknown reference agent"))
    return violations


def ensure_valid(ds: DistributedSignal) -> DistributedSignal:
    violations = validate(ds)
    if violations:
        raise TraceValidationError(violations)
    return ds


def apply_relative(ds: DistributedSignal, agent: str) -> DistributedSignal:
    """Monitor on `agent`'s local clock: its regions collapse to their timestamps

    Raises:
        TraceValidationError: agent is not a signal of ds
    """
    if agent not in ds.names:
        raise TraceValidationError([Violation(agent, -1, "unknown reference agent")])
    return replace(ds, reference=agent)


# ── regions and segmentation ────────────────────────────────────────────────

def uncertainty_regions(x: Signal, eps: int, d: int) -> List[UncertaintyRegion]:
    """One region (max(0, t−ε), min(d, t+ε)) per edge, labelled previous·new value"""
    regions = []
    previous = x.initial
    for t, v in x.edges:
        regions.append(UncertaintyRegion(max(0, t - eps), min(d, t + eps), (previous, v)))
        previous = v
    return regions


def regions_of(ds: DistributedSignal, x: Signal) -> List[UncertaintyRegion]:
    return uncertainty_regions(x, ds.epsilon_for(x.name), ds.duration)


def canonical_endpoints(ds: DistributedSignal) -> Tuple[int, ...]:
    """Sorted, deduplicated F = {0, d} ∪ region endpoints"""
    points = {0, ds.duration}
    for sig in ds.signals:
        for region in regions_of(ds, sig):
            points.add(region.lo)
            points.add(region.hi)
    return tuple(sorted(points))


def canonical_segmentation(ds: DistributedSignal) -> List[Segment]:
    points = canonical_endpoints(ds)
    return [Segment(lo, hi) for lo, hi in zip(points, points[1:])]


def segment_index(segments: Sequence[Segment], t: int) -> int:
    """Index of the segment containing tick t (the last one when t ≥ d)"""
    starts = [s.lo for s in segments]
    return max(0, min(len(segments) - 1, bisect_right(starts, t) - 1))


# ── γ ───────────────────────────────────────────────────────────────────────

def _region_part(region: UncertaintyRegion, seg: Segment) -> ExprSet:
    if not (region.lo < seg.hi and seg.lo < region.hi):
        return frozenset({EPSILON})
    starts_here = region.lo == seg.lo
    ends_here = region.hi == seg.hi
    if starts_here and ends_here:
        return frozenset({region.expr})
    if starts_here:
        return affix_closure([region.expr], Affix.PREFIX)
    if ends_here:
        return affix_closure([region.expr], Affix.SUFFIX)
    return affix_closure([region.expr], Affix.INFIX)


def compute_gamma(ds: DistributedSignal, x: Signal, seg: Segment) -> ExprSet:
    """Uncached γ(x, seg)"""
    parts = [_region_part(r, seg) for r in regions_of(ds, x)]
    if all(p == frozenset({EPSILON}) for p in parts):
        return frozenset({(x.value_at(seg.lo),)})
    combined: ExprSet = frozenset({EPSILON})
    for part in parts:
        if part != frozenset({EPSILON}):
            combined = frozenset(destutter(u) for u in concat_sets(combined, part))
    return drop_epsilon(combined)


def gamma(ds: DistributedSignal, x: Signal, seg: Segment,
          segments: Optional[Sequence[Segment]] = None) -> ExprSet:
    """Possible value expressions of x on a segment of the canonical segmentation

    Raises:
        SegmentError: seg is not a segment of ds
    """
    segments = segments if segments is not None else canonical_segmentation(ds)
    idx = bisect_left(segments, seg)
    if idx >= len(segments) or segments[idx] != seg:
        raise SegmentError(f"{seg} is not a canonical segment")

    key = (x, ds.epsilon_for(x.name), ds.duration, seg.lo, seg.hi, canonical_endpoints(ds))
    return get_cache().gamma(key, lambda: compute_gamma(ds, x, seg))


def gamma_table(ds: DistributedSignal) -> Tuple[List[Segment], List[List[ExprSet]]]:
    """Segmentation plus γ rows, one per signal"""
    segments = canonical_segmentation(ds)
    rows = [[gamma(ds, sig, seg, segments) for seg in segments] for sig in ds.signals]
    return segments, rows


# ── consistency ─────────────────────────────────────────────────────────────

def observed_word(x_prime: Signal, seg: Segment) -> ValueExpr:
    """Value at the segment start followed by each in-segment edge value, destuttered"""
    letters = [x_prime.value_at(seg.lo)]
    letters += [v for t, v in x_prime.edges if seg.lo < t < seg.hi]
    return destutter(tuple(letters))


def is_consistent(ds: DistributedSignal, x_prime: Signal, x: Signal) -> bool:
    """True iff every segment's observed word of x_prime lies in γ(x, segment)"""
    segments = canonical_segmentation(ds)
    for seg in segments:
        if observed_word(x_prime, seg) not in gamma(ds, x, seg, segments):
            logger.debug(f"{x_prime.name} leaves γ({x.name}, {seg})")
            return False
    return True
