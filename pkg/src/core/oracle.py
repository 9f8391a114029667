"""Exact reference monitor: enumerate consistent retimings, evaluate each synchronously"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from core.errors import MonitorError
from core.formula import And, Atom, Formula, Literal, Not, Until, expand, is_timed
from core.predicates import holds, variables
from core.trace_model import DistributedSignal, Signal, canonical_endpoints, regions_of
from core.verdict import Verdict

logger = logging.getLogger(__name__)

DEFAULT_MAX_EDGES = 12
DEFAULT_MAX_TRACES = 1_000_000


class OracleInfeasibleError(MonitorError):
    """Raised when an instance exceeds the edge cap or the trace budget"""
    pass


@dataclass(frozen=True)
class SyncTrace:
    """One synchronous trace; edge times are Fractions of a tick"""
    signals: Tuple[Signal, ...]
    duration: int

    def signal(self, name: str) -> Signal:
        for s in self.signals:
            if s.name == name:
                return s
        raise KeyError(name)


@dataclass(frozen=True)
class OracleReport:
    verdict: Verdict
    traces: int
    grid: Fraction
    label: str  # "exact" for untimed formulas, "grid-exact" for timed ones


# ── satisfaction signals ────────────────────────────────────────────────────

@dataclass(frozen=True)
class SatSignal:
    """Exact Boolean signal on [0, d): value at each breakpoint and on the open piece after it"""
    points: Tuple[Fraction, ...]
    at: Tuple[int, ...]
    after: Tuple[int, ...]
    duration: Fraction

    def _piece(self, t: Fraction) -> int:
        lo, hi = 0, len(self.points)
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.points[mid] <= t:
                lo = mid
            else:
                hi = mid
        return lo

    def value(self, t: Fraction) -> int:
        k = self._piece(t)
        return self.at[k] if self.points[k] == t else self.after[k]

    def value_after(self, t: Fraction) -> int:
        """Value on the open stretch right after t"""
        return self.after[self._piece(t)]

    def first_failure(self, t: Fraction) -> Fraction:
        """inf{s > t : false at s}, or d when true on all of (t, d)"""
        k = self._piece(t)
        if not self.after[k]:
            return t
        for j in range(k + 1, len(self.points)):
            if not self.at[j] or not self.after[j]:
                return self.points[j]
        return self.duration

    def exists_true(self, lo: Fraction, lo_closed: bool, hi: Fraction, hi_closed: bool) -> bool:
        """Some instant of ⟨lo, hi⟩ ∩ [0, d) is true"""
        if hi > self.duration or (hi == self.duration and hi_closed):
            hi, hi_closed = self.duration, False
        if lo > hi or (lo == hi and not (lo_closed and hi_closed)):
            return False
        for k, start in enumerate(self.points):
            end = self.points[k + 1] if k + 1 < len(self.points) else self.duration
            if self.at[k] and (lo < start or (lo == start and lo_closed)) and \
                    (start < hi or (start == hi and hi_closed)):
                return True
            if self.after[k]:
                lower, lower_closed = (lo, lo_closed) if lo > start else (start, False)
                upper, upper_closed = (hi, hi_closed) if hi < end else (end, False)
                if lower < upper or (lower == upper and lower_closed and upper_closed):
                    return True
        return False


def _normalize(points, at, after, d) -> SatSignal:
    keep_p, keep_at, keep_after = [points[0]], [at[0]], [after[0]]
    for p, a, b in zip(points[1:], at[1:], after[1:]):
        if a == b == keep_after[-1]:
            continue
        keep_p.append(p)
        keep_at.append(a)
        keep_after.append(b)
    return SatSignal(tuple(keep_p), tuple(keep_at), tuple(keep_after), Fraction(d))


def _sample(d: Fraction, points: Sequence[Fraction], fn) -> SatSignal:
    """Build a signal by evaluating fn at each point and at the midpoint after it"""
    points = sorted(set(p for p in points if 0 <= p < d) | {Fraction(0)})
    at, after = [], []
    for k, p in enumerate(points):
        end = points[k + 1] if k + 1 < len(points) else d
        at.append(fn(p))
        after.append(fn((p + end) / 2))
    return _normalize(points, at, after, d)


def _atom_signal(w: SyncTrace, atom: Atom) -> SatSignal:
    names = variables(atom.predicate)
    sigs = [w.signal(n) for n in names]
    points = [Fraction(t) for s in sigs for t, _ in s.edges]
    return _sample(Fraction(w.duration), points,
                   lambda t: holds(atom.predicate, {s.name: s.value_at(t) for s in sigs}))


def _until_signal(left: SatSignal, right: SatSignal, a: Fraction, b: Optional[Fraction],
                  lo_closed: bool, hi_closed: bool, d: Fraction) -> SatSignal:
    if b is None or b >= d:
        b, hi_closed = d, False

    def sat_at(t: Fraction) -> int:
        limit = left.first_failure(t)
        if t + b < limit:
            hi, closed = t + b, hi_closed
        elif t + b > limit:
            hi, closed = limit, True
        else:
            hi, closed = limit, hi_closed
        return int(right.exists_true(t + a, lo_closed, hi, closed))

    breaks = set()
    for c in set(left.points) | set(right.points) | {d}:
        breaks.update((c, c - a, c - b))
    return _sample(d, list(breaks), sat_at)


def satisfaction(w: SyncTrace, phi: Formula, tick: Fraction) -> SatSignal:
    """Satisfaction signal of an expanded formula (¬, ∧, U and atoms only)"""
    d = Fraction(w.duration)
    if isinstance(phi, Literal):
        return SatSignal((Fraction(0),), (int(phi.value),), (int(phi.value),), d)
    if isinstance(phi, Atom):
        return _atom_signal(w, phi)
    if isinstance(phi, Not):
        s = satisfaction(w, phi.arg, tick)
        return SatSignal(s.points, tuple(1 - v for v in s.at), tuple(1 - v for v in s.after), d)
    if isinstance(phi, And):
        l, r = satisfaction(w, phi.left, tick), satisfaction(w, phi.right, tick)
        return _sample(d, list(l.points) + list(r.points), lambda t: l.value(t) & r.value(t))
    if isinstance(phi, Until):
        l, r = satisfaction(w, phi.left, tick), satisfaction(w, phi.right, tick)
        a, b = phi.interval.to_ticks(tick)
        return _until_signal(l, r, Fraction(a), None if b is None else Fraction(b),
                             phi.interval.lo_closed, phi.interval.hi_closed, d)
    raise TypeError(f"formula is not expanded: {phi!r}")


def eval_sync(w: SyncTrace, phi: Formula, tick: Fraction = Fraction(1)) -> bool:
    """(w, 0) ⊨ phi under the finite-trace semantics"""
    return bool(satisfaction(w, expand(phi), tick).value(Fraction(0)))


# ── retimings ───────────────────────────────────────────────────────────────

def default_grid(ds: DistributedSignal) -> Fraction:
    """Half the gcd of all segmentation endpoints and edge times"""
    values = list(canonical_endpoints(ds)) + [t for s in ds.signals for t in s.times]
    g = reduce(gcd, (v for v in values if v), 0)
    return Fraction(max(g, 1), 2)


def enumerate_traces(ds: DistributedSignal, grid: Optional[Fraction] = None,
                     max_edges: int = DEFAULT_MAX_EDGES,
                     max_traces: int = DEFAULT_MAX_TRACES) -> Iterator[SyncTrace]:
    """Every grid retiming that keeps edges inside their regions and respects happened-before

    Raises:
        OracleInfeasibleError: too many edges, or more than max_traces retimings
    """
    if ds.edge_count() > max_edges:
        raise OracleInfeasibleError(f"{ds.edge_count()} edges exceed the oracle cap of {max_edges}")
    grid = Fraction(grid) if grid is not None else default_grid(ds)

    edges = []  # (original t, signal index, edge index, candidates)
    for si, sig in enumerate(ds.signals):
        for ei, (region, (t, _)) in enumerate(zip(regions_of(ds, sig), sig.edges)):
            if region.lo == region.hi:
                candidates = [Fraction(t)]
            else:
                k = region.lo // grid + 1
                candidates = []
                while k * grid < region.hi:
                    candidates.append(k * grid)
                    k += 1
            edges.append((t, si, ei, candidates))
    edges.sort(key=lambda e: (e[0], e[1], e[2]))

    def ordered(e, f) -> bool:
        return e[1] == f[1] or e[0] + ds.epsilon <= f[0]

    assigned: List[Fraction] = []
    emitted = 0

    def build() -> SyncTrace:
        new_times: Dict[Tuple[int, int], Fraction] = {(e[1], e[2]): assigned[i] for i, e in enumerate(edges)}
        signals = tuple(
            Signal(sig.name, sig.initial,
                   tuple((new_times[(si, ei)], v) for ei, (_, v) in enumerate(sig.edges)))
            for si, sig in enumerate(ds.signals))
        return SyncTrace(signals, ds.duration)

    def backtrack(i: int):
        nonlocal emitted
        if i == len(edges):
            emitted += 1
            if emitted > max_traces:
                raise OracleInfeasibleError(f"more than {max_traces} retimings at grid {grid}")
            yield build()
            return
        f = edges[i]
        for c in f[3]:
            if all(assigned[j] < c for j, e in enumerate(edges[:i]) if ordered(e, f)):
                assigned.append(c)
                yield from backtrack(i + 1)
                assigned.pop()

    yield from backtrack(0)


# ── verdicts ────────────────────────────────────────────────────────────────

def oracle_check(ds: DistributedSignal, phi: Formula, grid: Optional[Fraction] = None,
                 max_edges: int = DEFAULT_MAX_EDGES, max_traces: int = DEFAULT_MAX_TRACES) -> OracleReport:
    """Three-valued verdict over all enumerated traces, stopping once both outcomes appear"""
    grid = Fraction(grid) if grid is not None else default_grid(ds)
    expanded = expand(phi)
    seen = set()
    count = 0
    for w in enumerate_traces(ds, grid, max_edges, max_traces):
        count += 1
        seen.add(bool(satisfaction(w, expanded, ds.tick).value(Fraction(0))))
        if len(seen) == 2:
            break
    if seen == {True}:
        verdict = Verdict.TRUE
    elif seen == {False}:
        verdict = Verdict.FALSE
    else:
        verdict = Verdict.UNKNOWN
    label = "grid-exact" if is_timed(phi) else "exact"
    logger.debug(f"oracle: {verdict.name} after {count} traces (grid {grid}, {label})")
    return OracleReport(verdict, count, grid, label)


def oracle_verdict(ds: DistributedSignal, phi: Formula, grid: Optional[Fraction] = None,
                   max_edges: int = DEFAULT_MAX_EDGES, max_traces: int = DEFAULT_MAX_TRACES) -> Verdict:
    return oracle_check(ds, phi, grid, max_edges, max_traces).verdict
