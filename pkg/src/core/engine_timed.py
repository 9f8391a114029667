"""Timed until: window profiles over the segmentation and placement classes

A placement puts the evaluation interval at an offset t inside segment I.
Offsets where neither window endpoint meets a segmentation endpoint behave
alike, so the offsets of I split into finitely many classes: the critical
points themselves and the open stretches between them.
"""
import logging
from bisect import bisect_right
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import TYPE_CHECKING, List, Optional, Sequence, Tuple

from core.errors import MonitorError
from core.formula import Formula, TimeInterval
from core.trace_model import Segment

if TYPE_CHECKING:
    from core.engine_untimed import EvalContext

logger = logging.getLogger(__name__)


class ProfileError(MonitorError):
    """Raised on unbounded intervals or misaligned placement classes"""
    pass


class ProfileCase(Enum):
    OUTSIDE = "outside"              # window misses I
    POINT = "point"                  # single point at the start of I
    PREFIX = "prefix"                # starts at l_I, ends inside I
    INFIX = "infix"                  # strictly inside I
    FULL = "full"                    # covers I, ends on an endpoint
    FULL_FIRST = "full·first"        # covers I, closed on an endpoint of a later segment
    FULL_PREFIX = "full·prefix"      # covers I, ends inside a later segment
    SUFFIX = "suffix"                # starts inside I, ends on an endpoint
    SUFFIX_FIRST = "suffix·first"
    SUFFIX_PREFIX = "suffix·prefix"


@dataclass(frozen=True)
class Window:
    """Placed interval ⟨lo, hi⟩ in ticks; lo's closedness never changes the words"""
    lo: Fraction
    hi: Fraction
    hi_closed: bool = False

    @property
    def empty(self) -> bool:
        return self.lo > self.hi or (self.lo == self.hi and not self.hi_closed)

    def trimmed(self, d: int) -> "Window":
        if self.hi >= d:
            return Window(self.lo, Fraction(d), False)
        return self


@dataclass(frozen=True)
class ProfileClass:
    case: ProfileCase
    anchor: int
    last: Optional[int] = None
    middle: Tuple[int, ...] = ()


# ── classification ──────────────────────────────────────────────────────────

def classify(window: Window, anchor: int, segments: Sequence[Segment], endpoints: Sequence[int]) -> ProfileClass:
    """Decide which profile case a window takes relative to segment `anchor`"""
    seg = segments[anchor]
    if window.empty or not (seg.lo <= window.lo < seg.hi):
        return ProfileClass(ProfileCase.OUTSIDE, anchor)
    at_start = window.lo == seg.lo
    r = window.hi

    if r < seg.hi:
        if window.lo == r:
            return ProfileClass(ProfileCase.POINT if at_start else ProfileCase.INFIX, anchor)
        return ProfileClass(ProfileCase.PREFIX if at_start else ProfileCase.INFIX, anchor)

    d = segments[-1].hi
    starts = [s.lo for s in segments]
    if r in endpoints:
        last = bisect_right(starts, r) - 1 if r < d else len(segments)
        middle = tuple(range(anchor + 1, last))
        if window.hi_closed and r < d:
            case = ProfileCase.FULL_FIRST if at_start else ProfileCase.SUFFIX_FIRST
            return ProfileClass(case, anchor, last, middle)
        return ProfileClass(ProfileCase.FULL if at_start else ProfileCase.SUFFIX, anchor, None, middle)

    last = bisect_right(starts, r) - 1
    case = ProfileCase.FULL_PREFIX if at_start else ProfileCase.SUFFIX_PREFIX
    return ProfileClass(case, anchor, last, tuple(range(anchor + 1, last)))


def anchor_of(window: Window, segments: Sequence[Segment]) -> int:
    starts = [s.lo for s in segments]
    return max(0, bisect_right(starts, window.lo) - 1)


# ── profiles ────────────────────────────────────────────────────────────────

def _concat_all(ctx: "EvalContext", parts):
    backend = ctx.backend
    value = backend.epsilon()
    for part in parts:
        value = backend.concat(value, part)
    return value


def kappa(phi: Formula, index: int, window: Window, ctx: "EvalContext"):
    """Concatenated evaluations of the full segments between I and the segment holding r"""
    window = window.trimmed(ctx.ds.duration)
    cls = classify(window, index, ctx.segments, ctx.endpoints)
    return _concat_all(ctx, (ctx.eval(phi, k) for k in cls.middle))


def profile_of_class(phi: Formula, cls: ProfileClass, ctx: "EvalContext"):
    backend = ctx.backend
    if cls.case is ProfileCase.OUTSIDE:
        return backend.epsilon()
    tau = ctx.eval(phi, cls.anchor)
    if cls.case is ProfileCase.POINT:
        return backend.first_set(tau)
    if cls.case is ProfileCase.PREFIX:
        return backend.prefix(tau)
    if cls.case is ProfileCase.INFIX:
        return backend.infix(tau)

    head = tau if cls.case in (ProfileCase.FULL, ProfileCase.FULL_FIRST, ProfileCase.FULL_PREFIX) \
        else backend.suffix(tau)
    parts = [head] + [ctx.eval(phi, k) for k in cls.middle]
    if cls.case in (ProfileCase.FULL_FIRST, ProfileCase.SUFFIX_FIRST):
        parts.append(backend.first_set(ctx.eval(phi, cls.last)))
    elif cls.case in (ProfileCase.FULL_PREFIX, ProfileCase.SUFFIX_PREFIX):
        parts.append(backend.prefix(ctx.eval(phi, cls.last)))
    return _concat_all(ctx, parts)


def profile(phi: Formula, index: int, window: Window, ctx: "EvalContext"):
    """Destuttered value expressions of phi over a window placed against segment `index`"""
    window = window.trimmed(ctx.ds.duration)
    return profile_of_class(phi, classify(window, index, ctx.segments, ctx.endpoints), ctx)


# ── placement classes ───────────────────────────────────────────────────────

def bounded_ticks(interval: TimeInterval, ctx: "EvalContext") -> Tuple[int, int, bool]:
    """(a, b, hi_closed) in ticks; [a, ∞) is trimmed at the trace duration"""
    a, b = interval.to_ticks(ctx.ds.tick)
    if b is None:
        return a, ctx.ds.duration, False
    return a, b, interval.hi_closed


def covers_domain(interval: TimeInterval, ctx: "EvalContext") -> bool:
    """⟨0, hi⟩ with hi ≥ d reaches every later instant, exactly like the untimed operator"""
    a, b = interval.to_ticks(ctx.ds.tick)
    return a == 0 and interval.lo_closed and (b is None or b >= ctx.ds.duration)


def placements(seg: Segment, a: int, b: int, endpoints: Sequence[int]) -> List[Fraction]:
    """One representative offset per class, in order: critical points and open-stretch midpoints"""
    critical = {seg.lo}
    for f in endpoints:
        for shift in (a, b):
            t = f - shift
            if seg.lo < t < seg.hi:
                critical.add(t)
    points = sorted(critical)
    reps: List[Fraction] = []
    for i, c in enumerate(points):
        reps.append(Fraction(c))
        nxt = points[i + 1] if i + 1 < len(points) else seg.hi
        reps.append(Fraction(c + nxt, 2))
    return reps


def _windows(t: Fraction, a: int, b: int, hi_closed: bool) -> Tuple[Window, Window]:
    left = Window(t, t + b, hi_closed)
    right = Window(t + a, t + b, hi_closed)
    return left, right


def pfs(phi: Formula, index: int, interval: TimeInterval, ctx: "EvalContext", left_side: bool = False) -> list:
    """Profiles of phi for every placement class of the interval at segment `index`

    The default is the t ⊕ J window; left_side=True gives the [t, t + r_J⟩ window
    the left until operand is read over. A window that falls past the trace end
    yields {0}, so no profile is ever empty.

    Raises:
        ProfileError: the interval is unbounded at the untimed origin
    """
    if interval.untimed:
        raise ProfileError("pfs needs a bounded interval; untimed operators use the untimed rule")
    a, b, hi_closed = bounded_ticks(interval, ctx)
    backend = ctx.backend
    d = ctx.ds.duration
    result = []
    for t in placements(ctx.segments[index], a, b, ctx.endpoints):
        w_left, w_right = _windows(t, a, b, hi_closed)
        window = (w_left if left_side else w_right).trimmed(d)
        if window.empty:
            # placed past the trace end: nothing there can witness phi
            result.append(backend.const(0))
            continue
        value = profile(phi, anchor_of(window, ctx.segments), window, ctx)
        result.append(backend.drop_eps(value))
    return result


def eval_timed_until(phi1: Formula, phi2: Formula, interval: TimeInterval, index: int, ctx: "EvalContext"):
    """Concatenate u U⁰ v over each class's left ⊗ right profiles

    Raises:
        ProfileError: the two profile lists disagree in length
    """
    backend = ctx.backend
    a, _, _ = bounded_ticks(interval, ctx)
    gap = a > 0 or not interval.lo_closed
    lefts = pfs(phi1, index, interval, ctx, left_side=True)
    rights = pfs(phi2, index, interval, ctx)
    if len(lefts) != len(rights):
        raise ProfileError(f"placement classes misaligned: {len(lefts)} vs {len(rights)}")

    zero = backend.const(0)
    pieces = []
    for p, q in zip(lefts, rights):
        if gap:
            q = backend.concat(zero, q)
        pieces.append(backend.until(p, q, 0))
    logger.debug(f"timed until over {len(pieces)} placement classes at segment {index}")
    return backend.drop_eps(_concat_all(ctx, pieces))
