"""Compositional evaluation of formulas over the canonical segmentation"""
import logging
from typing import Dict, Tuple

from core import engine_timed
from core.backends import make_backend
from core.engine_config import EngineConfig
from core.formula import (
    UNTIMED, Always, And, Atom, Eventually, Formula, Implies, Literal, Not, Or, Until,
)
from core.predicates import eval_predicate
from core.trace_model import DistributedSignal, apply_relative, canonical_endpoints, canonical_segmentation

logger = logging.getLogger(__name__)

_TRUE = Literal(True)


class EvalContext:
    """One evaluation of one trace: segmentation, backend and the memo table.

    Single-writer; do not share an instance across threads while evaluating.
    """

    def __init__(self, ds: DistributedSignal, cfg: EngineConfig):
        if cfg.relative_agent is not None and ds.reference != cfg.relative_agent:
            ds = apply_relative(ds, cfg.relative_agent)
        self.ds = ds
        self.cfg = cfg
        self.segments = canonical_segmentation(ds)
        self.endpoints = canonical_endpoints(ds)
        self.backend = make_backend(cfg.backend)
        self._memo: Dict[Tuple[Formula, int], object] = {}

    @property
    def memo_size(self) -> int:
        return len(self._memo)

    def eval(self, phi: Formula, index: int):
        """⟦phi⟧ on segment `index`, as a backend value"""
        key = (phi, index)
        if key not in self._memo:
            self._memo[key] = evaluate(phi, index, self)
        return self._memo[key]

    def eval_explicit(self, phi: Formula, index: int):
        return self.backend.lower(self.eval(phi, index))


def evaluate(phi: Formula, index: int, ctx: EvalContext):
    backend = ctx.backend
    if isinstance(phi, Literal):
        return backend.const(int(phi.value))
    if isinstance(phi, Atom):
        return backend.lift(eval_predicate(phi.predicate, ctx.segments[index], ctx.ds, ctx.cfg, ctx.segments))
    if isinstance(phi, Not):
        return backend.neg(ctx.eval(phi.arg, index))
    if isinstance(phi, And):
        return backend.combine("and", ctx.eval(phi.left, index), ctx.eval(phi.right, index))
    if isinstance(phi, Or):
        return backend.combine("or", ctx.eval(phi.left, index), ctx.eval(phi.right, index))
    if isinstance(phi, Implies):
        return backend.combine("implies", ctx.eval(phi.left, index), ctx.eval(phi.right, index))
    if isinstance(phi, Eventually):
        return ctx.eval(Until(_TRUE, phi.arg, phi.interval), index)
    if isinstance(phi, Always):
        return backend.neg(ctx.eval(Until(_TRUE, Not(phi.arg), phi.interval), index))
    if isinstance(phi, Until):
        if phi.interval == UNTIMED:
            return eval_untimed_until(phi, index, ctx)
        if engine_timed.covers_domain(phi.interval, ctx):
            return eval_untimed_until(Until(phi.left, phi.right), index, ctx)
        return engine_timed.eval_timed_until(phi.left, phi.right, phi.interval, index, ctx)
    raise TypeError(f"not a formula: {phi!r}")


def eval_untimed_until(phi: Until, index: int, ctx: EvalContext):
    """Right-to-left over segments so each one sees its successor's first letters"""
    backend = ctx.backend
    last = len(ctx.segments) - 1
    for k in range(last, index - 1, -1):
        key = (phi, k)
        if key in ctx._memo:
            continue
        left, right = ctx.eval(phi.left, k), ctx.eval(phi.right, k)
        firsts = frozenset({0}) if k == last else backend.first(ctx._memo[(phi, k + 1)])
        value = None
        for a in sorted(firsts):
            part = backend.until(left, right, a)
            value = part if value is None else backend.union(value, part)
        ctx._memo[key] = value
    return ctx._memo[(phi, index)]


def eval_untimed(phi: Formula, index: int, ctx: EvalContext):
    """Explicit set of value expressions of phi on segment `index`"""
    return ctx.eval_explicit(phi, index)
