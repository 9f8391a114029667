"""Three-valued verdicts: approximate monitor, relative mode and the combined procedure"""
import logging
from enum import Enum
from typing import Tuple

from core.engine_config import EngineConfig
from core.engine_untimed import EvalContext
from core.formula import Formula, UndeclaredSignalError, check_copyless, signals_of
from core.trace_model import DistributedSignal, apply_relative, ensure_valid

logger = logging.getLogger(__name__)


class Verdict(Enum):
    TRUE = "TRUE"
    FALSE = "FALSE"
    UNKNOWN = "UNKNOWN"

    @property
    def exit_code(self) -> int:
        return {"TRUE": 0, "FALSE": 1, "UNKNOWN": 2}[self.value]

    @property
    def conclusive(self) -> bool:
        return self is not Verdict.UNKNOWN

    def negated(self) -> "Verdict":
        if self is Verdict.TRUE:
            return Verdict.FALSE
        if self is Verdict.FALSE:
            return Verdict.TRUE
        return self


def verdict_of_firsts(firsts) -> Verdict:
    firsts = frozenset(int(b) for b in firsts)
    if firsts == {1}:
        return Verdict.TRUE
    if firsts == {0}:
        return Verdict.FALSE
    return Verdict.UNKNOWN


def monitor(ds: DistributedSignal, phi: Formula, cfg: EngineConfig = EngineConfig()) -> Verdict:
    """Approximate verdict from the first letters of phi's evaluation on the first segment

    Raises:
        TraceValidationError: ds breaks its invariants
        UndeclaredSignalError: phi names a signal ds lacks
    """
    ensure_valid(ds)
    missing = sorted(signals_of(phi) - set(ds.names))
    if missing:
        raise UndeclaredSignalError(f"undeclared signal(s): {', '.join(missing)}")
    check_copyless(phi)

    ctx = EvalContext(ds, cfg)
    value = ctx.eval(phi, 0)
    verdict = verdict_of_firsts(ctx.backend.first(value))
    logger.debug(f"{cfg.variant.value}/{cfg.backend.value}: {verdict.name} "
                 f"over {len(ctx.segments)} segments, {ctx.memo_size} memo entries")
    return verdict


def monitor_combined(ds: DistributedSignal, phi: Formula, cfg: EngineConfig = EngineConfig(),
                     **oracle_options) -> Tuple[Verdict, str]:
    """Approximate first; on UNKNOWN fall back to the exact oracle

    Returns:
        (verdict, engine_used) with engine_used "approximate" or "exact"

    Raises:
        OracleInfeasibleError: the fallback instance is too large to enumerate
    """
    from core.oracle import oracle_verdict

    verdict = monitor(ds, phi, cfg)
    if verdict.conclusive:
        return verdict, "approximate"
    target = apply_relative(ds, cfg.relative_agent) if cfg.relative_agent else ds
    logger.info(f"approximate verdict inconclusive; enumerating retimings of {ds.edge_count()} edges")
    return oracle_verdict(target, phi, **oracle_options), "exact"
