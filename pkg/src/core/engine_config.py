"""Evaluation variant and backend selection"""
from dataclasses import dataclass
from enum import Enum
from typing import Optional


class Variant(Enum):
    ADM = "adm"
    ADM_F = "adm-f"
    ADM_C = "adm-c"


class BackendKind(Enum):
    EXPLICIT = "explicit"
    COMPACT = "compact"


@dataclass(frozen=True)
class EngineConfig:
    """How the approximate monitor evaluates a formula.

    `relative_agent` reads time from that agent's clock (combines with every
    variant); `assume_monotone` lets ADM_C accept predicates the syntactic
    check cannot flag.
    """
    variant: Variant = Variant.ADM
    relative_agent: Optional[str] = None
    backend: BackendKind = BackendKind.EXPLICIT
    assume_monotone: bool = False

    @classmethod
    def from_config(cls, config) -> "EngineConfig":
        """Build from a helpers.config.Config, ignoring unknown values"""
        engine = config.get("monitor", "engine", default="adm")
        backend = config.get("monitor", "backend", default="explicit")
        variant = Variant(engine) if engine in {v.value for v in Variant} else Variant.ADM
        kind = BackendKind(backend) if backend in {b.value for b in BackendKind} else BackendKind.EXPLICIT
        return cls(variant=variant, backend=kind,
                   assume_monotone=bool(config.get("monitor", "assume_monotone", default=False)))
