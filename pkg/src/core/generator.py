"""Random distributed traces: uniform edge times on a grid, seeded Mersenne Twister"""
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple, Union

from core.errors import MonitorError
from core.trace_model import DistributedSignal, Signal, ensure_valid

logger = logging.getLogger(__name__)

BOOLEAN = "boolean"


class GeneratorError(MonitorError):
    """Raised when parameters cannot produce a valid trace"""
    pass


@dataclass(frozen=True)
class GenParams:
    """Generator parameters; duration, epsilon and resolution are in ticks.

    Edge times are drawn without replacement from the multiples of
    `resolution` strictly inside (0, duration). `alphabet` is either
    BOOLEAN or a tuple of at least two rational values.
    """
    n_signals: int = 2
    duration: int = 10
    epsilon: int = 1
    edges_per_signal: int = 2
    alphabet: Union[str, Tuple[Fraction, ...]] = BOOLEAN
    seed: Union[int, str] = 0
    resolution: int = 1
    names: Optional[Tuple[str, ...]] = None
    tick: Fraction = field(default=Fraction(1))

    def signal_names(self) -> List[str]:
        if self.names is not None:
            return list(self.names)
        return [f"x{i + 1}" for i in range(self.n_signals)]

    def slots(self) -> int:
        return max(0, (self.duration - 1) // self.resolution) if self.resolution > 0 else 0


def check_params(p: GenParams):
    """Raises GeneratorError on parameters no trace can satisfy"""
    if p.n_signals < 1:
        raise GeneratorError(f"need at least one signal, got {p.n_signals}")
    if p.duration <= 0:
        raise GeneratorError(f"duration must be positive, got {p.duration}")
    if p.epsilon <= 0:
        raise GeneratorError(f"epsilon must be positive, got {p.epsilon}")
    if p.edges_per_signal < 0:
        raise GeneratorError(f"edges_per_signal must be ≥ 0, got {p.edges_per_signal}")
    if p.resolution <= 0:
        raise GeneratorError(f"resolution must be positive, got {p.resolution}")
    if p.names is not None and len(p.names) != p.n_signals:
        raise GeneratorError(f"{len(p.names)} names for {p.n_signals} signals")
    if p.edges_per_signal > p.slots():
        raise GeneratorError(
            f"{p.edges_per_signal} edges per signal but only {p.slots()} grid positions in (0, {p.duration})")
    if p.alphabet != BOOLEAN:
        values = tuple(p.alphabet)
        if len(set(values)) < 2 and p.edges_per_signal > 0:
            raise GeneratorError("a non-Boolean alphabet needs at least two distinct values")


def _values(rng: random.Random, p: GenParams) -> List:
    if p.alphabet == BOOLEAN:
        first = rng.randrange(2)
        return [(first + k) % 2 for k in range(p.edges_per_signal + 1)]
    alphabet = sorted(set(Fraction(v) for v in p.alphabet))
    values = [rng.choice(alphabet)]
    for _ in range(p.edges_per_signal):
        values.append(rng.choice([v for v in alphabet if v != values[-1]]))
    return values


def generate(p: GenParams) -> DistributedSignal:
    """Deterministic in p.seed; the result always passes validate

    Raises:
        GeneratorError: infeasible parameters
    """
    check_params(p)
    rng = random.Random(p.seed)
    signals = []
    for name in p.signal_names():
        slots = sorted(rng.sample(range(1, p.slots() + 1), p.edges_per_signal))
        values = _values(rng, p)
        edges = tuple((k * p.resolution, v) for k, v in zip(slots, values[1:]))
        signals.append(Signal(name, values[0], edges))
    ds = DistributedSignal(tuple(signals), p.duration, p.epsilon, tick=Fraction(p.tick))
    logger.debug(f"generated {ds.edge_count()} edges over {len(signals)} signals (seed {p.seed})")
    return ensure_valid(ds)
