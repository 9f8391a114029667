"""Centralized memo cache for γ value-expression sets"""
import logging
import threading
from collections import OrderedDict
from typing import Callable, Dict, Hashable

logger = logging.getLogger(__name__)


class CacheManager:
    """Thread-safe singleton memo for γ(signal, segment) lookups.

    Keys carry the signal itself, the ε actually applied to it (0 for the
    reference agent), the duration, the segment bounds and the endpoint set F,
    so traces sharing a signal but not a segmentation never collide.

    Eviction is least-recently-used once `max_entries` is reached.
    """

    _instance = None
    _lock = threading.Lock()
    DEFAULT_MAX_ENTRIES = 50000

    def __new__(cls):
        if cls._instance is None:
            with cls._lock:
                if cls._instance is None:
                    cls._instance = super().__new__(cls)
                    cls._instance._initialized = False
        return cls._instance

    def __init__(self):
        if self._initialized:
            return
        self._gamma: "OrderedDict[Hashable, frozenset]" = OrderedDict()
        self._cache_lock = threading.Lock()
        self.max_entries = self.DEFAULT_MAX_ENTRIES
        self.hits = 0
        self.misses = 0
        self._initialized = True

    # ── configuration ────────────────────────────────────────────────────────

    def configure(self, max_entries: int) -> None:
        with self._cache_lock:
            self.max_entries = max(1, int(max_entries))
            self._evict()
        logger.debug(f"🔧 γ cache capacity set to {self.max_entries}")

    def clear(self) -> None:
        with self._cache_lock:
            self._gamma.clear()
            self.hits = 0
            self.misses = 0

    # ── γ API ────────────────────────────────────────────────────────────────

    def gamma(self, key: Hashable, compute: Callable[[], frozenset]) -> frozenset:
        """Return the cached set for key, computing it outside the lock on a miss"""
        with self._cache_lock:
            if key in self._gamma:
                self._gamma.move_to_end(key)
                self.hits += 1
                return self._gamma[key]
            self.misses += 1

        value = compute()
        with self._cache_lock:
            self._gamma[key] = value
            self._evict()
        return value

    def stats(self) -> Dict[str, int]:
        with self._cache_lock:
            return {"entries": len(self._gamma), "hits": self.hits, "misses": self.misses}

    def _evict(self) -> None:
        while len(self._gamma) > self.max_entries:
            self._gamma.popitem(last=False)


_cache_manager = CacheManager()


def get_cache() -> CacheManager:
    return _cache_manager
