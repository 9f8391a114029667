"""Configuration manager"""
import copy
import json
import logging
from pathlib import Path

logger = logging.getLogger(__name__)

DEFAULT_PATH = Path(__file__).resolve().parent.parent / "settings" / "config.json"

DEFAULTS = {
    "monitor": {
        "engine": "adm",
        "backend": "explicit",
        "tick": "1e-9",
        "assume_monotone": False,
    },
    "oracle": {"max_edges": 12, "max_traces": 1000000},
    "cache": {"max_entries": 50000},
    "bench": {
        "durations": [10, 20, 40],
        "epsilons": [1, 2, 4],
        "resolution": 1,
        "edges_per_signal": 3,
        "samples": 10,
        "seed": 42,
        "tick": "1",
        "max_traces": 20000,
        "formulas": {
            "phi1": "G (p & q)",
            "phi2": "G (p -> F q)",
            "phi3": "G (p -> F[0,1) q)",
            "phi4": "G (p | q)",
            "phi5": "p U q",
            "phi6": "G (p -> F[0,2) q)",
        },
    },
    "logging": {"level": "INFO"},
}


class Config:
    def __init__(self, path=DEFAULT_PATH):
        self.path = Path(path)
        self.data = self.load()

    def load(self):
        try:
            with open(self.path, 'r', encoding='utf-8') as f:
                return json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            logger.warning(f"⚠️ Settings unavailable ({self.path}: {e}); using built-in defaults")
            return copy.deepcopy(DEFAULTS)

    def save(self):
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, 'w', encoding='utf-8') as f:
            json.dump(self.data, f, indent=2)

    def get(self, *keys, default=None):
        """Nested lookup: file value, else the built-in default, else `default`"""
        for source in (self.data, DEFAULTS):
            value = source
            for key in keys:
                if not isinstance(value, dict) or key not in value:
                    value = None
                    break
                value = value[key]
            if value is not None:
                return value
        return default

    def set(self, *keys, value):
        d = self.data
        for key in keys[:-1]:
            d = d.setdefault(key, {})
        d[keys[-1]] = value
        self.save()
