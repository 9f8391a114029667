"""Logging setup: one RichHandler on stderr"""
import logging

from rich.console import Console
from rich.logging import RichHandler

_configured = False


def setup_logging(level: str = "INFO") -> logging.Logger:
    """Install the handler once; later calls only change the level"""
    global _configured
    root = logging.getLogger()
    numeric = getattr(logging, str(level).upper(), logging.INFO)
    if not _configured:
        handler = RichHandler(console=Console(stderr=True), show_path=False,
                              rich_tracebacks=True, markup=False)
        handler.setFormatter(logging.Formatter("%(message)s", datefmt="[%X]"))
        root.addHandler(handler)
        _configured = True
    root.setLevel(numeric)
    return root
