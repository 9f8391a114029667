"""Base exception for the monitor"""


class MonitorError(Exception):
    """Root of every error raised by the monitoring library.

    Modules declare their own subclasses next to the code that raises them;
    the CLI catches this base to turn failures into exit status 3.
    """
    pass
