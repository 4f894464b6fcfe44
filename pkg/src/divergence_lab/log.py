"""Logging setup: stdlib logging rendered through rich on stderr."""

import logging

from rich.console import Console
from rich.logging import RichHandler

_HANDLER_NAME = "divergence_lab.rich"


def setup_logging(level: str | int = "WARNING") -> logging.Logger:
    """Attach a RichHandler to the package logger.

    Calling it again only changes the level.

    Args:
        level: Level name or number.

    Returns:
        The ``divergence_lab`` logger.
    """
    logger = logging.getLogger("divergence_lab")
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
        if not isinstance(level, int):
            level = logging.WARNING
    logger.setLevel(level)

    if not any(h.get_name() == _HANDLER_NAME for h in logger.handlers):
        handler = RichHandler(
            console=Console(stderr=True),
            show_path=False,
            rich_tracebacks=False,
        )
        handler.set_name(_HANDLER_NAME)
        handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))
        logger.addHandler(handler)

    return logger
