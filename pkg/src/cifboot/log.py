"""Logging setup using rich."""

import logging

from rich.console import Console
from rich.logging import RichHandler

_ROOT = "cifboot"


def get_logger(name: str) -> logging.Logger:
    """Return a logger under the cifboot namespace.

    Args:
        name: Module name, usually ``__name__``

    Returns:
        Logger instance
    """
    if name == _ROOT or name.startswith(f"{_ROOT}."):
        return logging.getLogger(name)
    return logging.getLogger(f"{_ROOT}.{name}")


def configure_logging(verbose: bool = False) -> None:
    """Attach a RichHandler writing to stderr to the cifboot logger.

    Safe to call more than once; the handler is only added the first time.

    Args:
        verbose: Log DEBUG messages instead of WARNING and above
    """
    logger = logging.getLogger(_ROOT)
    logger.setLevel(logging.DEBUG if verbose else logging.WARNING)

    if not any(isinstance(h, RichHandler) for h in logger.handlers):
        handler = RichHandler(
            console=Console(stderr=True),
            show_time=False,
            show_path=verbose,
            rich_tracebacks=verbose,
        )
        handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))
        logger.addHandler(handler)
    logger.propagate = False
