import logging
import os

from lpvec.config import PROD_LOGS

PLAIN_FORMAT = "%(asctime)s - %(levelname)s - %(name)s - %(message)s"

_LEVELS = {-1: logging.WARNING, 0: logging.INFO, 1: logging.DEBUG}

_NOISY_LOGGERS = ("numpy", "scipy", "psutil")


def _plain_handler() -> logging.Handler:
    handler = logging.StreamHandler()
    handler.setFormatter(logging.Formatter(PLAIN_FORMAT))
    return handler


def setup_logging(verbosity: int = 0) -> logging.Logger:
    """Configure the root logger for CLI use; logs always go to stderr."""
    logger = logging.getLogger("")
    for existing in list(logger.handlers):
        if getattr(existing, "_lpvec", False):
            logger.removeHandler(existing)

    handler: logging.Handler
    if PROD_LOGS or os.getenv("LPVEC_PROD"):
        handler = _plain_handler()
    else:
        try:
            from rich.console import Console
            from rich.logging import RichHandler

            handler = RichHandler(
                console=Console(stderr=True), rich_tracebacks=True, show_path=False
            )
        except Exception:
            handler = _plain_handler()

    setattr(handler, "_lpvec", True)
    logger.addHandler(handler)
    logger.setLevel(_LEVELS[max(-1, min(1, verbosity))])
    for name in _NOISY_LOGGERS:
        logging.getLogger(name).setLevel(logging.WARNING)
    return logger
