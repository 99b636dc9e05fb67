"""Loguru sinks for the pipeline, with Hydra and OmegaConf logging routed through them."""

from __future__ import annotations

import logging
import sys
from typing import TYPE_CHECKING, TextIO

from loguru import logger

from back_and_forth.src.path_wizard import normalize_file_path

if TYPE_CHECKING:
    import pathlib
    from collections.abc import Iterable

CONSOLE_FORMAT = (
    "<green>{time:YYYY-MM-DD HH:mm:ss}</green> | "
    "<level>{level: <8}</level> | "
    "<magenta>{extra[stage]}</magenta> | "
    "<cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> | "
    "<level>{message}</level>"
)
FILE_FORMAT = (
    "{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {extra[stage]} | {name}:{line} | {message}"
)

# Standard-library loggers of the config stack
DEFAULT_INTERCEPTED = ("hydra", "omegaconf")
_QUIET = ("hydra.core.utils", "hydra._internal")

_LOGGING_CONFIGURED = False


class InterceptHandler(logging.Handler):
    """Forward standard ``logging`` records to loguru, keeping the original caller."""

    def emit(self, record: logging.LogRecord) -> None:
        level: str | int
        try:
            level = logger.level(record.levelname).name
        except ValueError:
            level = record.levelno

        frame, depth = sys._getframe(1), 1  # noqa: SLF001
        while frame.f_back is not None and frame.f_code.co_filename == logging.__file__:
            frame = frame.f_back
            depth += 1

        logger.opt(depth=depth, exception=record.exc_info).log(level, record.getMessage())


def _intercept(names: Iterable[str]) -> list[str]:
    """Attach an :class:`InterceptHandler` to each named logger; returns the names."""
    logging.basicConfig(handlers=[InterceptHandler()], level=0, force=True)
    intercepted = []
    for name in names:
        standard_logger = logging.getLogger(name)
        standard_logger.handlers = [InterceptHandler()]
        standard_logger.propagate = False
        intercepted.append(name)
    return intercepted


def logging_setup(
    log_file: str | pathlib.Path | None = None,
    log_level: str = "INFO",
    sink: TextIO | None = None,
    intercept_standard_logging: bool = True,
    intercept_loggers: list[str] | None = None,
    stage: str = "-",
) -> None:
    """Configure the console sink and an optional log file, once per process.

    Calls after the first are no-ops until :func:`reset_logging`.

    Args:
        log_file: Log file path; parent directories are created.
        log_level: Minimum level for both sinks.
        sink: Console stream. Defaults to stderr so stdout stays free for
            command summaries.
        intercept_standard_logging: Route standard ``logging`` through loguru.
        intercept_loggers: Logger names to intercept. None means hydra and
            omegaconf; an empty list intercepts every existing logger.
        stage: Pipeline stage shown on every line, usually the subcommand name.

    Example:
        >>> logging_setup("logs/translate.log", log_level="DEBUG", stage="translate")
    """
    global _LOGGING_CONFIGURED  # noqa: PLW0603
    if _LOGGING_CONFIGURED:
        return

    log_file_path = normalize_file_path(log_file) if log_file is not None else None

    logger.remove()
    logger.configure(extra={"stage": stage})
    logger.add(sink if sink is not None else sys.stderr, level=log_level, format=CONSOLE_FORMAT)
    if log_file_path is not None:
        logger.add(
            log_file_path,
            level=log_level,
            format=FILE_FORMAT,
            rotation="50 MB",
            retention="10 days",
            encoding="utf-8",
        )

    if intercept_standard_logging:
        if intercept_loggers is None:
            names: Iterable[str] = DEFAULT_INTERCEPTED
        elif intercept_loggers:
            names = intercept_loggers
        else:
            names = list(logging.root.manager.loggerDict)
        intercepted = _intercept(names)
        logger.debug(f"Intercepting {len(intercepted)} standard loggers")

    for name in _QUIET:
        logging.getLogger(name).setLevel(logging.WARNING)

    _LOGGING_CONFIGURED = True
    if log_file_path is not None:
        logger.debug(f"Logging to {log_file_path}")


def reset_logging() -> None:
    """Drop every sink so the next :func:`logging_setup` call configures again."""
    global _LOGGING_CONFIGURED  # noqa: PLW0603
    _LOGGING_CONFIGURED = False
    logger.remove()
