"""
Logging setup: loguru routed through a rich console handler
"""

from pathlib import Path
from typing import Optional

from loguru import logger
from rich.logging import RichHandler


def configure_logging(level: Optional[str] = None, log_file: Optional[str] = None) -> None:
    """
    Route loguru through rich, plus an optional file sink

    Args:
        level: Console level (defaults to settings.log_level)
        log_file: Optional rotating file sink (defaults to settings.log_file)
    """
    from config.settings import settings

    level = (level or settings.log_level).upper()
    log_file = log_file if log_file is not None else settings.log_file

    logger.remove()
    logger.add(
        RichHandler(markup=False, show_path=False, rich_tracebacks=True),
        level=level,
        format="{message}",
    )
    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        logger.add(log_file, level="DEBUG", rotation="10 MB", retention=5)

    logger.debug(f"Logging configured at {level}")

