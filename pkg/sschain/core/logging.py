import logging
import sys
from typing import Optional

import structlog

from sschain.core.config import settings


def setup_logging(level: Optional[str] = None):
    """Setup structured logging configuration"""

    level_name = (level or settings.LOG_LEVEL).upper()

    # Configure standard logging; stdout is reserved for command output
    logging.basicConfig(
        format="%(message)s",
        stream=sys.stderr,
        level=getattr(logging, level_name),
        force=True,
    )

    renderer = (
        structlog.processors.JSONRenderer()
        if settings.LOG_JSON
        else structlog.dev.ConsoleRenderer(colors=False)
    )

    # Configure structlog
    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.stdlib.PositionalArgumentsFormatter(),
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.processors.UnicodeDecoder(),
            renderer,
        ],
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )

    # numpy/scipy warnings go through the same stream
    logging.captureWarnings(True)

    logger = structlog.get_logger(__name__)
    logger.debug("Logging configured", level=level_name)

    return logger
