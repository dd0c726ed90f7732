import logging
import logging.config

from typing import List, Any
import structlog
from structlog.contextvars import merge_contextvars

from tno.p5_coloring.settings import EnvSettings

timestamper = structlog.processors.TimeStamper(fmt="iso")
shared_processors: List[Any] = [
    structlog.stdlib.add_logger_name,
    structlog.stdlib.add_log_level,
    structlog.stdlib.PositionalArgumentsFormatter(),
    timestamper,
    structlog.processors.StackInfoRenderer(),
    structlog.processors.format_exc_info,
    structlog.processors.UnicodeDecoder(),
]

handlers = {
    "default": {
        "level": "DEBUG",
        "class": "logging.StreamHandler",
        # stdout is reserved for the JSON report of the CLI
        "stream": "ext://sys.stderr",
        "formatter": "colored" if EnvSettings.env() == "dev" else "json",
    },
}
if EnvSettings.log_file():
    handlers["file"] = {
        "level": "DEBUG",
        "class": "logging.handlers.WatchedFileHandler",
        "filename": EnvSettings.log_file(),
        "formatter": "json",
    }

logging.config.dictConfig(
    {
        "version": 1,
        "disable_existing_loggers": True,
        "formatters": {
            "colored": {
                "()": structlog.stdlib.ProcessorFormatter,
                "processor": structlog.dev.ConsoleRenderer(colors=True),
                "foreign_pre_chain": shared_processors,
            },
            "json": {
                "()": structlog.stdlib.ProcessorFormatter,
                "processor": structlog.processors.JSONRenderer(sort_keys=True),
                "foreign_pre_chain": shared_processors,
            },
        },
        "handlers": handlers,
        "loggers": {
            "": {"handlers": ["default"], "level": "WARNING"},
            "tno": {
                "handlers": list(handlers.keys()),
                "level": EnvSettings.log_level(),
                "propagate": False,
            },
        },
    }
)


structlog.configure(
    processors=[merge_contextvars]
    + shared_processors
    + [structlog.stdlib.ProcessorFormatter.wrap_for_formatter],
    logger_factory=structlog.stdlib.LoggerFactory(),
    cache_logger_on_first_use=True,
)


def get_logger(name):
    return structlog.get_logger(name)


def set_level(level: str):
    """Change the level of the `tno` loggers at runtime, e.g. from CLI verbosity flags."""
    logging.getLogger("tno").setLevel(level.upper())
