import copy
import logging.config

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "standard": {"format": "%(asctime)s %(levelname)s [%(module)s] %(name)s: %(message)s"},
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "standard",
            "level": "DEBUG",
            "stream": "ext://sys.stderr",
        },
    },
    "loggers": {
        "sandwich_sde": {"level": "INFO", "propagate": True},
    },
    "root": {
        "handlers": ["console"],
        "level": "WARNING",
    },
}


def configure_logging(level: str = "INFO") -> None:
    """Install the console handler; ``level`` applies to the sandwich_sde loggers."""
    config = copy.deepcopy(LOGGING)
    config["loggers"]["sandwich_sde"]["level"] = level.upper()
    logging.config.dictConfig(config)
