import logging

from termcolor import colored

from .config import DEFAULT_LOG_LEVEL

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"


# === Configure logging with color support ===
class ColorFormatter(logging.Formatter):
    def format(self, record):
        message = super().format(record)
        if record.levelno == logging.DEBUG:
            return colored(message, 'blue')
        elif record.levelno == logging.INFO:
            return colored(message, 'green')
        elif record.levelno == logging.WARNING:
            return colored(message, 'yellow')
        elif record.levelno == logging.ERROR:
            return colored(message, 'red')
        elif record.levelno == logging.CRITICAL:
            return colored(message, 'magenta')
        return message


_root = logging.getLogger("novikov_numbers")
_root.setLevel(DEFAULT_LOG_LEVEL)
if not _root.handlers:
    _handler = logging.StreamHandler()
    _handler.setFormatter(ColorFormatter(LOG_FORMAT))
    _root.addHandler(_handler)
_root.propagate = False


def get_logger(name: str) -> logging.Logger:
    """Child of the package logger; the colored stderr handler lives on the parent."""
    if not name.startswith("novikov_numbers"):
        name = f"novikov_numbers.{name}"
    return logging.getLogger(name)


def set_level(level: str) -> None:
    _root.setLevel(level.upper())
