import logging
from colorlog import ColoredFormatter
from constants import LOG_LEVEL


class Logger(logging.Logger):
    """
    Console logger with colored level names, one per module.

    Args:
        name (str): The name shown in the log prefix, usually the module.
        level (str): Override for the level read from GROUPOT_LOG_LEVEL.
    """

    def __init__(self, name: str = "groupot", level: str = LOG_LEVEL):
        super().__init__(name)
        self.setLevel(logging.getLevelName(level.upper()))
        self.addHandler(self._get_console_handler())

    @staticmethod
    def _get_console_handler() -> logging.Handler:
        formatter = ColoredFormatter(
            "%(log_color)s[%(process)s] %(threadName)s: %(levelname)-8s%(reset)s %(bg_blue)s[%(name)s]%(reset)s %(message)s",
            datefmt=None,
            reset=True,
            log_colors={
                "DEBUG": "cyan",
                "INFO": "green",
                "WARNING": "yellow",
                "ERROR": "red",
                "CRITICAL": "red",
            },
        )
        # stderr; stdout carries the reports
        console_handler = logging.StreamHandler()
        console_handler.setFormatter(formatter)
        return console_handler
