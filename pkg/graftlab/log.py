"""Timestamped logging for runs: every line starts with the wall-clock time
in the form ``16 Oct 2026, 14:02:11`` and may also be appended to a log file."""

import datetime
import logging

TIMESTAMP_FORMAT = "%d %b %Y, %H:%M:%S"

def write_to_log(line, log=None):
    """Stamps a line with the current time, appends it to the file at ``log``
    if one is given, and returns the stamped line."""

    line = datetime.datetime.now().strftime(TIMESTAMP_FORMAT) + ": " + line
    if log is not None:
        with open(log, "a") as f:
            f.write(line + "\n")
    return line


def configure_logging(log=None, level=logging.WARNING):
    """Attaches handlers to the ``graftlab`` logger. Messages go to stderr and,
    when ``log`` is a path, are also appended to that file."""

    logger = logging.getLogger("graftlab")
    logger.setLevel(level)
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()
    formatter = logging.Formatter("%(asctime)s: %(name)s: %(message)s", datefmt=TIMESTAMP_FORMAT)
    handlers = [logging.StreamHandler()]
    if log is not None:
        handlers.append(logging.FileHandler(log, mode="a"))
    for handler in handlers:
        handler.setFormatter(formatter)
        logger.addHandler(handler)
    logger.propagate = False
    return logger
