"""Diagnostics for coop2nf: one named logger writing to stderr, stdout stays for reports."""

import logging
import sys
from typing import Optional, TextIO

LOGGER_NAME = 'coop2nf'
BANNER_WIDTH = 60

_FORMAT = '[%(asctime)s] %(levelname)s: %(message)s'
_DEBUG_FORMAT = '[%(asctime)s] %(levelname)s %(module)s: %(message)s'


def setup_logger(level: Optional[str] = None, stream: Optional[TextIO] = None) -> logging.Logger:
    """
    (Re)configure the package logger.

    Replaces any previous handler so repeated CLI runs in one process do not
    duplicate lines. At DEBUG the emitting module is added to each record.

    Args:
        level: DEBUG, INFO, WARNING or ERROR. Defaults to WARNING.
        stream: Destination, stderr unless given.
    """
    level = (level or 'WARNING').upper()
    numeric = getattr(logging, level, logging.WARNING)

    log = logging.getLogger(LOGGER_NAME)
    log.setLevel(numeric)
    log.handlers.clear()
    log.propagate = False

    handler = logging.StreamHandler(stream if stream is not None else sys.stderr)
    handler.setFormatter(logging.Formatter(
        _DEBUG_FORMAT if numeric <= logging.DEBUG else _FORMAT,
        datefmt='%Y-%m-%d %H:%M:%S',
    ))
    log.addHandler(handler)
    return log


logger = setup_logger()


def _banner(title: str, rule: str) -> None:
    if not logger.isEnabledFor(logging.INFO):
        return
    logger.info(rule * BANNER_WIDTH)
    logger.info(title)
    logger.info(rule * BANNER_WIDTH)


def log_section(title: str) -> None:
    """Banner before a whole scan (verification, equilibria)."""
    _banner(title, '=')


def log_subsection(title: str) -> None:
    """Lighter banner for one step inside a section."""
    _banner(title, '-')
