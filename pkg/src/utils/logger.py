import logging
import os
import sys

def setup_logger(name: str, level: str = None, stream=None):
    logger = logging.getLogger(name)
    level = (level or os.getenv("SIGMALAB_LOG_LEVEL", "INFO")).upper()
    logger.setLevel(level)

    # Console handler (stderr when the report stream owns stdout)
    handler = logging.StreamHandler(stream or sys.stdout)
    handler.setLevel(level)
    formatter = logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s')
    handler.setFormatter(formatter)

    if not logger.handlers:
        logger.addHandler(handler)

    return logger


def redirect_to_stderr(logger: logging.Logger):
    """Point every stream handler of `logger` at stderr (used with --json)."""
    for handler in logger.handlers:
        if isinstance(handler, logging.StreamHandler):
            handler.setStream(sys.stderr)

# Create a default logger
logger = setup_logger("SigmaLab")
