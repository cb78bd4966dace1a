"""
Logging Configuration for RZF-SKETCH

Centralized logging configuration and setup.
"""

import functools
import logging
import logging.handlers
import sys
import time
from pathlib import Path
from typing import Optional, Union

import colorlog
import orjson

RUN_LOGGER_NAME = "rzf.runs"


class RunJSONFormatter(logging.Formatter):
    """JSON-lines formatter for experiment run records."""

    def format(self, record: logging.LogRecord) -> str:
        payload = getattr(record, "run", {})

        base = {
            "timestamp": self.formatTime(record, self.datefmt),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
        }

        if isinstance(payload, dict):
            base.update(payload)

        return orjson.dumps(base, default=str).decode("utf-8")


def setup_logging(
    log_level: str = "INFO",
    log_dir: Optional[Union[str, Path]] = None,
    console: bool = False,
) -> None:
    """
    Setup logging configuration for the application.

    Args:
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_dir: Directory for log files (default: ./logs)
        console: Also log to stderr through a colored console handler
    """
    try:
        base_dir = Path(__file__).parent.parent.parent
        log_path = base_dir / "logs" if log_dir is None else Path(log_dir)
        runs_dir = log_path / "runs"

        log_path.mkdir(parents=True, exist_ok=True)
        runs_dir.mkdir(parents=True, exist_ok=True)

        root_logger = logging.getLogger()
        root_logger.setLevel(getattr(logging, log_level.upper()))
        for handler in list(root_logger.handlers):
            root_logger.removeHandler(handler)
            handler.close()
        run_logger = logging.getLogger(RUN_LOGGER_NAME)
        run_logger.setLevel(logging.INFO)
        for handler in list(run_logger.handlers):
            run_logger.removeHandler(handler)
            handler.close()

        detailed_formatter = logging.Formatter(
            "%(asctime)s - %(name)s - %(levelname)s - %(funcName)s:%(lineno)d - %(message)s"
        )

        if console:
            console_handler = colorlog.StreamHandler(sys.stderr)
            console_handler.setLevel(getattr(logging, log_level.upper()))
            console_handler.setFormatter(
                colorlog.ColoredFormatter(
                    "%(log_color)s%(levelname)-8s%(reset)s %(name)s: %(message)s"
                )
            )
            root_logger.addHandler(console_handler)

        for file_name, level in (
            ("rzf_app.log", logging.INFO),
            ("rzf_debug.log", logging.DEBUG),
            ("rzf_error.log", logging.ERROR),
        ):
            handler = logging.handlers.RotatingFileHandler(
                log_path / file_name, maxBytes=10 * 1024 * 1024, backupCount=5
            )
            handler.setLevel(level)
            handler.setFormatter(detailed_formatter)
            root_logger.addHandler(handler)

        run_handler = logging.handlers.TimedRotatingFileHandler(
            runs_dir / "rzf_runs.jsonl",
            when="midnight",
            backupCount=30,
            encoding="utf-8",
        )
        run_handler.setFormatter(RunJSONFormatter())
        run_handler.setLevel(logging.INFO)
        run_logger.addHandler(run_handler)
        run_logger.propagate = False

        logger = logging.getLogger(__name__)
        logger.info("Logging system initialized")
        logger.info("Log directory: %s", log_path)
        logger.info("Log level: %s", log_level)

    except OSError as e:
        print(f"File system error setting up logging: {e}", file=sys.stderr)
        logging.basicConfig(
            level=logging.INFO, format="%(asctime)s - %(levelname)s - %(message)s"
        )


def log_run_event(message: str, **fields) -> None:
    """
    Emit one structured record on the run logger.

    Args:
        message: Human readable event description
        **fields: Additional JSON fields (event, scenario, seed, ...)
    """
    logging.getLogger(RUN_LOGGER_NAME).info(message, extra={"run": fields})


def log_function_call(func):
    """
    Decorator to log function calls.

    Args:
        func: Function to decorate

    Returns:
        Decorated function
    """

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        logger = logging.getLogger(func.__module__)
        logger.debug("Calling %s with args=%s, kwargs=%s", func.__name__, args, kwargs)
        try:
            result = func(*args, **kwargs)
            logger.debug("%s completed successfully", func.__name__)
            return result
        except Exception as e:
            logger.error("%s failed with error: %s", func.__name__, e)
            raise

    return wrapper


def log_performance(func):
    """
    Decorator to log function performance.

    Args:
        func: Function to decorate

    Returns:
        Decorated function
    """

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        logger = logging.getLogger(func.__module__)
        start_time = time.perf_counter()
        try:
            result = func(*args, **kwargs)
            duration = time.perf_counter() - start_time
            logger.info("%s completed in %.3f seconds", func.__name__, duration)
            return result
        except Exception as e:
            duration = time.perf_counter() - start_time
            logger.error(
                "%s failed after %.3f seconds with error: %s",
                func.__name__,
                duration,
                e,
            )
            raise

    return wrapper
