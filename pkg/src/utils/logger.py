"""Structured logging for pipeline stages, pretty or JSON, always on stderr"""
import json
import logging
import math
import sys
import time
from datetime import datetime, timezone
from fractions import Fraction
from functools import wraps
from typing import Any, Dict, Optional

import numpy as np

from src.config.settings import settings


def plain(value: Any) -> Any:
    """Extra-field value as a JSON-friendly Python object."""
    if isinstance(value, np.ndarray):
        return [plain(v) for v in value.tolist()]
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return value


def _short(value: Any) -> str:
    """Residuals print in scientific notation, everything else as is."""
    if isinstance(value, float) and value != 0 and math.isfinite(value) and not 1e-3 <= abs(value) < 1e4:
        return f"{value:.3e}"
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


class JSONFormatter(logging.Formatter):
    """One JSON object per record, extra fields merged at the top level"""

    def format(self, record: logging.LogRecord) -> str:
        data: Dict[str, Any] = {
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "module": record.module,
            "function": record.funcName,
        }
        data.update(plain(getattr(record, "extra_data", {})))
        if record.exc_info and record.exc_info[0]:
            data["exception"] = {"type": record.exc_info[0].__name__, "message": str(record.exc_info[1])}
        return json.dumps(data, ensure_ascii=False, default=str)


class PrettyFormatter(logging.Formatter):
    """`[12:00:00] INFO     orbits: Message | key=value ...` with level colors"""

    COLORS = {
        "DEBUG": "\033[36m",
        "INFO": "\033[32m",
        "WARNING": "\033[33m",
        "ERROR": "\033[31m",
    }
    RESET = "\033[0m"

    def format(self, record: logging.LogRecord) -> str:
        color = self.COLORS.get(record.levelname, "")
        stamp = datetime.now().strftime("%H:%M:%S")
        fields = plain(getattr(record, "extra_data", {}))
        extra = " | " + " ".join(f"{k}={_short(v)}" for k, v in fields.items()) if fields else ""
        return f"{color}[{stamp}] {record.levelname:8}{self.RESET} {record.name}: {record.getMessage()}{extra}"


class StructuredLogger:
    """Logger taking extra fields as keyword arguments.

    Logs go to stderr so that report output on stdout stays machine readable.
    """

    def __init__(self, name: str = "orbits", json_format: bool = False, level: int = logging.INFO):
        self.logger = logging.getLogger(name)
        self.logger.setLevel(level)
        self.logger.handlers = []
        self.logger.propagate = False

        handler = logging.StreamHandler(sys.stderr)
        handler.setLevel(level)
        handler.setFormatter(JSONFormatter() if json_format else PrettyFormatter())
        self.logger.addHandler(handler)

    def _log(self, level: int, message: str, **kwargs):
        self.logger.log(level, message, extra={"extra_data": kwargs} if kwargs else {})

    def debug(self, message: str, **kwargs):
        self._log(logging.DEBUG, message, **kwargs)

    def info(self, message: str, **kwargs):
        self._log(logging.INFO, message, **kwargs)

    def warning(self, message: str, **kwargs):
        self._log(logging.WARNING, message, **kwargs)

    def error(self, message: str, **kwargs):
        self._log(logging.ERROR, message, **kwargs)

    def set_level(self, level: int):
        self.logger.setLevel(level)
        for handler in self.logger.handlers:
            handler.setLevel(level)


def log_execution_time(logger: Optional[StructuredLogger] = None):
    """Decorator logging the wall time of a pipeline stage at DEBUG"""
    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            start = time.perf_counter()
            result = func(*args, **kwargs)
            log = logger or get_logger()
            log.debug(f"{func.__name__} completed", duration_ms=round((time.perf_counter() - start) * 1000, 2))
            return result
        return wrapper
    return decorator


_logger: Optional[StructuredLogger] = None


def get_logger(name: str = "orbits") -> StructuredLogger:
    """Shared logger configured from settings.log_format and settings.debug"""
    global _logger
    if _logger is None:
        json_format = settings.log_format.lower() == "json"
        level = logging.DEBUG if settings.debug else logging.INFO
        _logger = StructuredLogger(name=name, json_format=json_format, level=level)
    return _logger


logger = get_logger()
