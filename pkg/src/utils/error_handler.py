"""
Error hierarchy and CLI error mapping
"""
import traceback
from functools import wraps

from src.utils.logger import get_logger

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2


class OrbitsError(Exception):
    """Base class for every error raised by the package"""


class ShapeMismatchError(OrbitsError):
    """Matrices or subspaces of incompatible shape"""


class ModeMixError(OrbitsError):
    """Exact and float scalars combined in one expression"""


class SubspaceError(OrbitsError):
    """Containment, directness or membership precondition violated"""


class DegenerateFormError(OrbitsError):
    """A bilinear form is degenerate where definiteness is required"""


class ChartDomainError(OrbitsError):
    """Point outside the chart domain"""


class PreimageError(OrbitsError):
    """Tangent vector has no unique preimage in the requested subspace"""


class ConformalFieldError(OrbitsError):
    """Conformal (non-isometric) element passed where a Killing field is required"""


class FixtureError(OrbitsError):
    """Unknown fixture or invalid fixture parameters"""


class ConfigError(OrbitsError):
    """Invalid run configuration"""


class TransportError(OrbitsError):
    """ODE integration failed or curve left the chart"""


class CertificateError(OrbitsError):
    """A supplied decomposition fails a required certificate"""


class PipelineError(OrbitsError):
    """Numerical failure inside the pipeline (singular matrix, overflow, ...)"""


def handle_errors(func):
    """Map package errors raised by a CLI verb to exit codes.

    The wrapped function returns an exit code; any OrbitsError becomes
    EXIT_INPUT_ERROR with a logged diagnostic.
    """
    @wraps(func)
    def wrapper(*args, **kwargs):
        log = get_logger()
        try:
            return func(*args, **kwargs)
        except OrbitsError as e:
            log.error(f"{func.__name__} failed", error_type=type(e).__name__, error=str(e))
            log.debug(traceback.format_exc())
            return EXIT_INPUT_ERROR
        except (ValueError, OSError) as e:
            log.error(f"{func.__name__} failed", error_type=type(e).__name__, error=str(e))
            return EXIT_INPUT_ERROR

    return wrapper
