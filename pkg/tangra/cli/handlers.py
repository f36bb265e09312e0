"""Turn exceptions raised by CLI commands into exit codes."""
from functools import wraps
import logging
import sys

from tangra.cli import error_codes

logger = logging.getLogger(__name__)


def handle_cli_exceptions(f):
    """Wrap a command to process any Exception raised."""
    f.cli_exceptions_handled = True

    @wraps(f)
    def safe_func(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except Exception as e:
            return _report_error(e)
    return safe_func


def _report_error(e):
    """Print a fixed-format message for an error and return its exit code."""
    exit_code = error_codes.get_exit_code(e)
    logger.debug("Command failed with exit code %d", exit_code, exc_info=e)
    print(e.__class__.__name__ + ": " + str(e), file=sys.stderr)
    return exit_code
