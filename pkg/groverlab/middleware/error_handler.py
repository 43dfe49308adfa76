"""
Error handling middleware
Wraps every command handler and turns exceptions into exit codes
"""

import sys
from typing import Callable

import structlog

from groverlab.exceptions.custom_exceptions import EXIT_DOMAIN_ERROR, GroverLabException

logger = structlog.get_logger(__name__)


class ErrorHandler:
    """Global error handling for command dispatch"""

    def __init__(self, stderr=None):
        self.stderr = stderr

    def _report(self, message: str) -> None:
        print(f"error: {message}", file=self.stderr or sys.stderr)

    def dispatch(self, handler: Callable[..., int], *args, **kwargs) -> int:
        try:
            return handler(*args, **kwargs)
        except GroverLabException as exc:
            logger.error("command_failed", error=type(exc).__name__, message=exc.message, exit_code=exc.exit_code)
            self._report(exc.message)
            return exc.exit_code
        except OSError as exc:
            logger.error("io_error", message=str(exc))
            self._report(str(exc))
            return EXIT_DOMAIN_ERROR
        except Exception as exc:
            logger.error("unexpected_error", message=str(exc), exc_info=True)
            self._report(f"internal error: {exc}")
            return EXIT_DOMAIN_ERROR
