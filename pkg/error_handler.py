# error_handler.py
import logging
import os
import time
from enum import Enum
from typing import Any, Callable, Dict, Optional


class ErrorSeverity(Enum):
    LOW = "low"           # Caller can continue, result is still meaningful
    MEDIUM = "medium"     # The current operation is abandoned
    HIGH = "high"         # Input or configuration is unusable
    CRITICAL = "critical" # Internal invariant broken


class ErrorType(Enum):
    BOUND_OVERFLOW = "bound_overflow"
    MALFORMED_CODE = "malformed_code"
    INDEX_OUT_OF_RANGE = "index_out_of_range"
    MISSING_TRANSITION = "missing_transition"
    OUT_OF_BUDGET = "out_of_budget"
    INVALID_CODE = "invalid_code"
    PRED_FAILURE = "pred_failure"
    LENGTH_MISMATCH = "length_mismatch"
    PARSE_ERROR = "parse_error"
    NOT_DELTA0 = "not_delta0"
    UNBOUND_VARIABLE = "unbound_variable"
    NOT_DECIDABLE = "not_decidable"
    OUT_OF_FUEL = "out_of_fuel"
    STUCK_TERM = "stuck_term"
    NOT_IN_FRAGMENT = "not_in_fragment"
    UNKNOWN_RULE = "unknown_rule"
    ARITY_MISMATCH = "arity_mismatch"
    BAR_NOT_COVERING = "bar_not_covering"
    UNKNOWN_AXIOM = "unknown_axiom"
    USAGE = "usage"
    CONFIGURATION = "configuration"
    FILE_SYSTEM = "file_system"


class RealizabilityError(Exception):
    def __init__(self, message: str, error_type: ErrorType,
                 severity: ErrorSeverity = ErrorSeverity.MEDIUM,
                 context: Dict[str, Any] = None):
        super().__init__(message)
        self.error_type = error_type
        self.severity = severity
        self.context = context or {}
        self.timestamp = time.time()


def fail(error_type: ErrorType, message: str, severity: ErrorSeverity = ErrorSeverity.MEDIUM,
         **context: Any) -> RealizabilityError:
    """Build an error; callers write ``raise fail(...)``."""
    return RealizabilityError(message, error_type, severity, context)


class ErrorHandler:
    def __init__(self, log_file: Optional[str] = None):
        self.error_history = []
        self.recovery_strategies: Dict[ErrorType, Callable[[RealizabilityError], Optional[Any]]] = {
            ErrorType.OUT_OF_FUEL: self._handle_out_of_fuel,
            ErrorType.FILE_SYSTEM: self._handle_file_system,
            ErrorType.CONFIGURATION: self._handle_configuration,
            ErrorType.PARSE_ERROR: self._handle_parse_error,
        }
        self.setup_logging(log_file)

    def setup_logging(self, log_file: Optional[str] = None):
        if log_file is None:
            from config import config
            log_file = config.LOG_FILE
        logging.basicConfig(
            level=logging.INFO,
            format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            handlers=[
                logging.FileHandler(log_file),
                logging.StreamHandler()
            ]
        )
        self.logger = logging.getLogger('Realizability')

    def handle_error(self, error: RealizabilityError) -> Optional[Any]:
        """Log the error and run the recovery strategy for its type, if any."""
        self.error_history.append(error)
        self.logger.error(f"Error occurred: {error.error_type.value} - {str(error)}")

        if error.severity == ErrorSeverity.CRITICAL:
            self.logger.critical(f"CRITICAL ERROR: {str(error)}")

        recovery_func = self.recovery_strategies.get(error.error_type)
        if recovery_func:
            return recovery_func(error)
        return None

    def _handle_out_of_fuel(self, error: RealizabilityError) -> Optional[Any]:
        """Retry with a doubled fuel budget."""
        retry = error.context.get('retry_function')
        fuel = error.context.get('fuel')
        if retry is None or fuel is None:
            return None
        from config import config
        max_retries = error.context.get('max_retries', config.MAX_FUEL_RETRIES)
        for attempt in range(max_retries):
            fuel *= 2
            self.logger.warning(f"Out of fuel, retrying with fuel={fuel} (attempt {attempt + 1})")
            try:
                return retry(fuel)
            except RealizabilityError as e:
                if e.error_type != ErrorType.OUT_OF_FUEL:
                    raise
        self.logger.warning("Fuel retries exhausted")
        return None

    def _handle_file_system(self, error: RealizabilityError) -> Optional[Any]:
        if 'missing_directory' in error.context:
            try:
                os.makedirs(error.context['missing_directory'], exist_ok=True)
                self.logger.info(f"Created missing directory: {error.context['missing_directory']}")
                return True
            except OSError as e:
                self.logger.error(f"Failed to create directory: {str(e)}")
        return None

    def _handle_configuration(self, error: RealizabilityError) -> Optional[Any]:
        if 'missing_config' in error.context:
            default = self._get_default_config(error.context['missing_config'])
            self.logger.info(f"Using default configuration for: {error.context['missing_config']}")
            return default
        return None

    def _handle_parse_error(self, error: RealizabilityError) -> Optional[Any]:
        # Nothing to recover; surface the location for the CLI diagnostic.
        if 'position' in error.context:
            return {'position': error.context['position'], 'text': error.context.get('text', '')}
        return None

    def _get_default_config(self, config_key: str) -> Any:
        defaults = {
            'fuel': 200000,
            'universe_rank': 2,
            'truth_universe_rank': 4,
            'ordinal_bound': 'w^w',
        }
        return defaults.get(config_key)

    def get_error_statistics(self) -> Dict[str, Any]:
        if not self.error_history:
            return {"total_errors": 0}

        error_counts = {}
        for error in self.error_history:
            error_type = error.error_type.value
            error_counts[error_type] = error_counts.get(error_type, 0) + 1

        return {
            "total_errors": len(self.error_history),
            "error_breakdown": error_counts,
            "recent_errors": len([e for e in self.error_history
                                  if time.time() - e.timestamp < 3600])
        }


# Global error handler instance
error_handler = ErrorHandler()
