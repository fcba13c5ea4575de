# test_error_handling.py
import os
import shutil
import tempfile
import unittest.mock as mock

from error_handler import ErrorHandler, ErrorSeverity, ErrorType, RealizabilityError, fail
from main import with_fuel_retry


class TestErrorHandling:
    def setup_method(self):
        """Setup for each test method"""
        self.temp_dir = tempfile.mkdtemp()
        self.error_handler = ErrorHandler(os.path.join(self.temp_dir, 'errors.log'))

    def teardown_method(self):
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def test_error_creation_and_categorization(self):
        error = fail(ErrorType.STUCK_TERM, "fst of a non-pair", ErrorSeverity.HIGH, term='(fst 3)')

        assert isinstance(error, RealizabilityError)
        assert error.error_type == ErrorType.STUCK_TERM
        assert error.severity == ErrorSeverity.HIGH
        assert error.context == {'term': '(fst 3)'}
        assert error.timestamp > 0

    def test_out_of_fuel_retries_with_doubled_fuel(self):
        budgets = []

        def needs_a_lot(fuel):
            budgets.append(fuel)
            if fuel < 400:
                raise fail(ErrorType.OUT_OF_FUEL, "fuel exhausted", fuel=fuel)
            return 'done'

        error = fail(ErrorType.OUT_OF_FUEL, "fuel exhausted", retry_function=needs_a_lot, fuel=100,
                     max_retries=3)
        assert self.error_handler.handle_error(error) == 'done'
        assert budgets == [200, 400]

    def test_fuel_retries_give_up(self):
        def never(fuel):
            raise fail(ErrorType.OUT_OF_FUEL, "fuel exhausted", fuel=fuel)

        error = fail(ErrorType.OUT_OF_FUEL, "fuel exhausted", retry_function=never, fuel=10, max_retries=2)
        assert self.error_handler.handle_error(error) is None

    def test_with_fuel_retry(self):
        def run(fuel):
            if fuel is None or fuel < 50:
                raise fail(ErrorType.OUT_OF_FUEL, "fuel exhausted")
            return fuel

        assert with_fuel_retry(run, 30) == 60

    def test_other_errors_are_not_retried(self):
        def stuck(fuel):
            raise fail(ErrorType.STUCK_TERM, "stuck")

        try:
            with_fuel_retry(stuck, 10)
        except RealizabilityError as e:
            assert e.error_type == ErrorType.STUCK_TERM
        else:
            raise AssertionError("expected a stuck term")

    def test_file_system_error_recovery(self):
        missing_dir = os.path.join(self.temp_dir, "missing", "nested", "directory")
        error = fail(ErrorType.FILE_SYSTEM, "Directory not found", missing_directory=missing_dir)

        assert self.error_handler.handle_error(error) is True
        assert os.path.exists(missing_dir)

    def test_parse_error_reports_position(self):
        error = fail(ErrorType.PARSE_ERROR, "unexpected token", position=7, text='(mem x0)')
        assert self.error_handler.handle_error(error) == {'position': 7, 'text': '(mem x0)'}

    def test_configuration_default_fallback(self):
        error = fail(ErrorType.CONFIGURATION, "Missing configuration", missing_config='fuel')
        assert self.error_handler.handle_error(error) == 200000

    def test_errors_without_a_strategy(self):
        assert self.error_handler.handle_error(fail(ErrorType.BAR_NOT_COVERING, "gap")) is None

    def test_error_statistics_tracking(self):
        for error in (fail(ErrorType.OUT_OF_FUEL, "fuel 1"), fail(ErrorType.OUT_OF_FUEL, "fuel 2"),
                      fail(ErrorType.NOT_DELTA0, "unbounded", ErrorSeverity.HIGH)):
            self.error_handler.handle_error(error)

        stats = self.error_handler.get_error_statistics()
        assert stats['total_errors'] == 3
        assert stats['error_breakdown'] == {'out_of_fuel': 2, 'not_delta0': 1}
        assert stats['recent_errors'] == 3

    def test_critical_error_is_logged_as_critical(self):
        with mock.patch.object(self.error_handler, 'logger') as logger:
            self.error_handler.handle_error(fail(ErrorType.MALFORMED_CODE, "broken", ErrorSeverity.CRITICAL))
            logger.critical.assert_called_once()
