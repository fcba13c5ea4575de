# test_logging_validation.py
import logging
import os

from axioms import realize_axiom
from error_handler import ErrorHandler, ErrorSeverity, ErrorType, fail
from hfset import EMPTY, hf
from set_codec import build_code, merge_codes


def _file_logger(name, path):
    logger = logging.getLogger(name)
    logger.setLevel(logging.DEBUG)
    for handler in logger.handlers[:]:
        handler.close()
        logger.removeHandler(handler)
    handler = logging.FileHandler(path)
    handler.setFormatter(logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s'))
    logger.addHandler(handler)
    return logger, handler


def _close(logger, handler):
    handler.flush()
    handler.close()
    logger.removeHandler(handler)


def test_log_file_creation_and_content(temp_dir):
    log_file = os.path.join(temp_dir, 'realizability_test.log')
    test_logger, handler = _file_logger('RealizabilityTest', log_file)
    try:
        error_handler = ErrorHandler(log_file)
        error_handler.logger = test_logger
        for error in (fail(ErrorType.STUCK_TERM, "Test error 1", ErrorSeverity.HIGH),
                      fail(ErrorType.OUT_OF_FUEL, "Test error 2"),
                      fail(ErrorType.MALFORMED_CODE, "Critical test error", ErrorSeverity.CRITICAL)):
            error_handler.handle_error(error)
    finally:
        _close(test_logger, handler)

    with open(log_file, 'r') as f:
        log_content = f.read()
    assert "Test error 1" in log_content
    assert "Test error 2" in log_content
    assert "CRITICAL ERROR" in log_content
    assert "stuck_term" in log_content
    assert "out_of_fuel" in log_content


def test_module_loggers_reach_the_log(temp_dir):
    log_file = os.path.join(temp_dir, 'modules.log')
    axioms_logger, axioms_handler = _file_logger('axioms', log_file)
    codec_logger, codec_handler = _file_logger('set_codec', log_file)
    try:
        realize_axiom('pairing')
        merge_codes([build_code(EMPTY), build_code(hf(EMPTY))])
    finally:
        for logger, handler in ((axioms_logger, axioms_handler), (codec_logger, codec_handler)):
            _close(logger, handler)
            logger.setLevel(logging.NOTSET)

    with open(log_file, 'r') as f:
        log_content = f.read()
    assert "axioms - INFO - realising axiom pairing" in log_content
    assert "set_codec - DEBUG - merged 2 codes" in log_content


def test_error_statistics_collection():
    error_handler = ErrorHandler()
    for error in (fail(ErrorType.PARSE_ERROR, "parse 1"), fail(ErrorType.PARSE_ERROR, "parse 2"),
                  fail(ErrorType.UNKNOWN_RULE, "rule", ErrorSeverity.HIGH),
                  fail(ErrorType.CONFIGURATION, "config", ErrorSeverity.LOW)):
        error_handler.handle_error(error)

    stats = error_handler.get_error_statistics()
    assert stats['total_errors'] == 4
    assert stats['error_breakdown']['parse_error'] == 2
    assert stats['error_breakdown']['unknown_rule'] == 1
    assert stats['error_breakdown']['configuration'] == 1


def test_log_handler_cleanup(temp_dir):
    path = os.path.join(temp_dir, 'cleanup.log')
    test_logger, handler = _file_logger('CleanupTestLogger', path)
    test_logger.info("Test message")
    _close(test_logger, handler)

    os.unlink(path)
    assert not os.path.exists(path)
    assert handler not in test_logger.handlers
