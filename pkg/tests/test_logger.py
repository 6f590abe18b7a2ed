"""Tests for logger setup."""
import logging
import sys
from unittest.mock import patch

from forbidden_subposet.core.logger import log_effective_config, setup_logging


def _patched_logs_dir(mock_dir):
    mock_dir.mkdir = lambda **kwargs: None
    mock_dir.__truediv__ = lambda self, x: mock_dir
    mock_dir.parent = mock_dir


def _console_handlers(logger):
    return [h for h in logger.handlers if type(h) is logging.StreamHandler]


class TestSetupLogging:
    def test_returns_logger(self, tmp_path):
        with patch("forbidden_subposet.core.logger.LOGS_DIR", tmp_path / "logs"):
            logger = setup_logging(verbose=False)

        assert isinstance(logger, logging.Logger)
        assert logger.name == "forbidden_subposet"
        assert list((tmp_path / "logs").glob("*.log"))

    def test_verbose_sets_debug_level(self):
        with patch("forbidden_subposet.core.logger.LOGS_DIR") as mock_dir:
            _patched_logs_dir(mock_dir)
            logger = setup_logging(verbose=True)

        assert any(h.level == logging.DEBUG for h in _console_handlers(logger))

    def test_quiet_raises_threshold(self):
        with patch("forbidden_subposet.core.logger.LOGS_DIR") as mock_dir:
            _patched_logs_dir(mock_dir)
            logger = setup_logging(verbose=True, quiet=True)

        assert [h.level for h in _console_handlers(logger)] == [logging.WARNING]

    def test_console_goes_to_stderr(self):
        with patch("forbidden_subposet.core.logger.LOGS_DIR") as mock_dir:
            _patched_logs_dir(mock_dir)
            logger = setup_logging()

        assert all(h.stream is sys.stderr for h in _console_handlers(logger))

    def test_repeated_setup_does_not_stack_handlers(self, tmp_path):
        with patch("forbidden_subposet.core.logger.LOGS_DIR", tmp_path):
            setup_logging()
            logger = setup_logging()

        assert len(logger.handlers) == 2


class TestLogEffectiveConfig:
    def test_one_line_per_key(self, caplog):
        logger = logging.getLogger("forbidden_subposet.test")
        with caplog.at_level(logging.DEBUG, logger="forbidden_subposet.test"):
            log_effective_config(logger, "verify density", {"seed": 7, "band": None})

        messages = [record.getMessage() for record in caplog.records]
        assert messages == ["verify density: effective configuration", "  band = None", "  seed = 7"]
