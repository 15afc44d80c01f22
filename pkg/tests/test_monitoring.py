"""Tests for run metrics, the choice ledger and logging setup."""

import logging

import pytest

from src.utils.ledger import ChoiceLedger, LedgerEntry
from src.utils.logger import set_level, setup_logger, share_handlers
from src.utils.monitoring import RunMetrics


class TestRunMetrics:
    """Test run metrics collection."""

    def test_record_performance(self):
        """Test durations are recorded and summarized."""
        metrics = RunMetrics()
        metrics.record_performance('norm', 0.5)
        metrics.record_performance('norm', 1.5)
        stats = metrics.get_performance_stats()
        assert stats['total_operations'] == 2
        assert stats['avg_duration'] == pytest.approx(1.0)
        assert stats['min_duration'] == 0.5
        assert stats['max_duration'] == 1.5

    def test_empty_stats(self):
        """Test statistics are empty before any record."""
        assert RunMetrics().get_performance_stats() == {}

    def test_timed_records_operation(self):
        """Test the timing context manager records one entry."""
        metrics = RunMetrics()
        with metrics.timed('ratio_sup'):
            pass
        history = metrics.get_history('ratio_sup')
        assert len(history) == 1
        assert history[0]['duration'] >= 0.0

    def test_timed_records_on_error(self):
        """Test a failing block is still timed."""
        metrics = RunMetrics()
        with pytest.raises(ValueError):
            with metrics.timed('failing'):
                raise ValueError("boom")
        assert len(metrics.get_history('failing')) == 1

    def test_history_size_limit(self):
        """Test the history is bounded."""
        metrics = RunMetrics(history_size=3)
        for i in range(5):
            metrics.record_performance('op', float(i))
        assert [entry['duration'] for entry in metrics.get_history()] == [2.0, 3.0, 4.0]

    def test_counters_and_summary(self):
        """Test counters appear in the summary."""
        metrics = RunMetrics()
        metrics.increment('trials', 3)
        metrics.increment('trials')
        metrics.record_error()
        summary = metrics.get_summary()
        assert summary['counters'] == {'trials': 4}
        assert summary['error_count'] == 1
        assert 'uptime' in summary


class TestChoiceLedger:
    """Test the ledger of numerical choices."""

    def test_record_and_serialize(self):
        """Test an entry is stored with its details."""
        ledger = ChoiceLedger()
        entry = ledger.record('rho-radius', "R = 2", 'moduli', radius=2.0)
        assert isinstance(entry, LedgerEntry)
        assert ledger.kinds() == ['rho-radius']
        assert ledger.to_list() == [
            {'kind': 'rho-radius', 'source': 'moduli', 'message': "R = 2", 'details': {'radius': 2.0}}
        ]

    def test_warning_level_logs_warning(self, mocker):
        """Test warning entries are logged as warnings."""
        warning = mocker.patch('src.utils.ledger.logger.warning')
        ChoiceLedger().record('flat-stretch', "flat density", 'young', level='warning')
        warning.assert_called_once()

    def test_unknown_level_falls_back_to_info(self):
        """Test an unknown level is stored as info."""
        entry = ChoiceLedger().record('x', "message", 'source', level='critical')
        assert entry.level == 'info'

    def test_extend_skips_duplicates(self):
        """Test merged ledgers do not repeat identical entries."""
        first = ChoiceLedger()
        first.record('near-zero-floor', "floor", 'sobolev_conjugate', cutoff=1.0)
        second = ChoiceLedger(first.entries)
        second.extend(first.entries)
        assert len(second) == 1

    def test_empty_ledger_is_falsy(self):
        """Test an empty ledger is falsy."""
        assert not ChoiceLedger()


class TestLogger:
    """Test logger setup."""

    def test_setup_is_idempotent(self, tmp_path):
        """Test a second setup does not add handlers."""
        logger = setup_logger('test_embedding_lab_idempotent', log_file=tmp_path / 'lab.log')
        count = len(logger.handlers)
        setup_logger('test_embedding_lab_idempotent', log_file=tmp_path / 'lab.log')
        assert len(logger.handlers) == count == 2

    def test_set_level_updates_handlers(self):
        """Test set_level applies to the logger and its handlers."""
        logger = setup_logger('test_embedding_lab_level')
        set_level(logger, 'DEBUG')
        assert logger.level == logging.DEBUG
        assert all(handler.level == logging.DEBUG for handler in logger.handlers)

    def test_share_handlers(self):
        """Test handlers are shared with another logger once."""
        source = setup_logger('test_embedding_lab_source')
        target = share_handlers(source, 'test_embedding_lab_target')
        share_handlers(source, 'test_embedding_lab_target')
        assert target.handlers == source.handlers
