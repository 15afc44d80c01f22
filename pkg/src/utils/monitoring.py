"""Run metrics for embedding lab commands."""

import time
from collections import deque
from contextlib import contextmanager
from typing import Dict, Iterator, List, Optional

from src.utils.logger import get_logger

logger = get_logger(__name__)


class RunMetrics:
    """Collects operation timings and counters for one CLI run."""

    def __init__(self, history_size: int = 1000):
        """
        Initialize metrics collector.

        Args:
            history_size: Maximum number of timing entries to keep
        """
        self.history_size = history_size
        self.performance_metrics: deque = deque(maxlen=history_size)
        self.counters: Dict[str, int] = {}
        self.error_count: int = 0
        self.start_time = time.time()

    def record_performance(self, operation: str, duration: float) -> None:
        """
        Record the duration of one operation.

        Args:
            operation: Name of the operation
            duration: Duration in seconds
        """
        self.performance_metrics.append({
            'timestamp': time.time(),
            'operation': operation,
            'duration': duration
        })

    @contextmanager
    def timed(self, operation: str) -> Iterator[None]:
        """Time the enclosed block and record it under `operation`."""
        started = time.perf_counter()
        try:
            yield
        finally:
            duration = time.perf_counter() - started
            self.record_performance(operation, duration)
            logger.debug(f"{operation} took {duration:.3f}s")

    def increment(self, counter: str, amount: int = 1) -> None:
        """Increase a named counter (trials evaluated, fields sampled, ...)."""
        self.counters[counter] = self.counters.get(counter, 0) + amount

    def record_error(self) -> None:
        """Record an error occurrence."""
        self.error_count += 1

    def get_history(self, operation: Optional[str] = None) -> List[Dict]:
        """
        Get recorded timings.

        Args:
            operation: Restrict to this operation name

        Returns:
            List of timing entries, oldest first
        """
        history = list(self.performance_metrics)
        if operation is None:
            return history
        return [entry for entry in history if entry['operation'] == operation]

    def get_performance_stats(self) -> Dict[str, float]:
        """
        Get performance statistics.

        Returns:
            Dictionary with avg/min/max duration and the number of operations,
            empty when nothing was recorded
        """
        if not self.performance_metrics:
            return {}

        durations = [m['duration'] for m in self.performance_metrics]
        return {
            'avg_duration': sum(durations) / len(durations),
            'min_duration': min(durations),
            'max_duration': max(durations),
            'total_operations': len(self.performance_metrics)
        }

    def get_uptime(self) -> float:
        """Seconds since the collector was created."""
        return time.time() - self.start_time

    def get_summary(self) -> Dict:
        """
        Get summary of all metrics.

        Returns:
            Dictionary with uptime, counters, error count and timing statistics
        """
        return {
            'uptime': self.get_uptime(),
            'counters': dict(self.counters),
            'error_count': self.error_count,
            'performance': self.get_performance_stats()
        }
