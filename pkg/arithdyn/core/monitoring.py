from functools import wraps
import time
import logging
from prometheus_client import Counter, Histogram
from typing import Callable, Any, Dict, Optional

# Configure logging
logger = logging.getLogger(__name__)

# Prometheus metrics
OPERATION_COUNT = Counter('arithdyn_operation_count', 'Total operation count', ['operation'])
OPERATION_LATENCY = Histogram('arithdyn_operation_latency_seconds', 'Operation latency', ['operation'])
ERROR_COUNT = Counter('arithdyn_error_count', 'Total error count', ['operation', 'error_type'])


class PerformanceMonitor:
    """Performance monitoring context manager

    Records the duration of an operation in the prometheus histogram and, when a
    ``timings`` dict is given, accumulates the elapsed seconds under the
    operation name so reports can echo them.
    """

    def __init__(self, operation_name: str, threshold_ms: float = 5000.0,
                 timings: Optional[Dict[str, float]] = None):
        self.operation_name = operation_name
        self.threshold_ms = threshold_ms
        self.timings = timings
        self.start_time = None
        self.duration = 0.0

    def __enter__(self):
        self.start_time = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.duration = time.perf_counter() - self.start_time
        duration_ms = self.duration * 1000

        OPERATION_COUNT.labels(operation=self.operation_name).inc()
        OPERATION_LATENCY.labels(operation=self.operation_name).observe(self.duration)
        if self.timings is not None:
            self.timings[self.operation_name] = self.timings.get(self.operation_name, 0.0) + self.duration

        if duration_ms > self.threshold_ms:
            logger.warning(
                f"Slow operation detected: {self.operation_name} took {duration_ms:.2f}ms "
                f"(threshold: {self.threshold_ms}ms)"
            )
        else:
            logger.debug(
                f"Operation completed: {self.operation_name} took {duration_ms:.2f}ms"
            )

        if exc_type:
            ERROR_COUNT.labels(
                operation=self.operation_name,
                error_type=exc_type.__name__
            ).inc()


def monitor_performance(threshold_ms: float = 5000.0):
    """Decorator to monitor a synchronous computation"""
    def decorator(func: Callable) -> Callable:
        @wraps(func)
        def wrapper(*args, **kwargs) -> Any:
            with PerformanceMonitor(func.__name__, threshold_ms):
                return func(*args, **kwargs)
        return wrapper
    return decorator


def track_memory_usage(func: Callable) -> Callable:
    """Decorator to track memory usage"""
    @wraps(func)
    def wrapper(*args, **kwargs):
        import psutil
        process = psutil.Process()

        # Memory usage before
        mem_before = process.memory_info().rss / 1024 / 1024  # MB

        try:
            result = func(*args, **kwargs)

            # Memory usage after
            mem_after = process.memory_info().rss / 1024 / 1024  # MB
            mem_diff = mem_after - mem_before

            logger.info(
                f"Memory usage for {func.__name__}: "
                f"Before={mem_before:.1f}MB, "
                f"After={mem_after:.1f}MB, "
                f"Diff={mem_diff:+.1f}MB"
            )

            return result

        except Exception as e:
            logger.error(f"Error in {func.__name__}: {e}")
            raise

    return wrapper
