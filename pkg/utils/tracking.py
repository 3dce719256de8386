# utils/tracking.py
import logging
import time
from functools import wraps
from typing import Dict

logger = logging.getLogger(__name__)


class PerformanceTracker:
    """Wall time and success counts per named step, forwarded to W&B when enabled.

    Timings stay out of persisted experiment records.
    """

    def __init__(self, observability_config=None):
        self.config = observability_config
        self.metrics: Dict[str, Dict[str, float]] = {}

    def record(self, step_name: str, elapsed: float, success: bool) -> None:
        stats = self.metrics.setdefault(step_name, {"executions": 0, "successes": 0, "total_time": 0.0})
        stats["executions"] += 1
        stats["successes"] += int(success)
        stats["total_time"] += elapsed
        if self.config is not None:
            self.config.log_to_wandb({
                f"{step_name}_execution_time": elapsed,
                f"{step_name}_success": success,
            })

    def log_metrics(self, metrics: Dict[str, float]) -> None:
        if self.config is not None:
            self.config.log_to_wandb(metrics)

    def track_execution(self, step_name: str):
        """Decorator recording execution time and whether the call raised"""

        def decorator(func):
            @wraps(func)
            def wrapper(*args, **kwargs):
                start_time = time.perf_counter()
                success = True
                try:
                    return func(*args, **kwargs)
                except Exception:
                    success = False
                    raise
                finally:
                    elapsed = time.perf_counter() - start_time
                    self.record(step_name, elapsed, success)
                    logger.debug("%s took %.3fs (success=%s)", step_name, elapsed, success)

            return wrapper

        return decorator
