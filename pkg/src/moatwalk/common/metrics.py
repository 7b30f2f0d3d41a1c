import time
from functools import wraps
from typing import Callable, Dict, Optional

from loguru import logger
from prometheus_client import (
    REGISTRY,
    Counter,
    Gauge,
    Histogram,
    write_to_textfile,
)


class MetricsRegistry:
    def __init__(self, registry=None):
        # Use a provided registry or the default one
        self.registry = registry or REGISTRY

        # Construction
        self.sieve_builds_total = Counter(
            "moatwalk_sieve_builds_total",
            "Total number of prime sieves built",
            registry=self.registry,
        )
        self.store_builds_total = Counter(
            "moatwalk_store_builds_total",
            "Total number of prime stores built",
            registry=self.registry,
        )
        self.store_points = Gauge(
            "moatwalk_store_points",
            "Number of interior primes in the most recently built store",
            registry=self.registry,
        )
        self.build_seconds = Histogram(
            "moatwalk_build_seconds",
            "Time spent in construction stages",
            ["stage"],
            registry=self.registry,
        )

        # Walk
        self.walk_steps_total = Counter(
            "moatwalk_walk_steps_total",
            "Total number of prime-to-prime steps taken by walks",
            registry=self.registry,
        )
        self.tube_extensions_total = Counter(
            "moatwalk_tube_extensions_total",
            "Total number of tube extensions tried after an empty search ball",
            registry=self.registry,
        )
        self.moat_events_total = Counter(
            "moatwalk_moat_events_total",
            "Total number of walks stopped by an exhausted tube",
            registry=self.registry,
        )

        # Moat searches
        self.components_total = Counter(
            "moatwalk_components_total",
            "Total number of bounded-step components explored",
            ["dimension"],
            registry=self.registry,
        )


# Global metrics registry
metrics = MetricsRegistry()


def write_metrics_textfile(path: str, registry=None) -> None:
    """Dump the registry in Prometheus text format, for node-exporter style collection."""
    write_to_textfile(path, registry or metrics.registry)


def measure_time(metric: Histogram, labels: Optional[Dict[str, str]] = None) -> Callable:
    """Decorator to measure the execution time of a function."""

    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            start_time = time.perf_counter()
            try:
                return func(*args, **kwargs)
            finally:
                duration = time.perf_counter() - start_time
                try:
                    if labels:
                        metric.labels(**labels).observe(duration)
                    else:
                        metric.observe(duration)
                except Exception as e:
                    logger.error(f"Error recording metric: {e}")

        return wrapper

    return decorator
