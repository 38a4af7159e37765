import logging
import time
from contextlib import contextmanager
from dataclasses import dataclass, asdict
from datetime import datetime
from typing import Dict, Iterator, List, Optional

import psutil


@dataclass
class ResourceSample:
    timestamp: str
    label: str
    wall_seconds: float
    cpu_percent: float
    memory_mb: float


class BenchMonitor:
    """Wall-clock timing of named blocks with the process's CPU and resident memory"""

    def __init__(self, process: Optional[psutil.Process] = None):
        self.process = process or psutil.Process()
        self.logger = logging.getLogger(__name__)
        self.samples: List[ResourceSample] = []
        # Prime cpu_percent so the first sample is measured over the first block
        self.process.cpu_percent(interval=None)

    def _memory_mb(self) -> float:
        return self.process.memory_info().rss / (1024 * 1024)

    @contextmanager
    def measure(self, label: str) -> Iterator[Dict[str, float]]:
        """Time the enclosed block; the yielded dict receives 'seconds' on exit"""
        result: Dict[str, float] = {}
        self.process.cpu_percent(interval=None)
        start = time.perf_counter()
        try:
            yield result
        finally:
            elapsed = time.perf_counter() - start
            sample = ResourceSample(
                timestamp=datetime.now().isoformat(),
                label=label,
                wall_seconds=elapsed,
                cpu_percent=self.process.cpu_percent(interval=None),
                memory_mb=self._memory_mb(),
            )
            self.samples.append(sample)
            result['seconds'] = elapsed
            self.logger.debug(f"{label}: {elapsed:.4f}s, {sample.memory_mb:.1f} MB resident")

    def peak_memory_mb(self, label: Optional[str] = None) -> float:
        values = [s.memory_mb for s in self.samples if label is None or s.label == label]
        return max(values) if values else self._memory_mb()

    def durations(self, label: str) -> List[float]:
        return [s.wall_seconds for s in self.samples if s.label == label]

    def to_records(self) -> List[Dict]:
        return [asdict(s) for s in self.samples]

    def reset(self):
        self.samples.clear()
