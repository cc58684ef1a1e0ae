"""
Wall-clock accounting per named stage
"""

import logging
import time
from contextlib import contextmanager
from typing import Dict, Iterator, Optional

STAGES = ("setup", "state_graph", "policy_inference", "ea_generation", "hypervolume")


class StageTimer:
    """Accumulates elapsed time and call counts for named stages"""

    def __init__(self):
        self.logger = logging.getLogger(self.__class__.__name__)
        self.totals: Dict[str, float] = {}
        self.calls: Dict[str, int] = {}
        self._active: Optional[str] = None

    @contextmanager
    def stage(self, name: str) -> Iterator[None]:
        """
        Time the enclosed block under name

        Nested stages are not double counted: an inner stage's time is
        subtracted from the enclosing one.

        Args:
            name: Stage label
        """
        outer = self._active
        self._active = name
        start = time.perf_counter()
        try:
            yield
        finally:
            elapsed = time.perf_counter() - start
            self.totals[name] = self.totals.get(name, 0.0) + elapsed
            self.calls[name] = self.calls.get(name, 0) + 1
            self._active = outer
            if outer is not None:
                self.totals[outer] = self.totals.get(outer, 0.0) - elapsed

    def total(self) -> float:
        return sum(self.totals.values())

    def get_usage_stats(self) -> Dict[str, Dict[str, float]]:
        """
        Get cumulative timing statistics

        Returns:
            Mapping stage -> {"seconds", "calls", "share"}
        """
        grand = self.total()
        return {
            name: {
                "seconds": self.totals[name],
                "calls": self.calls[name],
                "share": self.totals[name] / grand if grand > 0 else 0.0,
            }
            for name in sorted(self.totals)
        }


@contextmanager
def maybe_stage(timer: Optional[StageTimer], name: str) -> Iterator[None]:
    """timer.stage(name) when a timer is attached, otherwise a no-op"""
    if timer is None:
        yield
    else:
        with timer.stage(name):
            yield
