"""Accounting allocator facade.

Every tensor buffer the package allocates or releases is reported here
exactly once, so peak live bytes are observable deterministically and
without OS involvement.  An optional byte budget turns over-allocation
into an error, which the throughput estimator uses as its out-of-memory
analogue.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

from .errors import MemoryBudgetExceeded
from .tags import LayerTag, TagKind

_UNTAGGED = LayerTag(TagKind.OTHER, 0)


@dataclass
class MemoryScopeReport:
    """Peak statistics for one measurement scope."""

    entry_bytes: int
    peak_bytes: int
    exit_bytes: int
    per_tag_at_peak: dict[LayerTag, int] = field(default_factory=dict)

    @property
    def delta_bytes(self) -> int:
        """Peak growth over the scope entry point."""
        return self.peak_bytes - self.entry_bytes


class MemoryAccountant:
    """Tracks current and peak live bytes, attributed per layer tag.

    ``peak_bytes`` is monotone nondecreasing between scope resets; a reset
    sets it back to ``current_bytes``.  Counters are lock-protected so
    parallel kernel workers may report allocations safely.
    """

    def __init__(self, limit_bytes: int | None = None):
        self._lock = threading.Lock()
        self._current = 0
        self._peak = 0
        self._per_tag: dict[LayerTag, int] = {}
        self._per_tag_at_peak: dict[LayerTag, int] = {}
        self.limit_bytes = limit_bytes

    @property
    def current_bytes(self) -> int:
        return self._current

    @property
    def peak_bytes(self) -> int:
        return self._peak

    @property
    def per_tag_peak(self) -> dict[LayerTag, int]:
        """Per-tag live bytes captured at the moment of the current peak."""
        with self._lock:
            return dict(self._per_tag_at_peak)

    def per_tag_current(self) -> dict[LayerTag, int]:
        with self._lock:
            return {t: b for t, b in self._per_tag.items() if b}

    def alloc(self, nbytes: int, tag: LayerTag | None = None) -> None:
        tag = tag or _UNTAGGED
        with self._lock:
            if (
                self.limit_bytes is not None
                and self._current + nbytes > self.limit_bytes
            ):
                raise MemoryBudgetExceeded(nbytes, self._current, self.limit_bytes)
            self._current += nbytes
            self._per_tag[tag] = self._per_tag.get(tag, 0) + nbytes
            if self._current > self._peak:
                self._peak = self._current
                self._per_tag_at_peak = {
                    t: b for t, b in self._per_tag.items() if b
                }

    def release(self, nbytes: int, tag: LayerTag | None = None) -> None:
        tag = tag or _UNTAGGED
        with self._lock:
            self._current -= nbytes
            left = self._per_tag.get(tag, 0) - nbytes
            if left:
                self._per_tag[tag] = left
            else:
                self._per_tag.pop(tag, None)

    def reset_peak(self) -> None:
        """Start a fresh measurement scope: peak := current."""
        with self._lock:
            self._peak = self._current
            self._per_tag_at_peak = {t: b for t, b in self._per_tag.items() if b}

    def scope(self) -> "MemoryScope":
        return MemoryScope(self)


class MemoryScope:
    """Context manager delimiting one peak-memory measurement."""

    def __init__(self, accountant: MemoryAccountant):
        self.accountant = accountant
        self.report: MemoryScopeReport | None = None

    def __enter__(self) -> "MemoryScope":
        self._entry = self.accountant.current_bytes
        self.accountant.reset_peak()
        return self

    def __exit__(self, *exc) -> None:
        acc = self.accountant
        self.report = MemoryScopeReport(
            entry_bytes=self._entry,
            peak_bytes=acc.peak_bytes,
            exit_bytes=acc.current_bytes,
            per_tag_at_peak=acc.per_tag_peak,
        )
