"""Active-trace context: who gets told about allocations, MACs and time.

A ``Trace`` bundles the memory accountant with optional MAC counting and
region timing, plus the stack of layer tags that attributes everything.
Model code opens ``region(tag)`` blocks; tensors and kernels report to
whatever trace is active.  A process-wide default trace exists so model
parameters are accounted even outside explicit measurements.
"""

from __future__ import annotations

from contextlib import contextmanager
from contextvars import ContextVar
from typing import Iterator

from .counters import MacCounter
from .memory import MemoryAccountant
from .tags import LayerTag


class Trace:
    def __init__(
        self,
        accountant: MemoryAccountant | None = None,
        macs: MacCounter | None = None,
        timer=None,
    ):
        self.accountant = accountant if accountant is not None else MemoryAccountant()
        self.macs = macs
        self.timer = timer
        self._tags: list[LayerTag] = []

    def current_tag(self) -> LayerTag | None:
        return self._tags[-1] if self._tags else None

    @contextmanager
    def region(self, tag: LayerTag) -> Iterator[None]:
        self._tags.append(tag)
        handle = self.timer.open_region(tag) if self.timer is not None else None
        try:
            yield
        finally:
            if handle is not None:
                self.timer.close_region(handle)
            self._tags.pop()

    def add_macs(self, macs: int) -> None:
        if self.macs is not None:
            self.macs.add(self.current_tag(), macs)


_DEFAULT = Trace()
_ACTIVE: ContextVar[Trace | None] = ContextVar("attnprof_trace", default=None)


def trace() -> Trace:
    """The trace receiving reports right now."""
    return _ACTIVE.get() or _DEFAULT


def default_trace() -> Trace:
    return _DEFAULT


@contextmanager
def use_trace(t: Trace) -> Iterator[Trace]:
    token = _ACTIVE.set(t)
    try:
        yield t
    finally:
        _ACTIVE.reset(token)


@contextmanager
def region(tag: LayerTag) -> Iterator[None]:
    with trace().region(tag):
        yield
