"""Float32 tensor wrapper whose buffers are visible to the accountant.

Every owning ``Tensor`` reports its allocation once at construction and
its release once when garbage-collected (CPython refcounting makes this
eager and deterministic).  Views share a base buffer and are never
accounted.  Large kernel-internal workspaces go through ``scratch``.
"""

from __future__ import annotations

import weakref
from contextlib import contextmanager

import numpy as np

from .context import trace
from .errors import ShapeError
from .memory import MemoryAccountant
from .tags import LayerTag

DTYPE = np.float32


class Tensor:
    __slots__ = ("data", "tag", "grad", "_base", "_finalizer", "__weakref__")

    def __init__(
        self,
        data: np.ndarray,
        tag: LayerTag | None = None,
        _base: "Tensor | None" = None,
    ):
        if data.dtype != DTYPE:
            raise ShapeError(f"tensor dtype must be float32, got {data.dtype}")
        self.data = data
        self.tag = tag if tag is not None else trace().current_tag()
        self.grad: Tensor | None = None
        self._base = _base
        if _base is None:
            acc = trace().accountant
            acc.alloc(data.nbytes, self.tag)
            self._finalizer = weakref.finalize(
                self, _release, acc, data.nbytes, self.tag
            )
        else:
            self._finalizer = None

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    @property
    def nbytes(self) -> int:
        return self.data.nbytes

    def view(self, *shape: int) -> "Tensor":
        """Reshaped view sharing this tensor's buffer (not re-accounted)."""
        return Tensor(self.data.reshape(shape), tag=self.tag, _base=self._base or self)

    def ensure_grad(self) -> "Tensor":
        if self.grad is None:
            self.grad = zeros(self.shape, tag=self.tag)
        return self.grad

    def free_grad(self) -> None:
        self.grad = None

    def __repr__(self) -> str:
        return f"Tensor(shape={tuple(self.shape)}, tag={self.tag})"


def _release(acc: MemoryAccountant, nbytes: int, tag: LayerTag | None) -> None:
    acc.release(nbytes, tag)


def empty(shape, tag: LayerTag | None = None) -> Tensor:
    return Tensor(np.empty(shape, dtype=DTYPE), tag=tag)


def zeros(shape, tag: LayerTag | None = None) -> Tensor:
    return Tensor(np.zeros(shape, dtype=DTYPE), tag=tag)


def from_array(arr, tag: LayerTag | None = None) -> Tensor:
    return Tensor(np.ascontiguousarray(arr, dtype=DTYPE), tag=tag)


def gaussian(rng: np.random.Generator, shape, std: float = 0.02,
             tag: LayerTag | None = None) -> Tensor:
    return Tensor(rng.normal(0.0, std, size=shape).astype(DTYPE), tag=tag)


@contextmanager
def scratch(shape, tag: LayerTag | None = None):
    """Accounted temporary workspace for kernel internals."""
    t = empty(shape, tag=tag)
    try:
        yield t.data
    finally:
        del t
