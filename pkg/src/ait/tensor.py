"""Dense tensors with reverse-mode automatic differentiation.

A ``Tensor`` wraps a numpy array (float32 by default). Differentiable
operations record themselves on the active ``GradTape``; replaying the tape
in reverse execution order accumulates gradients additively into every
tensor that requires them. One tape per training step, never shared between
threads.
"""

from __future__ import annotations

import contextlib
import threading

import numpy as np

from .errors import NumericError

_default_dtype = np.float32


def default_dtype():
    return _default_dtype


def set_default_dtype(dtype) -> None:
    global _default_dtype
    _default_dtype = np.dtype(dtype).type


@contextlib.contextmanager
def use_dtype(dtype):
    """Temporarily switch the default scalar precision (e.g. np.float64)."""
    global _default_dtype
    prev = _default_dtype
    _default_dtype = np.dtype(dtype).type
    try:
        yield
    finally:
        _default_dtype = prev


class Tensor:
    """A dense n-dimensional value, optionally participating in a tape."""

    __slots__ = ("data", "grad", "requires_grad")

    def __init__(self, data, requires_grad: bool = False, dtype=None):
        if isinstance(data, Tensor):
            data = data.data
        arr = np.asarray(data, dtype=dtype if dtype is not None else None)
        if arr.dtype not in (np.float32, np.float64):
            arr = arr.astype(_default_dtype)
        self.data = arr
        self.grad = None
        self.requires_grad = bool(requires_grad)

    @property
    def shape(self):
        return self.data.shape

    @property
    def ndim(self) -> int:
        return self.data.ndim

    @property
    def size(self) -> int:
        return self.data.size

    @property
    def dtype(self):
        return self.data.dtype

    def item(self) -> float:
        return float(self.data.reshape(-1)[0]) if self.data.size == 1 else float(self.data)

    def detach(self) -> "Tensor":
        return Tensor(self.data, requires_grad=False)

    def zero_grad(self) -> None:
        self.grad = None

    def accumulate_grad(self, g: np.ndarray) -> None:
        if self.grad is None:
            self.grad = np.array(g, dtype=self.data.dtype, copy=True)
        else:
            self.grad += g.astype(self.data.dtype, copy=False)

    def check_finite(self, what: str = "tensor") -> "Tensor":
        if not np.all(np.isfinite(self.data)):
            raise NumericError(f"non-finite values in {what}")
        return self

    def __repr__(self) -> str:
        flag = ", requires_grad=True" if self.requires_grad else ""
        return f"Tensor(shape={tuple(self.shape)}, dtype={self.data.dtype.name}{flag})"

    # Arithmetic sugar; the real work lives in ait.ops.
    def __add__(self, other):
        from . import ops
        return ops.add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        from . import ops
        return ops.sub(self, other)

    def __rsub__(self, other):
        from . import ops
        return ops.sub(other, self)

    def __mul__(self, other):
        from . import ops
        return ops.mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        from . import ops
        return ops.div(self, other)

    def __rtruediv__(self, other):
        from . import ops
        return ops.div(other, self)

    def __neg__(self):
        from . import ops
        return ops.neg(self)

    def __matmul__(self, other):
        from . import ops
        return ops.matmul(self, other)


def as_tensor(value, dtype=None) -> Tensor:
    if isinstance(value, Tensor):
        return value
    return Tensor(value, dtype=dtype)


class _Record:
    """One executed op: its output and the rule pushing grads to its inputs."""

    __slots__ = ("output", "backward")

    def __init__(self, output: Tensor, backward):
        self.output = output
        self.backward = backward


class GradTape:
    """Ordered record of differentiable ops executed under this tape."""

    def __init__(self):
        self._records: list[_Record] = []

    def __len__(self) -> int:
        return len(self._records)

    def __enter__(self) -> "GradTape":
        _state.stack.append(self)
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        popped = _state.stack.pop()
        assert popped is self, "GradTape contexts must nest"

    def record(self, output: Tensor, backward) -> None:
        self._records.append(_Record(output, backward))

    def clear(self) -> None:
        self._records.clear()

    def backward(self, loss: Tensor) -> None:
        """Seed d(loss)/d(loss)=1 and replay records in reverse order."""
        if loss.size != 1:
            raise ValueError(f"backward needs a scalar loss, got shape {tuple(loss.shape)}")
        loss.accumulate_grad(np.ones_like(loss.data))
        for rec in reversed(self._records):
            g = rec.output.grad
            if g is None:
                continue
            rec.backward(g)


class _TapeState(threading.local):
    def __init__(self):
        self.stack: list[GradTape] = []


_state = _TapeState()


def active_tape() -> GradTape | None:
    return _state.stack[-1] if _state.stack else None
