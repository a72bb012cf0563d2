"""Dense forward/backward kernels on accounted tensors.

Matrix products run on BLAS; everything else dispatches to the selected
kernel backend.  Multiply-accumulate counts are reported to the active
trace so the analytic cost model can be validated instruction-for-
instruction.  Gradient conventions: activation gradients are returned as
fresh tensors, parameter gradients are accumulated into ``.grad``.
"""

from __future__ import annotations

import numpy as np

from .backend import kernels
from .context import trace
from .errors import ShapeError
from .tensor import Tensor, empty, scratch, zeros

LN_EPS = 1e-5

# conv workspace cap (bytes); keeps im2col chunks small on long waveforms
_CONV_SCRATCH_CAP = 16 << 20


def matmul(a: Tensor, b: Tensor, transpose_b: bool = False) -> Tensor:
    """2-D or batched 3-D product; allocates and accounts the output."""
    bd = b.data.swapaxes(-1, -2) if transpose_b else b.data
    if a.data.shape[-1] != bd.shape[-2]:
        raise ShapeError(f"matmul inner dims differ: {a.shape} x {b.shape}")
    if a.data.ndim != bd.ndim or a.data.ndim not in (2, 3):
        raise ShapeError(f"matmul rank mismatch: {a.shape} x {b.shape}")
    out_shape = (*a.data.shape[:-1], bd.shape[-1])
    out = empty(out_shape)
    np.matmul(a.data, bd, out=out.data)
    trace().add_macs(int(np.prod(out_shape)) * a.data.shape[-1])
    return out


def matmul_backward(
    a: Tensor, b: Tensor, dc: Tensor, transpose_b: bool = False
) -> tuple[Tensor, Tensor]:
    da = empty(a.shape)
    db = empty(b.shape)
    if transpose_b:
        np.matmul(dc.data, b.data, out=da.data)
        np.matmul(dc.data.swapaxes(-1, -2), a.data, out=db.data)
    else:
        np.matmul(dc.data, b.data.swapaxes(-1, -2), out=da.data)
        np.matmul(a.data.swapaxes(-1, -2), dc.data, out=db.data)
    trace().add_macs(2 * int(np.prod(dc.shape)) * a.data.shape[-1])
    return da, db


def linear(x: Tensor, w: Tensor, bias: Tensor | None = None) -> Tensor:
    """x[m,k] @ w[k,n] (+ bias broadcast over rows)."""
    y = matmul(x, w)
    if bias is not None:
        y.data += bias.data
    return y


def linear_backward(x: Tensor, w: Tensor, bias: Tensor | None, dy: Tensor) -> Tensor:
    dx = empty(x.shape)
    np.matmul(dy.data, w.data.T, out=dx.data)
    gw = w.ensure_grad()
    with scratch(w.shape, tag=w.tag) as tmp:
        np.matmul(x.data.T, dy.data, out=tmp)
        gw.data += tmp
    if bias is not None:
        bias.ensure_grad().data += dy.data.sum(axis=0)
    trace().add_macs(2 * dy.data.shape[0] * w.data.shape[0] * w.data.shape[1])
    return dx


def embedding_lookup(table: Tensor, ids: np.ndarray) -> Tensor:
    out = empty((len(ids), table.shape[1]))
    np.take(table.data, ids, axis=0, out=out.data)
    return out


def embedding_backward(table: Tensor, ids: np.ndarray, dy: Tensor) -> None:
    kernels.scatter_add_rows(table.ensure_grad().data, ids.astype(np.int64), dy.data)


def softmax_rows(x: Tensor) -> Tensor:
    out = empty(x.shape)
    out.data[:] = x.data
    kernels.softmax_rows_(out.data)
    return out


def softmax_rows_(x: Tensor) -> Tensor:
    kernels.softmax_rows_(x.data)
    return x


def softmax_rows_backward(p: Tensor, dy: Tensor) -> Tensor:
    dx = empty(p.shape)
    kernels.softmax_rows_backward(p.data, dy.data, dx.data)
    return dx


def layernorm(x: Tensor, gamma: Tensor, beta: Tensor) -> tuple[Tensor, Tensor, Tensor]:
    """Row layernorm; returns (y, mean, rstd) with the stats kept for backward."""
    m = x.data.shape[0]
    y, mean, rstd = empty(x.shape), empty((m,)), empty((m,))
    kernels.layernorm_fwd(x.data, gamma.data, beta.data, LN_EPS,
                          y.data, mean.data, rstd.data)
    return y, mean, rstd


def layernorm_backward(
    x: Tensor, gamma: Tensor, beta: Tensor, mean: Tensor, rstd: Tensor, dy: Tensor
) -> Tensor:
    dx = empty(x.shape)
    kernels.layernorm_bwd(x.data, gamma.data, mean.data, rstd.data, dy.data,
                          dx.data, gamma.ensure_grad().data,
                          beta.ensure_grad().data)
    return dx


def gelu(x: Tensor) -> Tensor:
    y = empty(x.shape)
    kernels.gelu_fwd(x.data, y.data)
    return y


def gelu_(x: Tensor) -> Tensor:
    kernels.gelu_fwd(x.data, x.data)
    return x


def gelu_backward(x: Tensor, dy: Tensor) -> Tensor:
    dx = empty(x.shape)
    kernels.gelu_bwd(x.data, dy.data, dx.data)
    return dx


def conv_out_len(t: int, kernel: int, stride: int) -> int:
    return (t - kernel) // stride + 1


def conv1d(x: Tensor, w: Tensor, bias: Tensor | None, stride: int,
           groups: int = 1) -> Tensor:
    """Grouped 1-D convolution: x[C_in,T] * w[C_out,C_in/g,K] -> [C_out,T']."""
    c_in, t = x.shape
    c_out, c_in_g, k = w.shape
    if c_in_g * groups != c_in or c_out % groups:
        raise ShapeError(f"conv1d group mismatch: {x.shape} x {w.shape}")
    if t < k:
        raise ShapeError(f"conv1d input length {t} shorter than kernel {k}")
    nt = conv_out_len(t, k, stride)
    out = empty((c_out, nt))
    c_out_g = c_out // groups
    cols = c_in_g * k
    chunk = max(1, min(nt, _CONV_SCRATCH_CAP // (4 * cols)))
    with scratch((cols, chunk)) as col:
        for g in range(groups):
            xg = x.data[g * c_in_g:(g + 1) * c_in_g]
            wg = w.data[g * c_out_g:(g + 1) * c_out_g].reshape(c_out_g, cols)
            og = out.data[g * c_out_g:(g + 1) * c_out_g]
            for t0 in range(0, nt, chunk):
                t1 = min(t0 + chunk, nt)
                kernels.im2col(xg, k, stride, t0, t1, col[:, : t1 - t0])
                np.matmul(wg, col[:, : t1 - t0], out=og[:, t0:t1])
    if bias is not None:
        out.data += bias.data[:, None]
    trace().add_macs(c_out * nt * cols)
    return out


def conv1d_backward(x: Tensor, w: Tensor, bias: Tensor | None, stride: int,
                    groups: int, dy: Tensor) -> Tensor:
    c_in, t = x.shape
    c_out, c_in_g, k = w.shape
    nt = dy.shape[1]
    c_out_g = c_out // groups
    cols = c_in_g * k
    dx = zeros(x.shape)
    gw = w.ensure_grad()
    chunk = max(1, min(nt, _CONV_SCRATCH_CAP // (4 * cols)))
    with scratch((cols, chunk)) as col, scratch((c_out_g, cols)) as wtmp:
        for g in range(groups):
            xg = x.data[g * c_in_g:(g + 1) * c_in_g]
            wg = w.data[g * c_out_g:(g + 1) * c_out_g].reshape(c_out_g, cols)
            gwg = gw.data[g * c_out_g:(g + 1) * c_out_g].reshape(c_out_g, cols)
            dyg = dy.data[g * c_out_g:(g + 1) * c_out_g]
            dxg = dx.data[g * c_in_g:(g + 1) * c_in_g]
            for t0 in range(0, nt, chunk):
                t1 = min(t0 + chunk, nt)
                cw = col[:, : t1 - t0]
                kernels.im2col(xg, k, stride, t0, t1, cw)
                np.matmul(dyg[:, t0:t1], cw.T, out=wtmp)
                gwg += wtmp
                np.matmul(wg.T, dyg[:, t0:t1], out=cw)
                kernels.col2im_add(cw, k, stride, t0, t1, dxg)
    if bias is not None:
        bias.ensure_grad().data += dy.data.sum(axis=1)
    trace().add_macs(2 * c_out * nt * cols)
    return dx


def band_scores(q: Tensor, k: Tensor, half: int, scale: float) -> Tensor:
    out = empty((q.shape[0], 2 * half + 1))
    kernels.band_scores(q.data, k.data, half, scale, out.data)
    trace().add_macs(_band_macs(q.shape[0], half) * q.shape[1])
    return out


def band_softmax_(s: Tensor, half: int) -> Tensor:
    kernels.band_softmax_(s.data, half)
    return s


def band_context(p: Tensor, v: Tensor, half: int) -> Tensor:
    out = empty(v.shape)
    kernels.band_context(p.data, v.data, half, out.data)
    trace().add_macs(_band_macs(v.shape[0], half) * v.shape[1])
    return out


def band_scores_backward(ds: Tensor, q: Tensor, k: Tensor, half: int,
                         scale: float, dq: Tensor, dk: Tensor) -> None:
    kernels.band_scores_backward(ds.data, q.data, k.data, half, scale,
                                 dq.data, dk.data)
    trace().add_macs(2 * _band_macs(q.shape[0], half) * q.shape[1])


def band_context_backward(dctx: Tensor, p: Tensor, v: Tensor, half: int,
                          dv: Tensor) -> Tensor:
    dp = empty(p.shape)
    kernels.band_context_backward(dctx.data, p.data, v.data, half,
                                  dp.data, dv.data)
    trace().add_macs(2 * _band_macs(v.shape[0], half) * v.shape[1])
    return dp


def band_macs(n: int, half: int) -> int:
    """Exact number of (query, key) pairs in a clipped band of n rows."""
    return _band_macs(n, half)


def _band_macs(n: int, half: int) -> int:
    # sum over rows of min(half, i) + 1 + min(half, n-1-i), in closed form
    if n <= 0:
        return 0
    if n <= half:
        ramp = n * (n - 1) // 2
    else:
        ramp = half * (half - 1) // 2 + (n - half) * half
    return n + 2 * ramp
