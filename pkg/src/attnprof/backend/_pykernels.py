"""Pure-numpy kernel implementations (fallback backend).

All functions operate on float32 arrays and write into caller-allocated
outputs so that every sizable buffer stays visible to the accountant.
The compiled backend in ``_core.pyx`` exposes the same signatures.
"""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import as_strided

_NEG = np.float32(-1e30)
_GELU_C = np.float32(0.7978845608028654)  # sqrt(2/pi)
_GELU_A = np.float32(0.044715)

NAME = "python"


def softmax_rows_(x: np.ndarray) -> None:
    m = x.max(axis=1, keepdims=True)
    np.subtract(x, m, out=x)
    np.exp(x, out=x)
    s = x.sum(axis=1, keepdims=True)
    np.divide(x, s, out=x)


def softmax_rows_backward(p: np.ndarray, dy: np.ndarray, dx: np.ndarray) -> None:
    np.multiply(p, dy, out=dx)
    dot = dx.sum(axis=1, keepdims=True)
    np.subtract(dy, dot, out=dx)
    np.multiply(p, dx, out=dx)


def layernorm_fwd(x, gamma, beta, eps, y, mean, rstd) -> None:
    np.mean(x, axis=1, out=mean)
    np.subtract(x, mean[:, None], out=y)
    var = np.einsum("ij,ij->i", y, y) / np.float32(x.shape[1])
    np.sqrt(var + np.float32(eps), out=var)
    np.divide(np.float32(1.0), var, out=rstd)
    np.multiply(y, rstd[:, None], out=y)
    np.multiply(y, gamma, out=y)
    np.add(y, beta, out=y)


def layernorm_bwd(x, gamma, mean, rstd, dy, dx, dgamma, dbeta) -> None:
    d = np.float32(x.shape[1])
    xhat = (x - mean[:, None]) * rstd[:, None]
    dgamma += np.einsum("ij,ij->j", dy, xhat)
    dbeta += dy.sum(axis=0)
    dxh = dy * gamma
    m1 = dxh.mean(axis=1, keepdims=True)
    m2 = np.einsum("ij,ij->i", dxh, xhat)[:, None] / d
    np.subtract(dxh, m1, out=dxh)
    dxh -= xhat * m2
    np.multiply(dxh, rstd[:, None], out=dx)


def gelu_fwd(x: np.ndarray, y: np.ndarray) -> None:
    t = np.multiply(x, x)
    np.multiply(t, x, out=t)
    np.multiply(t, _GELU_A, out=t)
    np.add(t, x, out=t)
    np.multiply(t, _GELU_C, out=t)
    np.tanh(t, out=t)
    np.add(t, np.float32(1.0), out=t)
    np.multiply(t, np.float32(0.5), out=t)
    np.multiply(t, x, out=y)


def gelu_bwd(x: np.ndarray, dy: np.ndarray, dx: np.ndarray) -> None:
    x2 = np.multiply(x, x)
    u = _GELU_C * (x + _GELU_A * x2 * x)
    t = np.tanh(u)
    dgelu = 0.5 * (1.0 + t) + 0.5 * x * (1.0 - t * t) * _GELU_C * (
        1.0 + 3.0 * _GELU_A * x2
    )
    np.multiply(dy, dgelu.astype(np.float32), out=dx)


def im2col(x, kernel, stride, t0, t1, out) -> None:
    nt = t1 - t0
    xs = x[:, t0 * stride:]
    view = as_strided(
        xs,
        shape=(x.shape[0], nt, kernel),
        strides=(xs.strides[0], xs.strides[1] * stride, xs.strides[1]),
    )
    out.reshape(x.shape[0], kernel, nt)[:] = view.transpose(0, 2, 1)


def col2im_add(dcol, kernel, stride, t0, t1, dx) -> None:
    nt = t1 - t0
    c = dx.shape[0]
    d3 = dcol.reshape(c, kernel, nt)
    base = t0 * stride
    for kk in range(kernel):
        stop = base + kk + (nt - 1) * stride + 1
        dx[:, base + kk:stop:stride] += d3[:, kk, :]


def _band_edges(n: int, half: int, i: int) -> tuple[int, int]:
    lo = half - i if i < half else 0
    rest = n - 1 - i
    hi = half + (rest if rest < half else half)
    return lo, hi


def band_scores(q, k, half, scale, out) -> None:
    n = q.shape[0]
    s = np.float32(scale)
    for o in range(-half, half + 1):
        lo = max(0, -o)
        hi = n - max(0, o)
        if hi <= lo:
            continue
        np.einsum(
            "id,id->i", q[lo:hi], k[lo + o:hi + o],
            out=out[lo:hi, o + half],
        )
    out *= s
    _zero_band_edges(out, half)


def _zero_band_edges(buf, half) -> None:
    n = buf.shape[0]
    for i in range(min(half, n)):
        buf[i, : half - i] = 0.0
    for i in range(max(0, n - half), n):
        buf[i, half + (n - i):] = 0.0


def band_softmax_(s, half) -> None:
    n = s.shape[0]
    for i in range(min(half, n)):
        s[i, : half - i] = _NEG
    for i in range(max(0, n - half), n):
        s[i, half + (n - i):] = _NEG
    softmax_rows_(s)


def band_context(p, v, half, out) -> None:
    n, dh = v.shape
    out[:] = 0.0
    for o in range(-half, half + 1):
        lo = max(0, -o)
        hi = n - max(0, o)
        if hi <= lo:
            continue
        out[lo:hi] += p[lo:hi, o + half, None] * v[lo + o:hi + o]


def band_scores_backward(ds, q, k, half, scale, dq, dk) -> None:
    n = q.shape[0]
    s = np.float32(scale)
    for o in range(-half, half + 1):
        lo = max(0, -o)
        hi = n - max(0, o)
        if hi <= lo:
            continue
        col = ds[lo:hi, o + half, None] * s
        dq[lo:hi] += col * k[lo + o:hi + o]
        dk[lo + o:hi + o] += col * q[lo:hi]


def band_context_backward(dctx, p, v, half, dp, dv) -> None:
    n = v.shape[0]
    dp[:] = 0.0
    for o in range(-half, half + 1):
        lo = max(0, -o)
        hi = n - max(0, o)
        if hi <= lo:
            continue
        np.einsum("id,id->i", dctx[lo:hi], v[lo + o:hi + o], out=dp[lo:hi, o + half])
        dv[lo + o:hi + o] += p[lo:hi, o + half, None] * dctx[lo:hi]
    _zero_band_edges(dp, half)


def scatter_add_rows(table_grad, ids, dy) -> None:
    np.add.at(table_grad, ids, dy)
