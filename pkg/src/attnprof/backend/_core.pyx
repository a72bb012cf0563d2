# Compiled kernel core. Mirrors _pykernels signatures; float32 throughout.
# Banded attention and convolution packing loop over valid index ranges
# only, so no sentinel masking or hidden temporaries are needed.

from libc.math cimport expf, tanhf, sqrtf

import numpy as np

NAME = "compiled"

cdef float GELU_C = 0.7978845608028654
cdef float GELU_A = 0.044715


def softmax_rows_(float[:, :] x):
    cdef Py_ssize_t i, j, m = x.shape[0], n = x.shape[1]
    cdef float mx, s
    for i in range(m):
        mx = x[i, 0]
        for j in range(1, n):
            if x[i, j] > mx:
                mx = x[i, j]
        s = 0.0
        for j in range(n):
            x[i, j] = expf(x[i, j] - mx)
            s += x[i, j]
        s = 1.0 / s
        for j in range(n):
            x[i, j] *= s


def softmax_rows_backward(float[:, :] p, float[:, :] dy, float[:, :] dx):
    cdef Py_ssize_t i, j, m = p.shape[0], n = p.shape[1]
    cdef float dot
    for i in range(m):
        dot = 0.0
        for j in range(n):
            dot += p[i, j] * dy[i, j]
        for j in range(n):
            dx[i, j] = p[i, j] * (dy[i, j] - dot)


def layernorm_fwd(float[:, :] x, float[::1] gamma, float[::1] beta, float eps,
                  float[:, :] y, float[::1] mean, float[::1] rstd):
    cdef Py_ssize_t i, j, m = x.shape[0], d = x.shape[1]
    cdef float mu, var, r, c
    for i in range(m):
        mu = 0.0
        for j in range(d):
            mu += x[i, j]
        mu /= d
        var = 0.0
        for j in range(d):
            c = x[i, j] - mu
            var += c * c
        var /= d
        r = 1.0 / sqrtf(var + eps)
        mean[i] = mu
        rstd[i] = r
        for j in range(d):
            y[i, j] = (x[i, j] - mu) * r * gamma[j] + beta[j]


def layernorm_bwd(float[:, :] x, float[::1] gamma, float[::1] mean,
                  float[::1] rstd, float[:, :] dy, float[:, :] dx,
                  float[::1] dgamma, float[::1] dbeta):
    cdef Py_ssize_t i, j, m = x.shape[0], d = x.shape[1]
    cdef float mu, r, xh, dxh, m1, m2
    for i in range(m):
        mu = mean[i]
        r = rstd[i]
        m1 = 0.0
        m2 = 0.0
        for j in range(d):
            xh = (x[i, j] - mu) * r
            dxh = dy[i, j] * gamma[j]
            dgamma[j] += dy[i, j] * xh
            dbeta[j] += dy[i, j]
            m1 += dxh
            m2 += dxh * xh
        m1 /= d
        m2 /= d
        for j in range(d):
            xh = (x[i, j] - mu) * r
            dx[i, j] = ((dy[i, j] * gamma[j]) - m1 - xh * m2) * r


def gelu_fwd(float[:, :] x, float[:, :] y):
    cdef Py_ssize_t i, j, m = x.shape[0], n = x.shape[1]
    cdef float v, t
    for i in range(m):
        for j in range(n):
            v = x[i, j]
            t = tanhf(GELU_C * (v + GELU_A * v * v * v))
            y[i, j] = 0.5 * v * (1.0 + t)


def gelu_bwd(float[:, :] x, float[:, :] dy, float[:, :] dx):
    cdef Py_ssize_t i, j, m = x.shape[0], n = x.shape[1]
    cdef float v, t, u
    for i in range(m):
        for j in range(n):
            v = x[i, j]
            t = tanhf(GELU_C * (v + GELU_A * v * v * v))
            u = 0.5 * (1.0 + t) + 0.5 * v * (1.0 - t * t) * GELU_C * (
                1.0 + 3.0 * GELU_A * v * v)
            dx[i, j] = dy[i, j] * u


def im2col(float[:, :] x, Py_ssize_t kernel, Py_ssize_t stride,
           Py_ssize_t t0, Py_ssize_t t1, float[:, :] out):
    cdef Py_ssize_t c, t, kk, base, nc = x.shape[0]
    for c in range(nc):
        for t in range(t0, t1):
            base = t * stride
            for kk in range(kernel):
                out[c * kernel + kk, t - t0] = x[c, base + kk]


def col2im_add(float[:, :] dcol, Py_ssize_t kernel, Py_ssize_t stride,
               Py_ssize_t t0, Py_ssize_t t1, float[:, :] dx):
    cdef Py_ssize_t c, t, kk, base, nc = dx.shape[0]
    for c in range(nc):
        for t in range(t0, t1):
            base = t * stride
            for kk in range(kernel):
                dx[c, base + kk] += dcol[c * kernel + kk, t - t0]


cdef inline void _edges(Py_ssize_t n, Py_ssize_t half, Py_ssize_t i,
                        Py_ssize_t *lo, Py_ssize_t *hi):
    lo[0] = half - i if i < half else 0
    hi[0] = half + (n - 1 - i if n - 1 - i < half else half)


def band_scores(float[:, :] q, float[:, :] k, Py_ssize_t half, float scale,
                float[:, :] out):
    cdef Py_ssize_t i, j, d, lo, hi, kp, n = q.shape[0], dh = q.shape[1]
    cdef Py_ssize_t w1 = 2 * half + 1
    cdef float acc
    for i in range(n):
        _edges(n, half, i, &lo, &hi)
        for j in range(lo):
            out[i, j] = 0.0
        for j in range(lo, hi + 1):
            kp = i - half + j
            acc = 0.0
            for d in range(dh):
                acc += q[i, d] * k[kp, d]
            out[i, j] = acc * scale
        for j in range(hi + 1, w1):
            out[i, j] = 0.0


def band_softmax_(float[:, :] s, Py_ssize_t half):
    cdef Py_ssize_t i, j, lo, hi, n = s.shape[0]
    cdef float mx, acc
    for i in range(n):
        _edges(n, half, i, &lo, &hi)
        mx = s[i, lo]
        for j in range(lo + 1, hi + 1):
            if s[i, j] > mx:
                mx = s[i, j]
        acc = 0.0
        for j in range(lo, hi + 1):
            s[i, j] = expf(s[i, j] - mx)
            acc += s[i, j]
        acc = 1.0 / acc
        for j in range(lo, hi + 1):
            s[i, j] *= acc


def band_context(float[:, :] p, float[:, :] v, Py_ssize_t half,
                 float[:, :] out):
    cdef Py_ssize_t i, j, d, lo, hi, kp, n = v.shape[0], dh = v.shape[1]
    cdef float w
    for i in range(n):
        _edges(n, half, i, &lo, &hi)
        for d in range(dh):
            out[i, d] = 0.0
        for j in range(lo, hi + 1):
            kp = i - half + j
            w = p[i, j]
            for d in range(dh):
                out[i, d] += w * v[kp, d]


def band_scores_backward(float[:, :] ds, float[:, :] q, float[:, :] k,
                         Py_ssize_t half, float scale,
                         float[:, :] dq, float[:, :] dk):
    cdef Py_ssize_t i, j, d, lo, hi, kp, n = q.shape[0], dh = q.shape[1]
    cdef float g
    for i in range(n):
        _edges(n, half, i, &lo, &hi)
        for j in range(lo, hi + 1):
            kp = i - half + j
            g = ds[i, j] * scale
            for d in range(dh):
                dq[i, d] += g * k[kp, d]
                dk[kp, d] += g * q[i, d]


def band_context_backward(float[:, :] dctx, float[:, :] p, float[:, :] v,
                          Py_ssize_t half, float[:, :] dp, float[:, :] dv):
    cdef Py_ssize_t i, j, d, lo, hi, kp, n = v.shape[0], dh = v.shape[1]
    cdef Py_ssize_t w1 = 2 * half + 1
    cdef float acc, w
    for i in range(n):
        _edges(n, half, i, &lo, &hi)
        for j in range(lo):
            dp[i, j] = 0.0
        for j in range(hi + 1, w1):
            dp[i, j] = 0.0
        for j in range(lo, hi + 1):
            kp = i - half + j
            acc = 0.0
            w = p[i, j]
            for d in range(dh):
                acc += dctx[i, d] * v[kp, d]
                dv[kp, d] += w * dctx[i, d]
            dp[i, j] = acc


def scatter_add_rows(float[:, :] table_grad, long[:] ids, float[:, :] dy):
    cdef Py_ssize_t i, j, n = dy.shape[0], d = dy.shape[1], row
    for i in range(n):
        row = ids[i]
        for j in range(d):
            table_grad[row, j] += dy[i, j]
