"""Reflection-parity blocks of circulant-plus-diagonal matrices.

On the periodic grid t_j = -T + j dt the reflection t -> -t maps index j to
(N - j) mod N, fixing j = 0 and j = N/2.  The orthonormal even basis is
e_0, e_{N/2} and (e_j + e_{N-j})/sqrt2 for 0 < j < N/2; the odd basis is
(e_j - e_{N-j})/sqrt2.  For a symmetric circulant with first column ``col``
the blocks have closed forms, so the full N x N matrix is never formed.
"""
import math

import numpy as np

_R2 = math.sqrt(2.0)


def _weights(h):
    w = np.ones(h + 1)
    w[0] = w[h] = 1.0 / _R2
    return w


def even_block(col, diag):
    """(N/2+1)-square block of circulant(col) + diag(diag) on even fields."""
    N = col.shape[0]
    h = N // 2
    a = np.arange(h + 1)
    w = _weights(h)
    B = (col[(a[:, None] - a[None, :]) % N] + col[(a[:, None] + a[None, :]) % N])
    B *= w[:, None] * w[None, :]
    B[a, a] += diag[:h + 1]
    return B


def odd_block(col, diag):
    """(N/2-1)-square block of circulant(col) + diag(diag) on odd fields."""
    N = col.shape[0]
    h = N // 2
    a = np.arange(1, h)
    B = col[(a[:, None] - a[None, :]) % N] - col[(a[:, None] + a[None, :]) % N]
    B[np.arange(h - 1), np.arange(h - 1)] += diag[1:h]
    return B


def to_even(v):
    N = v.shape[0]
    h = N // 2
    x = np.empty(h + 1)
    x[0], x[h] = v[0], v[h]
    x[1:h] = (v[1:h] + v[N - 1:h:-1]) / _R2
    return x


def from_even(x):
    h = x.shape[0] - 1
    N = 2 * h
    v = np.empty(N)
    v[0], v[h] = x[0], x[h]
    v[1:h] = x[1:h] / _R2
    v[N - 1:h:-1] = v[1:h]
    return v


def from_odd(y):
    h = y.shape[0] + 1
    N = 2 * h
    v = np.zeros(N)
    v[1:h] = y / _R2
    v[N - 1:h:-1] = -v[1:h]
    return v


def circulant_column(theta_fft):
    """First column of the circulant matrix realising a real even multiplier."""
    return np.fft.ifft(theta_fft).real
