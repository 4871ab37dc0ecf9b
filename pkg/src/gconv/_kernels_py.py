"""Pure-Python (numpy) kernels.

Drop-in replacements for the compiled module.  Both backends must produce
bit-identical output: every accumulation is Kahan-compensated in the same
per-output order (ascending support index), and the transform butterflies
use the same scalar expression tree with shared twiddle tables.
"""

from __future__ import annotations

import numpy as np

_rev_cache: dict[int, np.ndarray] = {}


def _rev_table(n: int) -> np.ndarray:
    tab = _rev_cache.get(n)
    if tab is None:
        bits = n.bit_length() - 1
        idx = np.arange(n)
        tab = np.zeros(n, dtype=np.intp)
        for _ in range(bits):
            tab = (tab << 1) | (idx & 1)
            idx >>= 1
        _rev_cache[n] = tab
    return tab


def naive_linear(f_idx, f_val, g, g_min, out_min, out_len):
    """Dense convolution on the integers against a sparse left factor.

    out[k] = sum_j f_val[j] * g[(out_min + k) - f_idx[j] - g_min], with
    out-of-range g reads contributing an exact 0.0 term to the Kahan state.
    """
    out_len = int(out_len)
    s = np.zeros(out_len)
    c = np.zeros(out_len)
    nf = len(f_idx)
    if nf == 0 or out_len == 0:
        return s
    f_idx = np.asarray(f_idx, dtype=np.int64)
    f_val = np.asarray(f_val, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    # pad so every slice below stays in range; padding reads are the 0.0 terms
    lo = int(out_min - f_idx.max() - g_min)
    hi = int(out_min + out_len - 1 - f_idx.min() - g_min)
    pad_l = max(0, -lo)
    pad_r = max(0, hi - (len(g) - 1))
    gz = np.concatenate([np.zeros(pad_l), g, np.zeros(pad_r)])
    for j in range(nf):
        start = int(out_min - f_idx[j] - g_min) + pad_l
        term = f_val[j] * gz[start : start + out_len]
        y = term - c
        t = s + y
        c = (t - s) - y
        s = t
    return s


def naive_circular(f_idx, f_val, g):
    """Same contract on the cyclic group of order len(g)."""
    n = len(g)
    s = np.zeros(n)
    c = np.zeros(n)
    if len(f_idx) == 0 or n == 0:
        return s
    f_val = np.asarray(f_val, dtype=np.float64)
    tiled = np.concatenate([np.asarray(g, dtype=np.float64)] * 2)
    for j in range(len(f_idx)):
        start = (-int(f_idx[j])) % n
        term = f_val[j] * tiled[start : start + n]
        y = term - c
        t = s + y
        c = (t - s) - y
        s = t
    return s


def fft_radix2(re, im, wre, wim):
    """In-place radix-2 transform; len(re) must be a power of two.

    wre/wim hold exp(-2*pi*i*k/n) for k < n/2; pass conjugated tables for
    the inverse (the caller owns the 1/n scaling).
    """
    n = len(re)
    if n <= 1:
        return
    rev = _rev_table(n)
    re[:] = re[rev]
    im[:] = im[rev]
    m = 2
    while m <= n:
        half = m >> 1
        step = n // m
        wr = wre[: n // 2 : step]
        wi = wim[: n // 2 : step]
        r2 = re.reshape(-1, m)
        i2 = im.reshape(-1, m)
        br = r2[:, half:]
        bi = i2[:, half:]
        tr = wr * br - wi * bi
        ti = wr * bi + wi * br
        ur = r2[:, :half].copy()
        ui = i2[:, :half].copy()
        r2[:, :half] = ur + tr
        i2[:, :half] = ui + ti
        r2[:, half:] = ur - tr
        i2[:, half:] = ui - ti
        m <<= 1
