# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled scalar kernels; see _kernels_py for the contract.

The accumulation order and expression trees match the pure backend
exactly, so the two produce bit-identical results (the extension is
built with floating-point contraction disabled).
"""

import numpy as np


def naive_linear(f_idx_in, f_val_in, g_in, g_min, out_min, out_len):
    cdef long long[::1] f_idx = np.ascontiguousarray(f_idx_in, dtype=np.int64)
    cdef double[::1] f_val = np.ascontiguousarray(f_val_in, dtype=np.float64)
    cdef double[::1] g = np.ascontiguousarray(g_in, dtype=np.float64)
    out_arr = np.zeros(int(out_len))
    cdef double[::1] out = out_arr
    cdef Py_ssize_t k, j, nf = f_idx.shape[0], ng = g.shape[0], nout = int(out_len)
    cdef long long x, gi, gmin = g_min, omin = out_min
    cdef double s, c, term, y, t
    for k in range(nout):
        x = omin + k
        s = 0.0
        c = 0.0
        for j in range(nf):
            gi = x - f_idx[j] - gmin
            if 0 <= gi < ng:
                term = f_val[j] * g[gi]
            else:
                term = 0.0
            y = term - c
            t = s + y
            c = (t - s) - y
            s = t
        out[k] = s
    return out_arr


def naive_circular(f_idx_in, f_val_in, g_in):
    cdef long long[::1] f_idx = np.ascontiguousarray(f_idx_in, dtype=np.int64)
    cdef double[::1] f_val = np.ascontiguousarray(f_val_in, dtype=np.float64)
    cdef double[::1] g = np.ascontiguousarray(g_in, dtype=np.float64)
    cdef Py_ssize_t n = g.shape[0], nf = f_idx.shape[0], k, j
    out_arr = np.zeros(n)
    cdef double[::1] out = out_arr
    cdef long long gi
    cdef double s, c, term, y, t
    for k in range(n):
        s = 0.0
        c = 0.0
        for j in range(nf):
            gi = (k - f_idx[j]) % n
            if gi < 0:
                gi += n
            term = f_val[j] * g[gi]
            y = term - c
            t = s + y
            c = (t - s) - y
            s = t
        out[k] = s
    return out_arr


def fft_radix2(re_in, im_in, wre_in, wim_in):
    cdef double[::1] re = re_in
    cdef double[::1] im = im_in
    cdef double[::1] wre = wre_in
    cdef double[::1] wim = wim_in
    cdef Py_ssize_t n = re.shape[0], i, j, bit, m, half, step, base, k, ii, jj
    cdef double tmp, wr, wi, br, bi, tr, ti, ur, ui
    if n <= 1:
        return
    j = 0
    for i in range(1, n):
        bit = n >> 1
        while j & bit:
            j ^= bit
            bit >>= 1
        j |= bit
        if i < j:
            tmp = re[i]; re[i] = re[j]; re[j] = tmp
            tmp = im[i]; im[i] = im[j]; im[j] = tmp
    m = 2
    while m <= n:
        half = m >> 1
        step = n // m
        for base in range(0, n, m):
            for k in range(half):
                wr = wre[k * step]
                wi = wim[k * step]
                ii = base + k
                jj = ii + half
                br = re[jj]
                bi = im[jj]
                tr = wr * br - wi * bi
                ti = wr * bi + wi * br
                ur = re[ii]
                ui = im[ii]
                re[ii] = ur + tr
                im[ii] = ui + ti
                re[jj] = ur - tr
                im[jj] = ui - ti
        m <<= 1
