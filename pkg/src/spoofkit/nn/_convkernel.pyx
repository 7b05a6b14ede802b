# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled convolution kernel: direct summation with float64 accumulation.

Zero padding is handled implicitly by skipping out-of-range taps, so no
padded copy of the input is ever made.
"""

import numpy as np


def conv2d_raw(x, w, bias, int stride_f, int stride_t, int pad_f, int pad_t,
               int dil_f, int dil_t, int groups):
    """Cross-correlate x [N,C,F,T] with w [C_out,C_in/g,kf,kt] -> float32."""
    cdef const float[:, :, :, ::1] xv = x
    cdef const float[:, :, :, ::1] wv = w
    cdef Py_ssize_t n_batch = xv.shape[0]
    cdef Py_ssize_t c_in = xv.shape[1]
    cdef Py_ssize_t f_in = xv.shape[2]
    cdef Py_ssize_t t_in = xv.shape[3]
    cdef Py_ssize_t c_out = wv.shape[0]
    cdef Py_ssize_t c_in_g = wv.shape[1]
    cdef Py_ssize_t k_f = wv.shape[2]
    cdef Py_ssize_t k_t = wv.shape[3]
    cdef Py_ssize_t f_out = (f_in + 2 * pad_f - dil_f * (k_f - 1) - 1) // stride_f + 1
    cdef Py_ssize_t t_out = (t_in + 2 * pad_t - dil_t * (k_t - 1) - 1) // stride_t + 1
    cdef Py_ssize_t c_out_g = c_out // groups

    out = np.empty((n_batch, c_out, f_out, t_out), dtype=np.float32)
    cdef float[:, :, :, ::1] ov = out

    cdef const float[::1] bv
    cdef bint has_bias = bias is not None
    if has_bias:
        bv = bias

    cdef Py_ssize_t n, g, oc, ic, fo, to, u, v, fi, ti
    cdef double acc
    cdef double b_val

    with nogil:
        for n in range(n_batch):
            for oc in range(c_out):
                g = oc // c_out_g
                b_val = bv[oc] if has_bias else 0.0
                for fo in range(f_out):
                    for to in range(t_out):
                        acc = 0.0
                        for ic in range(c_in_g):
                            for u in range(k_f):
                                fi = fo * stride_f + u * dil_f - pad_f
                                if fi < 0 or fi >= f_in:
                                    continue
                                for v in range(k_t):
                                    ti = to * stride_t + v * dil_t - pad_t
                                    if ti < 0 or ti >= t_in:
                                        continue
                                    acc += (<double>xv[n, g * c_in_g + ic, fi, ti]
                                            * <double>wv[oc, ic, u, v])
                        ov[n, oc, fo, to] = <float>(acc + b_val)
    return out
