"""Pure-NumPy convolution backend (im2col + einsum).

Same contract as the compiled kernel in ``_convkernel.pyx``: float32 in and
out, accumulation in float64. Used when the extension is not built or when
SPOOFKIT_CONV_BACKEND=numpy.
"""

from __future__ import annotations

import numpy as np


def conv2d_raw(x, w, bias, stride_f, stride_t, pad_f, pad_t,
               dil_f, dil_t, groups):
    """Cross-correlate x [N,C,F,T] with w [C_out,C_in/g,kf,kt] -> float32."""
    n, c_in, f_in, t_in = x.shape
    c_out, c_in_g, k_f, k_t = w.shape
    f_out = (f_in + 2 * pad_f - dil_f * (k_f - 1) - 1) // stride_f + 1
    t_out = (t_in + 2 * pad_t - dil_t * (k_t - 1) - 1) // stride_t + 1

    xp = np.pad(x, ((0, 0), (0, 0), (pad_f, pad_f), (pad_t, pad_t))
                ).astype(np.float64)
    rows = (np.arange(f_out) * stride_f)[:, None] + (np.arange(k_f) * dil_f)[None, :]
    cols = (np.arange(t_out) * stride_t)[:, None] + (np.arange(k_t) * dil_t)[None, :]
    # patches: [N, C_in, F_out, k_f, T_out, k_t]
    patches = xp[:, :, rows[:, :, None, None], cols[None, None, :, :]]
    w64 = w.astype(np.float64)

    if groups == 1:
        out = np.einsum("nciujv,ocuv->noij", patches, w64, optimize=True)
    elif groups == c_in and c_out == c_in and c_in_g == 1:
        # depthwise fast path
        out = np.einsum("nciujv,cuv->ncij", patches, w64[:, 0], optimize=True)
    else:
        c_out_g = c_out // groups
        out = np.empty((n, c_out, f_out, t_out), dtype=np.float64)
        for g in range(groups):
            pg = patches[:, g * c_in_g:(g + 1) * c_in_g]
            wg = w64[g * c_out_g:(g + 1) * c_out_g]
            out[:, g * c_out_g:(g + 1) * c_out_g] = np.einsum(
                "nciujv,ocuv->noij", pg, wg, optimize=True)

    if bias is not None:
        out = out + bias.astype(np.float64)[None, :, None, None]
    return np.ascontiguousarray(out.astype(np.float32))
