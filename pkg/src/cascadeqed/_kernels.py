"""Numba kernels for the mode-discretized two-excitation integrator.

State layout (structure-of-arrays, float64 re/im planes for SIMD):
  a           doubly excited emitter, no photons (complex scalar)
  b[n]        singly excited emitter + one photon in mode n
  psi[n, n]   symmetric product-basis two-photon wavefunction; the physical
              normalized-pair amplitudes are c_nm = sqrt(2) psi_nm (n < m)
              and c_nn = psi_nn, so sum |c|^2 over n <= m equals the full
              matrix Frobenius norm of psi.

Equations of motion (diagonal arrays depend on the frame):
  da        = -i (diag_a a + g2 sum_p b_p)
  db_p      = -i (diag_b_p b_p + g2 a + sqrt(2) g1 S_p),   S_p = sum_m psi_pm
  dpsi_nm   = -i ((dph_n + dph_m) psi_nm + (g1/sqrt(2)) (b_n + b_m))

One classic RK4 step for this linear autonomous system is applied in Horner
form, y <- y + h M (y + (h/2) M (y + (h/3) M (y + (h/4) M y))), which needs
only ping-pong buffers; each sweep below computes out = y + c * f(w) and
accumulates the row sums of out on the fly (each thread owns whole rows, so
the result is deterministic).
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange


@njit(cache=True, parallel=True, fastmath=True)
def sweep_psi(yr, yi, wr, wi, br, bi, dph, c, g1s, out_r, out_i, srow_r, srow_i):
    n = dph.shape[0]
    for i in prange(n):
        di = dph[i]
        bri = br[i]
        bii = bi[i]
        sr = 0.0
        si = 0.0
        for j in range(n):
            d = di + dph[j]
            hr = d * wr[i, j] + g1s * (bri + br[j])
            hi = d * wi[i, j] + g1s * (bii + bi[j])
            vr = yr[i, j] + c * hi
            vi = yi[i, j] - c * hr
            out_r[i, j] = vr
            out_i[i, j] = vi
            sr += vr
            si += vi
        srow_r[i] = sr
        srow_i[i] = si


@njit(cache=True, parallel=True, fastmath=True)
def row_norms2(xr, xi, out):
    n = xr.shape[0]
    for i in prange(n):
        s = 0.0
        for j in range(n):
            s += xr[i, j] * xr[i, j] + xi[i, j] * xi[i, j]
        out[i] = s


@njit(cache=True, parallel=True, fastmath=True)
def init_row_sums(xr, xi, srow_r, srow_i):
    n = xr.shape[0]
    for i in prange(n):
        sr = 0.0
        si = 0.0
        for j in range(n):
            sr += xr[i, j]
            si += xi[i, j]
        srow_r[i] = sr
        srow_i[i] = si
