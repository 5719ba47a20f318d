"""Numba-jitted kernels; one-for-one mirror of _kernels_numpy.

Guard conventions must stay identical to the numpy module: 0*ln(0) = 0,
fidelity pinned at 1 against a nonzero failure count yields -inf.
fastmath stays off so both paths follow IEEE semantics.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit


@njit(cache=True)
def _csr_matvec(indptr, indices, data, x, out):
    n = indptr.shape[0] - 1
    for row in range(n):
        acc = 0.0 + 0.0j
        for p in range(indptr[row], indptr[row + 1]):
            acc += data[p] * x[indices[p]]
        out[row] = acc


@njit(cache=True)
def csr_rk4(indptr, indices, data, y0, total_t, n_steps, dim, trace_tol):
    n = y0.shape[0]
    y = y0.astype(np.complex128)
    k1 = np.empty(n, dtype=np.complex128)
    k2 = np.empty(n, dtype=np.complex128)
    k3 = np.empty(n, dtype=np.complex128)
    k4 = np.empty(n, dtype=np.complex128)
    tmp = np.empty(n, dtype=np.complex128)
    dt = total_t / n_steps
    for step in range(n_steps):
        _csr_matvec(indptr, indices, data, y, k1)
        for i in range(n):
            tmp[i] = y[i] + (0.5 * dt) * k1[i]
        _csr_matvec(indptr, indices, data, tmp, k2)
        for i in range(n):
            tmp[i] = y[i] + (0.5 * dt) * k2[i]
        _csr_matvec(indptr, indices, data, tmp, k3)
        for i in range(n):
            tmp[i] = y[i] + dt * k3[i]
        _csr_matvec(indptr, indices, data, tmp, k4)
        for i in range(n):
            y[i] = y[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
        tr = 0.0
        for d in range(dim):
            tr += y[d * (dim + 1)].real
        if abs(tr - 1.0) > trace_tol:
            return y, 1, (step + 1) * dt
    return y, 0, total_t


@njit(cache=True)
def loglik_point(family, t, R, S, A, x):
    u = math.exp(x)
    out = 0.0
    for i in range(t.shape[0]):
        z = t[i] / u
        decay = math.exp(-z) if family == 0 else math.exp(-z * z)
        fid = 0.5 * (1.0 + A * decay)
        om = 1.0 - fid
        s = S[i]
        r = R[i]
        if s > 0.0:
            out += s * math.log(fid)
        if r - s > 0.0:
            if om <= 0.0:
                return -math.inf
            out += (r - s) * math.log(om)
    return out


@njit(cache=True)
def loglik_grid(family, t, R, S, A_grid, x_grid):
    na = A_grid.shape[0]
    nx = x_grid.shape[0]
    out = np.empty((na, nx))
    for ia in range(na):
        for ix in range(nx):
            out[ia, ix] = loglik_point(family, t, R, S, A_grid[ia], x_grid[ix])
    return out


@njit(cache=True)
def refine_simplex(family, t, R, S, A0, x0, x_lo, x_hi,
                   step_a, step_x, tol_a, tol_x, max_iter):
    pa = np.empty(3)
    px = np.empty(3)
    pf = np.empty(3)
    pa[0], px[0] = A0, x0
    a1 = A0 + step_a if A0 + step_a <= 1.0 else A0 - step_a
    x2 = x0 + step_x if x0 + step_x <= x_hi else x0 - step_x
    pa[1], px[1] = a1, x0
    pa[2], px[2] = A0, x2
    for k in range(3):
        pf[k] = loglik_point(family, t, R, S, pa[k], px[k])

    it = 0
    while it < max_iter:
        order = np.argsort(-pf)
        pa, px, pf = pa[order], px[order], pf[order]
        if pa.max() - pa.min() < tol_a and px.max() - px.min() < tol_x:
            break
        ca = 0.5 * (pa[0] + pa[1])
        cx = 0.5 * (px[0] + px[1])
        ra = min(max(ca + (ca - pa[2]), 0.0), 1.0)
        rx = min(max(cx + (cx - px[2]), x_lo), x_hi)
        rf = loglik_point(family, t, R, S, ra, rx)
        if rf > pf[0]:
            ea = min(max(ca + 2.0 * (ca - pa[2]), 0.0), 1.0)
            ex = min(max(cx + 2.0 * (cx - px[2]), x_lo), x_hi)
            ef = loglik_point(family, t, R, S, ea, ex)
            if ef > rf:
                pa[2], px[2], pf[2] = ea, ex, ef
            else:
                pa[2], px[2], pf[2] = ra, rx, rf
        elif rf > pf[1]:
            pa[2], px[2], pf[2] = ra, rx, rf
        else:
            if rf > pf[2]:
                ka = min(max(ca + 0.5 * (ca - pa[2]), 0.0), 1.0)
                kx = min(max(cx + 0.5 * (cx - px[2]), x_lo), x_hi)
            else:
                ka = min(max(ca - 0.5 * (ca - pa[2]), 0.0), 1.0)
                kx = min(max(cx - 0.5 * (cx - px[2]), x_lo), x_hi)
            kf = loglik_point(family, t, R, S, ka, kx)
            if kf > min(rf, pf[2]):
                pa[2], px[2], pf[2] = ka, kx, kf
            else:
                for j in range(1, 3):
                    pa[j] = pa[0] + 0.5 * (pa[j] - pa[0])
                    px[j] = px[0] + 0.5 * (px[j] - px[0])
                    pf[j] = loglik_point(family, t, R, S, pa[j], px[j])
        it += 1

    b = int(np.argmax(pf))
    return pa[b], px[b], pf[b]
